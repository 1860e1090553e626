from .maps import (  # noqa
    P12_MARGIN,
    AuxGl,
    check_xy,
    congruence,
    congruence_T,
    p12_margin,
    phi_lambda,
    phi_m,
    psi_k,
    psi_p,
    split,
    unpack_lambda,
)
from .lqg import (  # noqa
    LqgConvexPoint,
    LqgLiftedPoint,
    LqgSolution,
    lqg_convex_blocks,
    lqg_cost,
    lqg_gramians,
    lqg_grad,
    lqg_is_convex_member,
    lqg_is_lifted,
    lqg_lift,
    lqg_lift_feasibility,
    lqg_lifted_blocks,
    lqg_riccati_optimum,
    lqg_sdp,
    lqg_solve,
    phi_lqg,
    psi_lqg,
)
from .hinf_of import (  # noqa
    HinfOfConvexPoint,
    HinfOfLiftedPoint,
    HinfOfSolution,
    hinf_of_cost,
    hinf_of_default_subgradient,
    hinf_of_descent,
    hinf_of_extreme_subgradients,
    hinf_of_is_convex_member,
    hinf_of_is_lifted,
    hinf_of_lift,
    hinf_of_lift_feasibility,
    hinf_of_lifted_matrix,
    hinf_of_m_operator,
    hinf_of_norm,
    hinf_of_sdp,
    hinf_of_solve,
    hinf_of_stationarity,
    hinf_of_subgradient,
    phi_hinf_of,
    psi_hinf_of,
)
