from .lqr import (  # noqa
    LqrConvexPoint,
    LqrLiftedPoint,
    LqrSolution,
    lqr_convex_cost,
    lqr_convex_path,
    lqr_cost,
    lqr_equality_residual,
    lqr_grad,
    lqr_is_convex_member,
    lqr_is_lifted,
    lqr_lift,
    lqr_lyapunov_pair,
    lqr_phi,
    lqr_psi,
    lqr_riccati_optimum,
    lqr_sdp,
    lqr_solve,
)
from .stationarity import (  # noqa
    clarke_stationarity_measure,
    default_peaks,
    extreme_peak_weights,
    is_stationary,
    peak_subgradient,
    resolve_peaks,
)
from .hinf_sf import (  # noqa
    HinfSfConvexPoint,
    HinfSfLiftedPoint,
    HinfSfSolution,
    hinf_sf_convex_matrix,
    hinf_sf_cost,
    hinf_sf_default_subgradient,
    hinf_sf_extreme_subgradients,
    hinf_sf_is_convex_member,
    hinf_sf_is_lifted,
    hinf_sf_lift,
    hinf_sf_lifted_matrix,
    hinf_sf_norm,
    hinf_sf_phi,
    hinf_sf_psi,
    hinf_sf_sdp,
    hinf_sf_solve,
    hinf_sf_stationarity,
    hinf_sf_subgradient,
)
from .descent import DescentResult, hinf_sf_descent, lqr_descent, policy_descent  # noqa
from .two_state import (  # noqa
    two_state_aff,
    two_state_convex_cost,
    two_state_cost,
    two_state_inverse,
    two_state_map,
    two_state_plant,
    two_state_sdp,
    two_state_solve,
)
from .academic import (  # noqa
    academic_f,
    academic_g,
    academic_g_inv,
    academic_h,
    academic_minimize,
)
