from .stacked import StackedSystem  # noqa
from .pattern import SparsityPattern, qi_check, qi_check_polarization  # noqa
from .distributed import (  # noqa
    DistributedSolution,
    cost_k,
    cost_k_grad,
    cost_q,
    cost_q_grad,
    h_inv,
    h_map,
    normal_equations,
    open_loop_cost,
    projected_gradient_norm,
    solve_distributed,
)
