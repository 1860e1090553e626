from .problem import NSD, PSD, SdpProblem, bmat  # noqa
from .solver import SdpSolution, SdpStatus, extract, solve, solve_with_config  # noqa
from .sdpa import to_sdpa, write_sdpa  # noqa
