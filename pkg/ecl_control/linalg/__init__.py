from .spectral import (  # noqa
    EIG_TOL,
    PSD_CLIP,
    Definiteness,
    as_matrix,
    block_diag,
    check_square,
    eig_real_parts,
    is_controllable,
    is_hurwitz,
    is_observable,
    min_eig,
    psd_sqrt,
    schur_psd_check,
    spectral_abscissa,
    sym,
)
from .lyapunov import lyapunov_operator, lyapunov_residual, solve_lyapunov_ct  # noqa
from .riccati import lqr_gain, riccati_residual, solve_riccati_ct  # noqa
