from .h2 import (  # noqa
    controllability_gramian,
    h2_norm,
    h2_norm_sq,
    h2_norm_sq_dual,
    observability_gramian,
)
from .hinf import (  # noqa
    CERT_REL_TOL,
    HinfResult,
    PeakData,
    certify_norm,
    frequency_grid_max,
    hamiltonian,
    hinf_norm,
    hinf_norm_with_peaks,
    peak_data,
    refine_peaks,
    sigma_max,
)
from .certificates import (  # noqa
    bounded_real_certificate,
    bounded_real_matrix,
    h2_certificate_violation,
    h2_lmi_blocks,
    h2_lmi_certificate,
    nsd_violation,
    psd_violation,
)
