"""
H-infinity norm by bisection on the level gamma, using the imaginary-axis
eigenvalues of the associated Hamiltonian matrix, plus extraction of the
peak frequencies and singular subspaces where the norm is attained.

When the norm is attained on a whole frequency interval only a finite set of
refined peaks is returned.

:func:`hinf_norm` also certifies its value with a strict bounded real LMI at a
slightly higher level. The certificate is an SDP, so the cost functions that
evaluate the norm many times call :func:`hinf_norm_with_peaks` without it.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg as la
from scipy.optimize import minimize_scalar

from ecl_control.errors import BracketError, DimensionError, NotHurwitzError
from ecl_control.linalg import as_matrix, check_square, is_hurwitz
from ecl_control.plant.closed_loop import transfer_at

logger = logging.getLogger(__name__)

NORM_REL_TOL = 1e-8
IMAG_TOL = 1e-8
PEAK_MERGE_TOL = 1e-6
PEAK_REL_TOL = 1e-6
MAX_DOUBLINGS = 60
MAX_BISECTIONS = 200
# smallest relative margin at which a strict LMI is resolved by the conic solver
CERT_REL_TOL = 1e-4


@dataclass
class HinfResult:
    norm: float
    lower: float
    peaks: List[float] = field(default_factory=list)
    iterations: int = 0
    certified_level: Optional[float] = None


@dataclass
class PeakData:
    """Frequency response at a peak ``s = j omega`` (``omega = inf`` for the feedthrough)
    and an orthonormal basis of the left singular subspace of the top singular value."""

    omega: float
    value: np.ndarray
    sigma: float
    basis: np.ndarray

    @property
    def s(self) -> complex:
        return complex(np.inf) if np.isinf(self.omega) else 1j * self.omega

    @property
    def multiplicity(self) -> int:
        return self.basis.shape[1]


def _check_abcd(A, B, C, D):
    A = np.zeros((0, 0)) if A is None or np.size(A) == 0 else check_square(A, "A")
    n = A.shape[0]
    if D is None:
        B, C = as_matrix(B, "B"), as_matrix(C, "C")
        D = np.zeros((C.shape[0], B.shape[1]))
    D = as_matrix(D, "D")
    B = np.zeros((0, D.shape[1])) if n == 0 else as_matrix(B, "B")
    C = np.zeros((D.shape[0], 0)) if n == 0 else as_matrix(C, "C")
    if B.shape != (n, D.shape[1]) or C.shape != (D.shape[0], n):
        raise DimensionError(
            "incompatible realization: A {}, B {}, C {}, D {}".format(A.shape, B.shape, C.shape, D.shape)
        )
    if n and not is_hurwitz(A):
        raise NotHurwitzError("A is not Hurwitz: the H-infinity norm is infinite")
    return A, B, C, D


def sigma_max(A, B, C, D, omega: float) -> float:
    G = transfer_at(A, B, C, D, np.inf if np.isinf(omega) else 1j * omega)
    if G.size == 0:
        return 0.0
    return float(la.svdvals(G)[0])


def hamiltonian(A, B, C, D, gamma: float) -> np.ndarray:
    """Hamiltonian whose imaginary eigenvalues are the frequencies where gamma is a singular value.

    Requires ``gamma > sigma_max(D)``.
    """
    m, p = D.shape[1], D.shape[0]
    R = gamma ** 2 * np.eye(m) - D.T @ D
    Rinv = la.inv(R)
    Ah = A + B @ Rinv @ D.T @ C
    return np.block(
        [
            [Ah, B @ Rinv @ B.T],
            [-C.T @ (np.eye(p) + D @ Rinv @ D.T) @ C, -Ah.T],
        ]
    )


def _imaginary_frequencies(H: np.ndarray) -> np.ndarray:
    lam = la.eigvals(H)
    on_axis = np.abs(lam.real) <= IMAG_TOL * np.maximum(1.0, np.abs(lam))
    omegas = np.abs(lam.imag[on_axis])
    return np.unique(np.round(omegas, 12))


def _initial_frequencies(A: np.ndarray) -> List[float]:
    freqs = [0.0]
    if A.shape[0]:
        lam = la.eigvals(A)
        freqs.extend(float(abs(l.imag)) for l in lam if abs(l.imag) > 0)
        freqs.extend(float(abs(l)) for l in lam)
    return sorted(set(freqs))


def hinf_norm_with_peaks(
    A,
    B,
    C,
    D=None,
    rel_tol: float = NORM_REL_TOL,
    merge_tol: float = PEAK_MERGE_TOL,
) -> HinfResult:
    """Bisection on gamma; the returned upper bound has a Hamiltonian without
    imaginary-axis eigenvalues, which certifies ``||G|| < gamma`` strictly."""
    A, B, C, D = _check_abcd(A, B, C, D)
    n = A.shape[0]
    sd = float(la.svdvals(D)[0]) if D.size else 0.0
    if n == 0 or not np.any(B) or not np.any(C):
        peaks = [np.inf] if sd > 0 else []
        return HinfResult(norm=sd, lower=sd, peaks=peaks)

    candidates = _initial_frequencies(A)
    lo = max([sd] + [sigma_max(A, B, C, D, w) for w in candidates])
    if lo <= 0.0:
        return HinfResult(norm=0.0, lower=0.0, peaks=[])

    hi = 2.0 * lo
    for _ in range(MAX_DOUBLINGS):
        if _imaginary_frequencies(hamiltonian(A, B, C, D, hi)).size == 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise BracketError("could not bracket the H-infinity norm (upper bound {:.3e})".format(hi))

    last_omegas = np.array(candidates)
    iterations = 0
    while hi - lo > rel_tol * lo and iterations < MAX_BISECTIONS:
        iterations += 1
        mid = 0.5 * (lo + hi)
        if mid <= sd:
            lo = mid
            continue
        omegas = _imaginary_frequencies(hamiltonian(A, B, C, D, mid))
        if omegas.size == 0:
            hi = mid
            continue
        last_omegas = omegas
        # midpoints between crossing frequencies raise the lower bound quickly
        probes = list(omegas)
        probes += [0.5 * (a + b) for a, b in zip(omegas[:-1], omegas[1:])]
        lo = max([mid] + [sigma_max(A, B, C, D, w) for w in probes])
        lo = min(lo, hi)
    if hi - lo > rel_tol * lo:
        raise BracketError(
            "bisection stalled: [{:.12g}, {:.12g}] after {} steps".format(lo, hi, iterations)
        )
    logger.debug("H-infinity norm {:.12g} after {} bisection steps".format(hi, iterations))

    peaks = refine_peaks(
        A, B, C, D, np.concatenate([last_omegas, candidates]), lo, merge_tol=merge_tol
    )
    return HinfResult(norm=hi, lower=lo, peaks=peaks, iterations=iterations)


def certify_norm(A, B, C, D, result: HinfResult, rel_tol: float = NORM_REL_TOL, solver_cfg=None) -> HinfResult:
    """Certify ``result.norm`` by a strict bounded real LMI at ``norm (1 + max(rel_tol, CERT_REL_TOL))``.

    Raises :class:`BracketError` when no strict certificate exists there.
    """
    from ecl_control.norms.certificates import bounded_real_certificate

    A, B, C, D = _check_abcd(A, B, C, D)
    level = result.norm * (1.0 + max(rel_tol, CERT_REL_TOL))
    if A.shape[0] == 0 or not np.any(B) or not np.any(C) or result.norm == 0.0:
        # the norm is sigma_max(D), which is strictly below any higher level
        result.certified_level = level
        return result
    if bounded_real_certificate(A, B, C, D, level, strict=True, solver_cfg=solver_cfg) is None:
        raise BracketError(
            "H-infinity norm {:.12g} is not certified: no strict bounded real certificate at {:.12g}".format(
                result.norm, level
            )
        )
    result.certified_level = level
    return result


def hinf_norm(A, B, C, D=None, rel_tol: float = NORM_REL_TOL, certify: bool = True, solver_cfg=None) -> float:
    """``||C (sI - A)^-1 B + D||_inf`` to relative accuracy ``rel_tol``, certified
    by :func:`certify_norm` unless ``certify`` is false."""
    result = hinf_norm_with_peaks(A, B, C, D, rel_tol=rel_tol)
    if certify:
        certify_norm(A, B, C, D, result, rel_tol=rel_tol, solver_cfg=solver_cfg)
    return result.norm


def refine_peaks(
    A, B, C, D, candidates: Sequence[float], level: float, merge_tol: float = PEAK_MERGE_TOL,
    peak_rel_tol: float = PEAK_REL_TOL,
) -> List[float]:
    """Refine candidate frequencies by bounded 1-D maximization of sigma_max and
    keep those within ``peak_rel_tol`` of the best value, merging close ones."""
    refined = []
    for w in sorted(set(float(c) for c in candidates if np.isfinite(c))):
        width = max(0.05 * w, 1e-3)
        lo, hi = max(0.0, w - width), w + width
        res = minimize_scalar(
            lambda x: -sigma_max(A, B, C, D, x),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10},
        )
        at_candidate = sigma_max(A, B, C, D, w)
        # keep the candidate itself (e.g. omega = 0 exactly) unless the search improved on it
        if -res.fun > at_candidate * (1.0 + 1e-12):
            refined.append((float(res.x), float(-res.fun)))
        else:
            refined.append((w, at_candidate))
    if D.size:
        refined.append((np.inf, float(la.svdvals(D)[0])))
    if not refined:
        return []
    top = max(max(v for _, v in refined), level)
    kept = sorted(w for w, v in refined if v >= top * (1.0 - peak_rel_tol))
    merged = []
    for w in kept:
        if merged and np.isfinite(w) and abs(w - merged[-1]) <= merge_tol:
            continue
        merged.append(w)
    return merged


def peak_data(A, B, C, D, omega: float, mult_tol: float = PEAK_REL_TOL) -> PeakData:
    """Frequency response and top left singular subspace at ``omega``.

    Singular values within ``mult_tol`` (relative) of the largest count toward
    the multiplicity of the peak.
    """
    A, B, C, D = _check_abcd(A, B, C, D)
    G = transfer_at(A, B, C, D, np.inf if np.isinf(omega) else 1j * omega)
    U, s, _ = la.svd(G)
    top = s[0] if s.size else 0.0
    r = int(np.sum(s >= top * (1.0 - mult_tol))) if top > 0 else 1
    return PeakData(omega=float(omega), value=G, sigma=float(top), basis=U[:, :r])


def frequency_grid_max(A, B, C, D=None, num: int = 10000, wmin: float = 1e-4, wmax: float = 1e4) -> float:
    """Largest singular value on a log-spaced grid plus omega = 0 and infinity."""
    A, B, C, D = _check_abcd(A, B, C, D)
    grid = np.concatenate([[0.0], np.logspace(np.log10(wmin), np.log10(wmax), num), [np.inf]])
    return max(sigma_max(A, B, C, D, w) for w in grid)
