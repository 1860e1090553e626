"""
Independent reference computations used by the test suites.

Nothing here calls into ``ecl_control`` numerics: Riccati and Lyapunov
equations go straight to scipy, norms are sampled on frequency grids and
derivatives are central differences.
"""

from typing import Callable

import numpy as np
import scipy.linalg as la
from scipy import optimize


def random_hurwitz(rng: np.random.Generator, n: int, margin: float = 0.1) -> np.ndarray:
    A = rng.standard_normal((n, n))
    shift = max(0.0, np.max(np.real(la.eigvals(A)))) + margin + rng.uniform(0.0, 1.0)
    return A - shift * np.eye(n)


def random_psd(rng: np.random.Generator, n: int, rank: int = None) -> np.ndarray:
    F = rng.standard_normal((n, n if rank is None else rank))
    return F @ F.T


def random_pd(rng: np.random.Generator, n: int, floor: float = 0.1) -> np.ndarray:
    return random_psd(rng, n) + floor * np.eye(n)


def random_state_data(rng: np.random.Generator, n: int, m: int):
    """(A, B, Bw, Q, R) with (A, B) controllable almost surely."""
    return (
        rng.standard_normal((n, n)),
        rng.standard_normal((n, m)),
        rng.standard_normal((n, n)) + 0.5 * np.eye(n),
        random_pd(rng, n),
        random_pd(rng, m),
    )


def riccati_gain(A, B, Q, R) -> np.ndarray:
    """``u = K x`` optimal gain from scipy's CARE solver."""
    P = la.solve_continuous_are(A, B, Q, R)
    return -la.solve(R, B.T @ P)


def stabilizing_gain(rng: np.random.Generator, A, B, scale: float = 0.05) -> np.ndarray:
    """A random gain near the LQR gain for identity weights, kept stabilizing."""
    n, m = B.shape
    K = riccati_gain(A, B, np.eye(n), np.eye(m))
    for _ in range(20):
        K1 = K + scale * rng.standard_normal(K.shape)
        if np.max(np.real(la.eigvals(A + B @ K1))) < -1e-3:
            return K1
        scale /= 2
    return K


def lqr_optimum(A, B, W, Q, R) -> float:
    """``tr(P* W)`` with P* from scipy."""
    return float(np.trace(la.solve_continuous_are(A, B, Q, R) @ W))


def lqg_two_riccati(A, B2, C2, W, V, Q, R):
    """Optimal LQG cost (the H2 norm, unsquared) and the observer-based policy.

    Returns ``(gamma, (DK, CK, BK, AK))`` with ``gamma^2 = tr(Q Y) + tr(X L V L^T)``.
    """
    X = la.solve_continuous_are(A, B2, Q, R)
    Y = la.solve_continuous_are(A.T, C2.T, W, V)
    F = -la.solve(R, B2.T @ X)
    L = Y @ C2.T @ la.inv(V)
    gamma_sq = np.trace(Q @ Y) + np.trace(X @ L @ V @ L.T)
    AK = A + B2 @ F - L @ C2
    return float(np.sqrt(gamma_sq)), (np.zeros((B2.shape[1], C2.shape[0])), F, L, AK)


def sigma_max_at(A, B, C, D, omega: float) -> float:
    n = A.shape[0]
    G = C @ la.solve(1j * omega * np.eye(n) - A, B) + D
    return float(la.svdvals(G)[0])


def hinf_grid(A, B, C, D=None, num: int = 10000, wmin: float = 1e-4, wmax: float = 1e4) -> float:
    """Largest singular value over ``0``, a log grid and infinity, polished by a bounded search."""
    if D is None:
        D = np.zeros((C.shape[0], B.shape[1]))
    omegas = np.concatenate([[0.0], np.logspace(np.log10(wmin), np.log10(wmax), num)])
    values = np.array([sigma_max_at(A, B, C, D, w) for w in omegas])
    best = float(values.max())
    i = int(values.argmax())
    lo = omegas[max(i - 1, 0)]
    hi = omegas[min(i + 1, len(omegas) - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda w: -sigma_max_at(A, B, C, D, w), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        best = max(best, -float(res.fun))
    feedthrough = float(la.svdvals(D)[0]) if D.size else 0.0
    return max(best, feedthrough)


def central_difference(f: Callable[[np.ndarray], float], X: np.ndarray, h: float = 1e-5) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    G = np.zeros_like(X)
    for idx in np.ndindex(*X.shape):
        E = np.zeros_like(X)
        E[idx] = h
        G[idx] = (f(X + E) - f(X - E)) / (2 * h)
    return G


def finite_horizon_lqg(sys) -> float:
    """Optimal expected cost of the centralized causal problem by dynamic programming.

    Backward Riccati recursion for the state weights ``C^T M C`` plus a
    forward Kalman filter with measurement update before each control; the
    measurement noise enters the cost directly through ``tr(M Sigma_v)``.
    """
    N, n, p = sys.horizon, sys.n, sys.p
    A, B, C = sys.A_blocks, sys.B_blocks, sys.C_blocks
    M, R = sys.M_blocks, sys.R_blocks
    S0 = sys.Sigma_w[:n, :n]
    Sw = sys.Sigma_w[n : 2 * n, n : 2 * n]
    Sv = sys.Sigma_v[:p, :p]

    S = [None] * (N + 1)
    Lam = [None] * N
    S[N] = C[N].T @ M[N] @ C[N]
    for t in range(N - 1, -1, -1):
        Sn = S[t + 1]
        H = R[t] + B[t].T @ Sn @ B[t]
        Lam[t] = A[t].T @ Sn @ B[t] @ la.solve(H, B[t].T @ Sn @ A[t])
        S[t] = C[t].T @ M[t] @ C[t] + A[t].T @ Sn @ A[t] - Lam[t]

    cost = float(np.trace(S[0] @ S0))
    if sys.mu0 is not None:
        cost += float(sys.mu0 @ S[0] @ sys.mu0)
    cost += sum(float(np.trace(S[t + 1] @ Sw)) for t in range(N))
    cost += sum(float(np.trace(M[t] @ Sv)) for t in range(N + 1))

    P = S0
    for t in range(N):
        innov = C[t] @ P @ C[t].T + Sv
        P_post = P - P @ C[t].T @ la.solve(innov, C[t] @ P)
        cost += float(np.trace(Lam[t] @ P_post))
        P = A[t] @ P_post @ A[t].T + Sw
    return cost


def brute_force_pattern(cost: Callable[[np.ndarray], float], dim: int, bound: float = 3.0, num: int = 25):
    """Grid search over ``[-bound, bound]^dim`` polished by Nelder-Mead."""

    def safe(q):
        try:
            value = cost(np.asarray(q, dtype=float))
        except (ArithmeticError, ValueError):
            return 1e12
        return value if np.isfinite(value) else 1e12

    x0 = optimize.brute(safe, [(-bound, bound)] * dim, Ns=num, finish=None)
    x = optimize.fmin(safe, np.atleast_1d(x0), xtol=1e-10, ftol=1e-13, maxiter=20000, maxfun=40000, disp=False)
    return np.atleast_1d(x), float(safe(x))
