"""
SDPA-sparse export of an :class:`SdpProblem`, for cross-checking against
external SDP solvers.

Layout of the written text::

    "comment line(s)
    m                      number of scalar coordinates
    nBlocks
    blockStruct            LMI sizes; paired equalities as one negative (diagonal) block
    c_1 ... c_m            objective coefficients (minimization)
    matno blkno i j value  one line per nonzero upper-triangular entry, 1-based

The problem is written in SDPA's primal form ``min c^T x`` subject to
``sum_i F_i x_i - F_0 >= 0``. Each LMI ``M(x) >= margin*I`` yields ``F_0 =
margin*I - M(0)`` and ``F_i = M(e_i) - M(0)``. An affine equality ``E(x) = 0``
with k entries becomes a diagonal block of size 2k holding ``E`` and ``-E``.
Entries are ordered by matno, blkno, i, j. Coordinates enumerate variables in
declaration order: scalars, rectangular matrices row-major, symmetric matrices
by their upper triangle row-major.
"""

import logging
from typing import List, Tuple

import numpy as np

from ecl_control.conic.problem import SdpProblem

logger = logging.getLogger(__name__)


def _coordinates(problem: SdpProblem) -> List[Tuple[str, Tuple[int, int]]]:
    coords = []
    for name, spec in problem.variables.items():
        if spec.kind == "scalar":
            coords.append((name, ()))
        elif spec.kind == "symmetric":
            n = spec.shape[0]
            coords.extend((name, (i, j)) for i in range(n) for j in range(i, n))
        else:
            rows, cols = spec.shape
            coords.extend((name, (i, j)) for i in range(rows) for j in range(cols))
    return coords


def _set_point(problem: SdpProblem, active=None) -> None:
    for name, spec in problem.variables.items():
        if spec.kind == "scalar":
            spec.var.value = 0.0
        else:
            spec.var.value = np.zeros(spec.shape)
    if active is None:
        return
    name, idx = active
    spec = problem.variables[name]
    if spec.kind == "scalar":
        spec.var.value = 1.0
        return
    value = np.zeros(spec.shape)
    i, j = idx
    value[i, j] = 1.0
    if spec.kind == "symmetric":
        value[j, i] = 1.0
    spec.var.value = value


def _evaluate(problem: SdpProblem):
    lmis = [np.atleast_2d(np.asarray(c.expr.value, dtype=float)) for c in problem.lmis]
    eqs = [np.asarray(c.expr.value, dtype=float).ravel(order="F") for c in problem.equalities]
    return float(problem.objective.value), lmis, eqs


def to_sdpa(problem: SdpProblem) -> str:
    problem.validate()
    saved = {name: spec.var.value for name, spec in problem.variables.items()}
    coords = _coordinates(problem)
    try:
        _set_point(problem)
        obj0, lmi0, eq0 = _evaluate(problem)
        columns = []
        for coord in coords:
            _set_point(problem, coord)
            obj, lmi, eq = _evaluate(problem)
            columns.append(
                (
                    obj - obj0,
                    [M - M0 for M, M0 in zip(lmi, lmi0)],
                    [E - E0 for E, E0 in zip(eq, eq0)],
                )
            )
    finally:
        for name, spec in problem.variables.items():
            spec.var.value = saved[name]

    sign = 1.0 if problem.sense == "min" else -1.0
    block_sizes = [M.shape[0] for M in lmi0]
    eq_size = sum(2 * E.size for E in eq0)
    if eq_size:
        block_sizes.append(-eq_size)

    def eq_diag(parts):
        if not parts:
            return np.zeros(0)
        stacked = np.concatenate(parts)
        return np.concatenate([stacked, -stacked])

    lines = [
        '"{}: {} coordinates, {} LMI blocks, {} equality rows'.format(
            problem.name, len(coords), len(lmi0), eq_size // 2
        ),
        '"sense={}, objective offset={!r}'.format(problem.sense, sign * (obj0 + problem.objective_offset)),
        str(len(coords)),
        str(len(block_sizes)),
        " ".join(str(b) for b in block_sizes),
        " ".join("{:.17g}".format(sign * col[0] + 0.0) for col in columns),
    ]

    def emit(matno, mats, diag):
        for blk, M in enumerate(mats, start=1):
            k = M.shape[0]
            for i in range(k):
                for j in range(i, k):
                    if M[i, j] != 0.0:
                        lines.append("{} {} {} {} {:.17g}".format(matno, blk, i + 1, j + 1, M[i, j]))
        if diag.size:
            blk = len(mats) + 1
            for i, v in enumerate(diag):
                if v != 0.0:
                    lines.append("{} {} {} {} {:.17g}".format(matno, blk, i + 1, i + 1, v))

    F0 = [c.margin * np.eye(M.shape[0]) - M for c, M in zip(problem.lmis, lmi0)]
    emit(0, F0, -eq_diag(eq0))
    for idx, (_, dlmi, deq) in enumerate(columns, start=1):
        emit(idx, dlmi, eq_diag(deq))

    logger.debug("exported '{}' with {} lines".format(problem.name, len(lines)))
    return "\n".join(lines) + "\n"


def write_sdpa(problem: SdpProblem, path: str) -> None:
    with open(path, "w") as f:
        f.write(to_sdpa(problem))
