"""
Cost landscapes over 2-D policy slices, written as CSV with the header
``coord1,coord2,cost``; points outside the stabilizing set get ``inf``.
"""

import io
import logging
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Optional, Sequence, Set, Tuple, Union

import numpy as np
import pandas as pd

from ecl_control.errors import DegeneratePointError, NotHurwitzError, SchemaError

logger = logging.getLogger(__name__)

COLUMNS = ("coord1", "coord2", "cost")
MAX_POINTS_PER_AXIS = 100001


@dataclass(frozen=True)
class GridAxis:
    name: str
    lo: float
    hi: float
    num: int

    @property
    def values(self) -> np.ndarray:
        if self.num == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.num)

    @property
    def step(self) -> float:
        return 0.0 if self.num == 1 else (self.hi - self.lo) / (self.num - 1)


def _float(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SchemaError(where, "expected a number, got {!r}".format(text)) from None


def parse_axis(text: str, index: int) -> GridAxis:
    """``name=lo:hi:num`` or ``name=value`` (a single point)."""
    where = "grid[{}]".format(index)
    if "=" not in text:
        raise SchemaError(where, "expected 'name=lo:hi:num', got {!r}".format(text))
    name, rng = (s.strip() for s in text.split("=", 1))
    parts = rng.split(":")
    if len(parts) == 1:
        v = _float(parts[0], where)
        return GridAxis(name=name, lo=v, hi=v, num=1)
    if len(parts) != 3:
        raise SchemaError(where, "expected 'lo:hi:num', got {!r}".format(rng))
    lo, hi = _float(parts[0], where), _float(parts[1], where)
    try:
        num = int(parts[2])
    except ValueError:
        raise SchemaError(where, "point count must be an integer, got {!r}".format(parts[2])) from None
    if num < 1 or num > MAX_POINTS_PER_AXIS:
        raise SchemaError(where, "point count must be in [1, {}]".format(MAX_POINTS_PER_AXIS))
    if not (np.isfinite(lo) and np.isfinite(hi)) or (num > 1 and not lo < hi):
        raise SchemaError(where, "bounds must be finite with lo < hi")
    return GridAxis(name=name, lo=lo, hi=hi, num=num)


def parse_grid(spec: str) -> Tuple[GridAxis, GridAxis]:
    """E.g. ``"k1=-3:3:101,k2=-3:3:101"``."""
    if not spec or not isinstance(spec, str):
        raise SchemaError("grid", "a grid spec is required")
    axes = [parse_axis(part.strip(), i) for i, part in enumerate(spec.split(","))]
    if len(axes) != 2:
        raise SchemaError("grid", "expected exactly two axes, got {}".format(len(axes)))
    return axes[0], axes[1]


def _safe(cost_fn: Callable[[float, float], float], c1: float, c2: float) -> float:
    try:
        value = float(cost_fn(c1, c2))
    except (NotHurwitzError, DegeneratePointError):
        return np.inf
    return value if np.isfinite(value) else np.inf


def landscape_grid(
    cost_fn: Callable[[float, float], float],
    axes: Sequence[GridAxis],
    rows: Optional[Callable[[Iterable], Iterable]] = None,
) -> pd.DataFrame:
    """Evaluate ``cost_fn`` on the tensor grid, ``coord1`` varying slowest.

    ``rows`` optionally wraps the outer loop (e.g. a progress bar).
    """
    ax1, ax2 = axes
    outer = ax1.values if rows is None else rows(ax1.values)
    records = []
    for c1 in outer:
        for c2 in ax2.values:
            records.append((float(c1), float(c2), _safe(cost_fn, float(c1), float(c2))))
    df = pd.DataFrame.from_records(records, columns=list(COLUMNS))
    logger.debug(
        "landscape {}x{}: {} infeasible points".format(ax1.num, ax2.num, int((~np.isfinite(df["cost"])).sum()))
    )
    return df


def write_grid(df: pd.DataFrame, path_or_buf: Union[str, io.TextIOBase, None] = None) -> Optional[str]:
    """CSV with ``inf`` literals; returns the text when no target is given."""
    return df.to_csv(path_or_buf, index=False, float_format="%.12g", columns=list(COLUMNS))


def check_cols(data: pd.DataFrame, cols: Sequence[Hashable]) -> Tuple[Set[Hashable], Set[Hashable]]:
    """Returns (unexpected, missing) columns of ``data`` against ``cols``."""
    cols = set(cols)
    data_cols = set(data.columns)
    return data_cols - cols, cols - data_cols


def read_grid(path_or_buf) -> pd.DataFrame:
    df = pd.read_csv(path_or_buf)
    unexpected, missing = check_cols(df, COLUMNS)
    if unexpected or missing:
        raise SchemaError(
            str(path_or_buf), "grid columns must be {}; missing {}, unexpected {}".format(
                ",".join(COLUMNS), sorted(missing), sorted(unexpected)
            )
        )
    return df


def feasibility_mask(df: pd.DataFrame, shape: Tuple[int, int]) -> np.ndarray:
    return np.isfinite(df["cost"].to_numpy()).reshape(shape)


def grid_minimum(df: pd.DataFrame) -> pd.Series:
    """The row of smallest finite cost."""
    finite = df[np.isfinite(df["cost"])]
    if finite.empty:
        raise NotHurwitzError("no stabilizing point on the grid")
    return finite.loc[finite["cost"].idxmin()]
