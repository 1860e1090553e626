"""
JSON schema for plants and policies.

A plant document is an object with a ``kind`` discriminator and matrices as
row-major nested arrays::

    {"kind": "state",   "A": .., "B": .., "Bw" | "W": .., "Q": .., "R": ..}
    {"kind": "output",  "A": .., "B2": .., "C2": .., "W": .., "V": .., "Q": .., "R": ..}
    {"kind": "stacked", "horizon": N, "A": .., "B": .., "C": .., "Sigma_w": ..,
     "Sigma_v": .., "M": .., "R": .., ["Sigma_delta0": .., "mu0": .., "pattern": ..]}

``A``/``B``/``C``/``M``/``R`` of a stacked plant are either one matrix
(time invariant) or a list of per-step matrices. Policies use
``{"kind": "static", "K": ..}``, ``{"kind": "dynamic", "DK", "CK", "BK", "AK"}``
or ``{"kind": "stacked", "K": ..}``. Violations raise
:class:`~ecl_control.errors.SchemaError` carrying a JSON path.
"""

import json
import logging
from collections import OrderedDict
from numbers import Number
from typing import Any, Dict, Union

import numpy as np

from ecl_control.errors import EclError, SchemaError
from ecl_control.plant import DynamicPolicy, OutputPlant, Plant, StaticGain
from ecl_control.qi_distributed import SparsityPattern, StackedSystem

logger = logging.getLogger(__name__)

PLANT_KINDS = ("state", "output", "stacked")
POLICY_KINDS = ("static", "dynamic", "stacked")

AnyPlant = Union[Plant, OutputPlant, StackedSystem]


def _is_number(x) -> bool:
    return isinstance(x, Number) and not isinstance(x, bool)


def parse_matrix(obj: Any, path: str) -> np.ndarray:
    """A number (1x1) or a rectangular list of rows of numbers."""
    if _is_number(obj):
        return np.array([[float(obj)]])
    if not isinstance(obj, list) or not obj:
        raise SchemaError(path, "expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(obj):
        if _is_number(row):
            row = [row]
        if not isinstance(row, list):
            raise SchemaError("{}[{}]".format(path, i), "expected a list of numbers")
        for j, x in enumerate(row):
            if not _is_number(x):
                raise SchemaError("{}[{}][{}]".format(path, i, j), "expected a number, got {!r}".format(x))
        rows.append([float(x) for x in row])
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise SchemaError("{}[{}]".format(path, i), "ragged row: {} entries, expected {}".format(len(row), width))
    M = np.array(rows, dtype=float)
    if not np.all(np.isfinite(M)):
        raise SchemaError(path, "entries must be finite")
    return M


def _matrix_or_list(obj: Any, path: str):
    # a list whose first entry is itself a list of lists is a per-step sequence
    if isinstance(obj, list) and obj and isinstance(obj[0], list) and obj[0] and isinstance(obj[0][0], list):
        return [parse_matrix(x, "{}[{}]".format(path, i)) for i, x in enumerate(obj)]
    return parse_matrix(obj, path)


def _require(doc: Dict, key: str, path: str):
    if key not in doc:
        raise SchemaError("{}.{}".format(path, key), "missing required field")
    return doc[key]


def _check_object(doc: Any, path: str, kinds) -> str:
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    kind = _require(doc, "kind", path)
    if kind not in kinds:
        raise SchemaError("{}.kind".format(path), "unknown kind {!r}; expected one of {}".format(kind, ", ".join(kinds)))
    return kind


def _build(path: str, fn, **kwargs):
    try:
        return fn(**kwargs)
    except EclError as e:
        raise SchemaError(path, str(e)) from e


def parse_plant(doc: Any, path: str = "$") -> AnyPlant:
    if isinstance(doc, (str, bytes)):
        doc = loads(doc, path)
    kind = _check_object(doc, path, PLANT_KINDS)
    m = {}
    if kind == "state":
        for key in ("A", "B", "Q", "R"):
            m[key] = parse_matrix(_require(doc, key, path), "{}.{}".format(path, key))
        if "Bw" in doc:
            return _build(path, Plant, Bw=parse_matrix(doc["Bw"], path + ".Bw"), **m)
        W = parse_matrix(_require(doc, "W", path), path + ".W")
        return _build(path, Plant.from_weights, W=W, **m)
    if kind == "output":
        for key in ("A", "B2", "C2", "W", "V", "Q", "R"):
            m[key] = parse_matrix(_require(doc, key, path), "{}.{}".format(path, key))
        return _build(path, OutputPlant, **m)

    horizon = _require(doc, "horizon", path)
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 1:
        raise SchemaError(path + ".horizon", "expected a positive integer")
    for key in ("A", "B", "C", "M", "R"):
        m[key] = _matrix_or_list(_require(doc, key, path), "{}.{}".format(path, key))
    for key in ("Sigma_w", "Sigma_v"):
        m[key] = parse_matrix(_require(doc, key, path), "{}.{}".format(path, key))
    if doc.get("Sigma_delta0") is not None:
        m["Sigma_delta0"] = parse_matrix(doc["Sigma_delta0"], path + ".Sigma_delta0")
    if doc.get("mu0") is not None:
        m["mu0"] = parse_matrix(doc["mu0"], path + ".mu0").reshape(-1)
    return _build(path, StackedSystem.build, horizon=horizon, **m)


def parse_pattern(doc: Any, sys: StackedSystem, path: str = "$.pattern") -> SparsityPattern:
    """``"causal"``, ``"memoryless"``, ``{"delay": d}`` or an explicit 0/1 mask."""
    N, m, p = sys.horizon, sys.m, sys.p
    if doc is None or doc == "causal":
        return SparsityPattern.causal(N, m, p)
    if doc == "memoryless":
        return SparsityPattern.memoryless(N, m, p)
    if isinstance(doc, dict) and "delay" in doc:
        local = doc.get("local")
        local = None if local is None else parse_matrix(local, path + ".local") != 0
        return _build(path, SparsityPattern.delayed, horizon=N, m=m, p=p, delay=int(doc["delay"]), local=local)
    mask = parse_matrix(doc, path)
    return _build(path, SparsityPattern, mask=mask != 0, horizon=N, m=m, p=p)


def parse_policy(doc: Any, path: str = "$"):
    if isinstance(doc, (str, bytes)):
        doc = loads(doc, path)
    kind = _check_object(doc, path, POLICY_KINDS)
    if kind == "static":
        return _build(path, StaticGain, K=parse_matrix(_require(doc, "K", path), path + ".K"))
    if kind == "stacked":
        return parse_matrix(_require(doc, "K", path), path + ".K")
    blocks = {k: parse_matrix(_require(doc, k, path), "{}.{}".format(path, k)) for k in ("DK", "CK", "BK", "AK")}
    return _build(path, DynamicPolicy, **blocks)


def emit_plant(plant: AnyPlant) -> OrderedDict:
    return OrderedDict(plant.to_dict())


def emit_policy(policy) -> OrderedDict:
    if isinstance(policy, np.ndarray):
        return OrderedDict([("kind", "stacked"), ("K", policy.tolist())])
    return OrderedDict(policy.to_dict())


def loads(text: Union[str, bytes], path: str = "$") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(path, "invalid JSON: {}".format(e)) from e


def load_json(filename: str) -> Any:
    try:
        with open(filename, "r") as f:
            return loads(f.read(), filename)
    except OSError as e:
        raise SchemaError(filename, "cannot read: {}".format(e.strerror)) from e


def load_plant(filename: str) -> AnyPlant:
    return parse_plant(load_json(filename), path=filename)


def load_policy(filename: str):
    return parse_policy(load_json(filename), path=filename)


def _to_builtin(x: Any) -> Any:
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError("{} is not JSON serializable".format(type(x).__name__))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, default=_to_builtin) + "\n"
