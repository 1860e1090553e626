"""
Verification reports: per-case checks against expected values and a suite
summary, emitted as JSON (stable key order) or plain text.
"""

import json
import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from numbers import Number
from typing import Any, Dict, List, Optional

import numpy as np

logger = logging.getLogger(__name__)

ABS = "abs"
REL = "rel"
EQ = "eq"
LE = "le"
GE = "ge"
MODES = (ABS, REL, EQ, LE, GE)


@dataclass(frozen=True)
class Expected:
    """An expected quantity with its tolerance and where the value comes from.

    ``mode`` selects the comparison: ``abs``/``rel`` (elementwise, arrays
    allowed), ``eq`` (exact, for labels and flags), ``le``/``ge``
    (one-sided bound ``measured <= value + tol`` resp. ``>= value - tol``).
    """

    quantity: str
    value: Any
    tol: float = 0.0
    provenance: str = "DERIVED"
    mode: str = ABS


@dataclass
class CheckResult:
    quantity: str
    expected: Any
    measured: Any
    tol: float
    mode: str
    provenance: str
    passed: bool
    residual: Optional[float] = None


@dataclass
class CaseReport:
    case_id: str
    passed: bool
    checks: List[CheckResult] = field(default_factory=list)
    values: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    seconds: Optional[float] = None


@dataclass
class Report:
    cases: List[CaseReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def summary(self) -> OrderedDict:
        n_pass = sum(1 for c in self.cases if c.passed)
        return OrderedDict(
            [("cases", len(self.cases)), ("passed", n_pass), ("failed", len(self.cases) - n_pass)]
        )


def check(expected: Expected, measured: Any) -> CheckResult:
    mode = expected.mode
    residual = None
    if mode == EQ:
        passed = measured == expected.value
    else:
        try:
            got = np.asarray(measured, dtype=float)
            want = np.asarray(expected.value, dtype=float)
        except (TypeError, ValueError):
            got = want = None
        if got is None or (mode in (ABS, REL) and got.shape != want.shape):
            passed = False
        elif mode == LE:
            residual = float(np.max(got - want))
            passed = bool(residual <= expected.tol)
        elif mode == GE:
            residual = float(np.max(want - got))
            passed = bool(residual <= expected.tol)
        else:
            with np.errstate(invalid="ignore"):
                diff = np.abs(got - want)
                if mode == REL:
                    diff = diff / np.maximum(np.abs(want), np.finfo(float).tiny)
            residual = float(np.max(diff)) if diff.size else 0.0
            passed = bool(np.all(np.isfinite(got))) and residual <= expected.tol
    return CheckResult(
        quantity=expected.quantity,
        expected=expected.value,
        measured=measured,
        tol=expected.tol,
        mode=mode,
        provenance=expected.provenance,
        passed=bool(passed),
        residual=residual,
    )


def _jsonable(x: Any) -> Any:
    """Plain JSON values; non-finite floats become the strings ``inf``/``-inf``/``nan``."""
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return OrderedDict((str(k), _jsonable(v)) for k, v in x.items())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, Number):
        if isinstance(x, (int, np.integer)):
            return int(x)
        x = float(x)
        if np.isfinite(x):
            return x
        return "nan" if np.isnan(x) else ("inf" if x > 0 else "-inf")
    if x is None or isinstance(x, str):
        return x
    return str(x)


def _case_dict(case: CaseReport, include_timings: bool) -> OrderedDict:
    d = OrderedDict()
    d["id"] = case.case_id
    d["passed"] = case.passed
    if case.error is not None:
        d["error"] = case.error
    d["checks"] = [
        OrderedDict(
            [
                ("quantity", c.quantity),
                ("passed", c.passed),
                ("mode", c.mode),
                ("expected", _jsonable(c.expected)),
                ("measured", _jsonable(c.measured)),
                ("tol", _jsonable(c.tol)),
                ("residual", _jsonable(c.residual)),
                ("provenance", c.provenance),
            ]
        )
        for c in case.checks
    ]
    d["values"] = OrderedDict((k, _jsonable(case.values[k])) for k in sorted(case.values))
    if include_timings and case.seconds is not None:
        d["seconds"] = case.seconds
    return d


def report_dict(report: Report, include_timings: bool = False) -> OrderedDict:
    d = OrderedDict()
    d["summary"] = report.summary()
    d["passed"] = report.passed
    d["cases"] = [_case_dict(c, include_timings) for c in report.cases]
    return d


def _format_value(x: Any) -> str:
    x = _jsonable(x)
    if isinstance(x, float):
        return "{:.10g}".format(x)
    return json.dumps(x) if isinstance(x, (list, dict)) else str(x)


def emit_report(report: Report, fmt: str = "json", include_timings: bool = False) -> bytes:
    if fmt == "json":
        return (json.dumps(report_dict(report, include_timings), indent=2) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError("unknown report format: {}".format(fmt))
    lines = []
    for case in report.cases:
        status = "PASS" if case.passed else "FAIL"
        head = "{} {}".format(status, case.case_id)
        if include_timings and case.seconds is not None:
            head += " ({:.3f}s)".format(case.seconds)
        lines.append(head)
        if case.error is not None:
            lines.append("  error: {}".format(case.error))
        for c in case.checks:
            lines.append(
                "  [{}] {} = {} (expected {} {} {}, {})".format(
                    "ok" if c.passed else "!!",
                    c.quantity,
                    _format_value(c.measured),
                    c.mode,
                    _format_value(c.expected),
                    _format_value(c.tol),
                    c.provenance,
                )
            )
    s = report.summary()
    lines.append("{} cases | {} passed | {} failed".format(s["cases"], s["passed"], s["failed"]))
    return ("\n".join(lines) + "\n").encode("utf-8")
