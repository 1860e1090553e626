"""
Block-LMI problem description built on cvxpy expressions.

An :class:`SdpProblem` owns named decision variables (scalar, rectangular or
symmetric), named derived affine expressions, a linear objective and a list of
affine matrix constraints required to be PSD or NSD. Constraints may carry a
strictness hint: the solver cannot impose strict inequalities, but it reports
``NEAR_BOUNDARY`` when a hinted constraint ends up on the boundary of the cone.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Any, Optional, Union

import cvxpy as cp
import numpy as np

from ecl_control.errors import ModelingError

logger = logging.getLogger(__name__)

PSD = "psd"
NSD = "nsd"
VARIABLE_KINDS = ("scalar", "matrix", "symmetric")


@dataclass
class VariableSpec:
    name: str
    kind: str
    shape: tuple
    var: cp.Variable


@dataclass
class LmiConstraint:
    """``expr`` (affine, square) is required PSD; NSD constraints are stored negated."""

    name: str
    expr: cp.Expression
    strict: bool = False
    margin: float = 0.0
    handle: Any = None  # cvxpy constraint of the last solve


@dataclass
class EqualityConstraint:
    name: str
    expr: cp.Expression


class SdpProblem(object):
    """Affine matrix inequality program over named variables.

    Usage::

        p = SdpProblem("toy")
        g = p.scalar("gamma")
        p.add_lmi(bmat([[g, 1], [1, g]]))
        p.minimize(g)
    """

    def __init__(self, name: str = "sdp"):
        self.name = name
        self.variables = OrderedDict()
        self.expressions = OrderedDict()
        self.lmis = []
        self.equalities = []
        self.objective = None
        self.sense = "min"
        self.objective_offset = 0.0

    # variables

    def _add_variable(self, name: str, kind: str, shape: tuple, **kwargs) -> cp.Variable:
        if name in self.variables or name in self.expressions:
            raise ModelingError("duplicate variable name '{}'".format(name))
        if any(d < 0 for d in shape):
            raise ModelingError("negative dimension for '{}': {}".format(name, shape))
        var = cp.Variable(shape, name=name, **kwargs)
        self.variables[name] = VariableSpec(name=name, kind=kind, shape=shape, var=var)
        return var

    def scalar(self, name: str) -> cp.Variable:
        return self._add_variable(name, "scalar", ())

    def matrix(self, name: str, rows: int, cols: int) -> cp.Variable:
        return self._add_variable(name, "matrix", (rows, cols))

    def symmetric(self, name: str, n: int) -> cp.Variable:
        return self._add_variable(name, "symmetric", (n, n), symmetric=True)

    def define(self, name: str, expr) -> cp.Expression:
        """Register a derived affine expression (e.g. an eliminated variable) under ``name``."""
        if name in self.variables or name in self.expressions:
            raise ModelingError("duplicate variable name '{}'".format(name))
        expr = cp.Constant(expr) if not isinstance(expr, cp.Expression) else expr
        if not expr.is_affine():
            raise ModelingError("expression '{}' is not affine".format(name))
        self.expressions[name] = expr
        return expr

    def lookup(self, name: str):
        if name in self.variables:
            return self.variables[name].var
        if name in self.expressions:
            return self.expressions[name]
        raise ModelingError("unknown variable '{}'".format(name))

    # constraints

    def add_lmi(
        self,
        expr,
        sense: str = PSD,
        strict: bool = False,
        margin: float = 0.0,
        name: Optional[str] = None,
    ) -> LmiConstraint:
        """Require ``expr`` PSD (``sense="psd"``) or NSD (``sense="nsd"``).

        ``margin`` > 0 imposes ``expr >= margin * I`` (resp. ``<= -margin * I``).
        """
        expr = expr if isinstance(expr, cp.Expression) else cp.Constant(np.atleast_2d(expr))
        if len(expr.shape) != 2 or expr.shape[0] != expr.shape[1]:
            raise ModelingError("LMI must be square, got shape {}".format(expr.shape))
        if not expr.is_affine():
            raise ModelingError("LMI '{}' is not affine in the variables".format(name))
        if sense not in (PSD, NSD):
            raise ModelingError("unknown LMI sense '{}'".format(sense))
        if sense == NSD:
            expr = -expr
        con = LmiConstraint(
            name=name or "lmi{}".format(len(self.lmis)),
            expr=0.5 * (expr + expr.T),
            strict=strict,
            margin=margin,
        )
        self.lmis.append(con)
        return con

    def add_equality(self, expr, name: Optional[str] = None) -> EqualityConstraint:
        expr = expr if isinstance(expr, cp.Expression) else cp.Constant(expr)
        if not expr.is_affine():
            raise ModelingError("equality '{}' is not affine in the variables".format(name))
        con = EqualityConstraint(name=name or "eq{}".format(len(self.equalities)), expr=expr)
        self.equalities.append(con)
        return con

    # objective

    def minimize(self, expr) -> None:
        self._set_objective(expr, "min")

    def maximize(self, expr) -> None:
        self._set_objective(expr, "max")

    def _set_objective(self, expr, sense):
        expr = expr if isinstance(expr, cp.Expression) else cp.Constant(expr)
        if expr.size != 1 or not expr.is_affine():
            raise ModelingError("objective must be a scalar affine expression")
        self.objective = cp.sum(expr) if expr.shape != () else expr
        self.sense = sense

    # checks

    def validate(self) -> None:
        if self.objective is None:
            raise ModelingError("problem '{}' has no objective".format(self.name))
        if not self.variables:
            raise ModelingError("problem '{}' has no variables".format(self.name))
        known = {spec.var.id for spec in self.variables.values()}
        exprs = [self.objective] + [c.expr for c in self.lmis] + [c.expr for c in self.equalities]
        for expr in exprs:
            for v in expr.variables():
                if v.id not in known:
                    raise ModelingError(
                        "problem '{}' uses unregistered variable '{}'".format(self.name, v.name())
                    )

    def to_cvxpy(self) -> cp.Problem:
        self.validate()
        constraints = []
        for con in self.lmis:
            k = con.expr.shape[0]
            rhs = con.margin * np.eye(k) if con.margin else np.zeros((k, k))
            constraints.append(con.expr >> rhs)
        for con in self.equalities:
            constraints.append(con.expr == 0)
        objective = cp.Minimize(self.objective) if self.sense == "min" else cp.Maximize(self.objective)
        return cp.Problem(objective, constraints)

    @property
    def num_scalars(self) -> int:
        total = 0
        for spec in self.variables.values():
            if spec.kind == "symmetric":
                total += spec.shape[0] * (spec.shape[0] + 1) // 2
            else:
                total += int(np.prod(spec.shape)) if spec.shape else 1
        return total

    def __repr__(self):
        return "SdpProblem(name={!r}, variables={}, lmis={}, equalities={})".format(
            self.name, list(self.variables), len(self.lmis), len(self.equalities)
        )


def as_value(x) -> Union[float, np.ndarray]:
    """Value of a cvxpy expression as float (scalars) or ndarray."""
    v = x.value if isinstance(x, cp.Expression) else x
    if v is None:
        return None
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


def _as_block(x):
    if isinstance(x, cp.Expression):
        return cp.reshape(x, (1, 1), order="F") if x.ndim == 0 else x
    return np.atleast_2d(np.asarray(x, dtype=float))


def bmat(rows) -> cp.Expression:
    """``cp.bmat`` that also accepts scalars, 0-d variables and numpy blocks."""
    return cp.bmat([[_as_block(x) for x in row] for row in rows])
