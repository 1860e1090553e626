import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

from ecl_control.dataclass import Dataclass
from ecl_control.dataclass.utils import config_get, gen_parser_from_dataclass
from ecl_control.errors import SchemaError
from ecl_control.fixtures import fixture_path
from ecl_control.harness import serialization
from ecl_control.plant import DynamicPolicy

logger = logging.getLogger(__name__)


@dataclass
class ProblemConfig(Dataclass):
    plant: Optional[str] = field(
        default=None, metadata={"help": "plant JSON file (see the plant schema)"}
    )
    policy: Optional[str] = field(
        default=None, metadata={"help": "policy JSON file, used by certify"}
    )
    out: Optional[str] = field(
        default=None, metadata={"help": "write the result here instead of stdout"}
    )


@dataclass(frozen=True)
class PolicySlice:
    """A 2-D affine slice ``(c1, c2) -> policy`` of the policy space."""

    name: str
    build: Callable[[float, float], Any]
    grid: str
    description: str = ""


class Problem(object):
    """
    A control problem: how to evaluate the cost of a policy, how to solve the
    convex reformulation, and how to certify a candidate policy.

    Problems are registered with :func:`~ecl_control.problems.register_problem`
    and built from their :class:`ProblemConfig` by
    :func:`~ecl_control.problems.setup_problem`.
    """

    plant_kind = "state"
    fixture: Optional[str] = None

    @classmethod
    def add_args(cls, parser):
        dc = getattr(cls, "__dataclass", None)
        if dc is not None:
            gen_parser_from_dataclass(parser, dc())

    def __init__(self, cfg: ProblemConfig, numerics=None, solver=None, **kwargs):
        self.cfg = cfg
        self.numerics = numerics
        self.solver_cfg = solver

    @classmethod
    def setup_problem(cls, cfg: ProblemConfig, **kwargs):
        return cls(cfg, **kwargs)

    @property
    def name(self) -> str:
        return getattr(self, "registered_name", type(self).__name__)

    def numeric(self, key: str, default):
        return config_get(self.numerics, key, default)

    # plant and policy I/O

    def parse_plant(self, doc, path: str = "$"):
        if isinstance(doc, dict) and doc.get("kind") != self.plant_kind:
            raise SchemaError(
                path + ".kind",
                "problem '{}' needs a '{}' plant, got {!r}".format(self.name, self.plant_kind, doc.get("kind")),
            )
        return serialization.parse_plant(doc, path)

    def load_plant(self, filename: Optional[str] = None):
        """Plant from ``filename`` (default: the problem's config, then its fixture)."""
        filename = filename or getattr(self.cfg, "plant", None)
        if filename is None:
            if self.fixture is None:
                raise SchemaError("plant", "problem '{}' needs --plant".format(self.name))
            filename = fixture_path(self.fixture)
        return self.parse_plant(serialization.load_json(filename), filename)

    def load_policy(self, plant, filename: Optional[str] = None):
        filename = filename or getattr(self.cfg, "policy", None)
        if filename is None:
            raise SchemaError("policy", "problem '{}' needs --policy".format(self.name))
        return self.parse_policy(plant, serialization.load_json(filename), filename)

    def parse_policy(self, plant, doc, path: str = "$"):
        return serialization.parse_policy(doc, path)

    def emit_policy(self, policy) -> OrderedDict:
        return serialization.emit_policy(policy)

    # numerics

    def cost(self, plant, policy) -> float:
        raise NotImplementedError

    def stationarity(self, plant, policy) -> float:
        """Norm of the gradient, or the Clarke measure for nonsmooth costs."""
        raise NotImplementedError

    def nondegenerate(self, plant, policy, cost: float) -> bool:
        """Whether a lifting certificate exists at ``gamma = cost``."""
        raise NotImplementedError

    def solve(self, plant) -> Dict[str, Any]:
        """Solve the convex reformulation; the dict has at least ``gamma`` and ``status``."""
        raise NotImplementedError

    def slices(self, plant) -> Dict[str, PolicySlice]:
        return {}

    def slice(self, plant, name: Optional[str] = None) -> PolicySlice:
        slices = self.slices(plant)
        if not slices:
            raise SchemaError("slice", "problem '{}' has no 2-D slice for this plant".format(self.name))
        if name is None:
            return next(iter(slices.values()))
        if name not in slices:
            raise SchemaError("slice", "unknown slice '{}'; available: {}".format(name, ", ".join(slices)))
        return slices[name]

    def slice_cost(self, plant, sl: PolicySlice) -> Callable[[float, float], float]:
        return lambda c1, c2: self.cost(plant, sl.build(c1, c2))

    # helpers shared by the concrete problems

    @property
    def stationarity_tol(self) -> float:
        return self.numeric("stationarity_tol", 1e-6)

    def lift_level(self, cost: float) -> float:
        """The level at which non-degeneracy is tested: the cost plus a relative slack."""
        return cost * (1.0 + self.numeric("lift_slack", 1e-8))

    def check_policy_shape(self, K, shape, path: str = "$.K"):
        if tuple(K.shape) != tuple(shape):
            raise SchemaError(path, "policy must be {}x{} for this plant, got {}x{}".format(*shape, *K.shape))
        return K


def check_dynamic_policy(plant, K, path: str = "$"):
    """``K`` must be a full-order dynamic policy matching the plant dimensions."""
    if not isinstance(K, DynamicPolicy):
        raise SchemaError(path + ".kind", "output-feedback policies are dynamic")
    want = {"DK": (plant.m, plant.p), "CK": (plant.m, plant.n), "BK": (plant.n, plant.p), "AK": (plant.n, plant.n)}
    for key, shape in want.items():
        got = getattr(K, key).shape
        if got != shape:
            raise SchemaError("{}.{}".format(path, key), "expected {}x{}, got {}x{}".format(*shape, *got))
    return K
