"""
Registry of control problems.

A problem bundles the cost of a policy, its stationarity measure, the
non-degeneracy test, the convex solve and the 2-D landscape slices of one
control design problem (LQR, SF-H-infinity, LQG, OF-H-infinity, QI
distributed control).
"""

import argparse
import importlib
import os

from ecl_control.dataclass import Dataclass
from ecl_control.dataclass.utils import merge_with_parent, populate_dataclass
from ecl_control.errors import UnknownCaseError
from hydra.core.config_store import ConfigStore
from omegaconf import OmegaConf

from .problem import PolicySlice, Problem, ProblemConfig  # noqa

PROBLEM_DATACLASS_REGISTRY = {}
PROBLEM_REGISTRY = {}
PROBLEM_CLASS_NAMES = set()


def setup_problem(cfg: Dataclass, **kwargs):
    """Build the problem named by ``cfg._name`` (or ``cfg.problem`` when it is a string)."""
    problem = None
    problem_name = getattr(cfg, "problem", None)

    if isinstance(problem_name, str):
        # flat argparse namespace
        problem = get_problem(problem_name)
        if problem_name in PROBLEM_DATACLASS_REGISTRY:
            dc = PROBLEM_DATACLASS_REGISTRY[problem_name]
            cfg = populate_dataclass(dc(), cfg)
            cfg._name = problem_name
    else:
        problem_name = getattr(cfg, "_name", None)
        if problem_name and problem_name in PROBLEM_DATACLASS_REGISTRY:
            if OmegaConf.is_config(cfg):
                cfg = merge_with_parent(PROBLEM_DATACLASS_REGISTRY[problem_name](), cfg)
            problem = PROBLEM_REGISTRY[problem_name]

    if problem is None:
        raise UnknownCaseError(
            "could not infer the problem from {}; available: {}".format(cfg, ", ".join(sorted(PROBLEM_REGISTRY)))
        )
    return problem.setup_problem(cfg, **kwargs)


def build_problem(name: str, numerics=None, solver=None, **fields):
    """Instantiate a registered problem from keyword fields of its config."""
    cls = get_problem(name)
    dc = PROBLEM_DATACLASS_REGISTRY.get(name, ProblemConfig)
    cfg = dc(**fields)
    cfg._name = name
    return cls.setup_problem(cfg, numerics=numerics, solver=solver)


def register_problem(name, dataclass=None):
    """
    New problems are added with the :func:`register_problem` decorator.

    For example::

        @register_problem("lqr", dataclass=ProblemConfig)
        class LqrProblem(Problem):
            (...)

    .. note::

        All problems must implement the :class:`Problem` interface.

    Args:
        name (str): the name of the problem
    """

    def register_problem_cls(cls):
        if name in PROBLEM_REGISTRY:
            raise ValueError("Cannot register duplicate problem ({})".format(name))
        if not issubclass(cls, Problem):
            raise ValueError("Problem ({}: {}) must extend Problem".format(name, cls.__name__))
        if cls.__name__ in PROBLEM_CLASS_NAMES:
            raise ValueError("Cannot register problem with duplicate class name ({})".format(cls.__name__))
        PROBLEM_REGISTRY[name] = cls
        PROBLEM_CLASS_NAMES.add(cls.__name__)

        if dataclass is not None and not issubclass(dataclass, Dataclass):
            raise ValueError("Dataclass {} must extend Dataclass".format(dataclass))

        cls.__dataclass = dataclass
        cls.registered_name = name
        if dataclass is not None:
            PROBLEM_DATACLASS_REGISTRY[name] = dataclass

            cs = ConfigStore.instance()
            node = dataclass()
            node._name = name
            cs.store(name=name, group="problem", node=node, provider="ecl_control")

        return cls

    return register_problem_cls


def get_problem(name):
    if name not in PROBLEM_REGISTRY:
        raise UnknownCaseError(
            "unknown problem '{}'; registered: {}".format(name, ", ".join(sorted(PROBLEM_REGISTRY)))
        )
    return PROBLEM_REGISTRY[name]


def import_problems(problems_dir, namespace):
    for file in sorted(os.listdir(problems_dir)):
        path = os.path.join(problems_dir, file)
        if (
            not file.startswith("_")
            and not file.startswith(".")
            and (file.endswith(".py") or os.path.isdir(path))
        ):
            module_name = file[: file.find(".py")] if file.endswith(".py") else file
            importlib.import_module(namespace + "." + module_name)

    # expose `<problem>_parser` for documentation
    for problem_name, cls in PROBLEM_REGISTRY.items():
        key = problem_name.replace("-", "_") + "_parser"
        if key in globals():
            continue
        parser = argparse.ArgumentParser(add_help=False)
        group_problem = parser.add_argument_group("Problem name")
        group_problem.add_argument(
            "--problem", metavar=problem_name, help="Enable this problem with: ``--problem=" + problem_name + "``"
        )
        group_args = parser.add_argument_group("Additional command-line arguments")
        cls.add_args(group_args)
        globals()[key] = parser


# automatically import any Python files in the problems/ directory
problems_dir = os.path.dirname(__file__)
import_problems(problems_dir, "ecl_control.problems")
