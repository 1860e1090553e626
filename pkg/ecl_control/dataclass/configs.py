# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from dataclasses import _MISSING_TYPE, dataclass, field
from typing import Any, List, Optional

from ecl_control.dataclass.constants import (
    LOG_FORMAT_CHOICES,
    LYAPUNOV_METHOD_CHOICES,
    REPORT_FORMAT_CHOICES,
    SOLVER_CHOICES,
)

@dataclass
class Dataclass:
    """Base of every config group; field metadata carries the command-line help."""

    _name: Optional[str] = None

    def _get_all_attributes(self) -> List[str]:
        return [k for k in self.__dataclass_fields__.keys() if not k.startswith("_")]

    def _get_type(self, attribute_name: str) -> Any:
        return self.__dataclass_fields__[attribute_name].type

    def _get_help(self, attribute_name: str) -> Optional[str]:
        return self.__dataclass_fields__[attribute_name].metadata.get("help")

    def _get_default(self, attribute_name: str) -> Any:
        f = self.__dataclass_fields__[attribute_name]
        if not isinstance(f.default_factory, _MISSING_TYPE):
            return f.default_factory()
        return getattr(self, attribute_name, f.default)


@dataclass
class CommonConfig(Dataclass):
    no_progress_bar: bool = field(
        default=False,
        metadata={"help": "disable progress bar"}
    )
    log_interval: int = field(
        default=1,
        metadata={"help": "log progress every N cases"}
    )
    log_format: Optional[LOG_FORMAT_CHOICES] = field(
        default=None, metadata={"help": "log format to use"}
    )
    log_file: Optional[str] = field(
        default=None, metadata={"help": "log file to copy metrics to."}
    )
    seed: int = field(
        default=1, metadata={"help": "pseudo random number generator seed"}
    )
    user_dir: Optional[str] = field(
        default=None,
        metadata={
            "help": "path to a python module containing custom extensions (problems and/or cases)"
        },
    )
    num_workers: int = field(
        default=1,
        metadata={"help": "number of worker processes used to run cases (1 runs in-process)"},
    )
    reset_logging: bool = field(
        default=False,
        metadata={"help": "when using Hydra, reset the logging at the beginning of the run"},
    )

@dataclass
class NumericsConfig(Dataclass):
    eig_tol: float = field(
        default=1e-10,
        metadata={"help": "eigenvalue tolerance used by stability and definiteness tests"},
    )
    stability_margin: float = field(
        default=0.0,
        metadata={"help": "required distance of closed-loop eigenvalues from the imaginary axis"},
    )
    psd_clip: float = field(
        default=1e-12,
        metadata={"help": "eigenvalues below this are clipped to zero in matrix square roots"},
    )
    lyapunov_method: LYAPUNOV_METHOD_CHOICES = field(
        default="kronecker",
        metadata={"help": "continuous Lyapunov solver"},
    )
    kronecker_max_dim: int = field(
        default=30,
        metadata={"help": "largest state dimension solved by Kronecker vectorization"},
    )
    norm_rel_tol: float = field(
        default=1e-8, metadata={"help": "relative tolerance of the H-infinity bisection"}
    )
    lmi_tol: float = field(
        default=1e-7, metadata={"help": "tolerance accepted on recomputed LMI certificates"}
    )
    p12_margin: float = field(
        default=1e-6,
        metadata={"help": "minimum singular value of P12, relative to the spectral norm of P"},
    )
    stationarity_tol: float = field(
        default=1e-6,
        metadata={"help": "a point is stationary when the measure is below tol * (1 + |J|)"},
    )
    peak_merge_tol: float = field(
        default=1e-6, metadata={"help": "peaks closer than this (rad/s) are merged"}
    )
    lift_slack: float = field(
        default=1e-8,
        metadata={"help": "relative slack on gamma used by lift feasibility problems"},
    )

@dataclass
class SolverConfig(Dataclass):
    solver: SOLVER_CHOICES = field(
        default="CLARABEL", metadata={"help": "conic solver used through cvxpy"}
    )
    feas_tol: float = field(
        default=1e-8, metadata={"help": "primal/dual feasibility tolerance"}
    )
    gap_tol: float = field(
        default=1e-8, metadata={"help": "duality gap tolerance"}
    )
    max_iter: int = field(
        default=200, metadata={"help": "maximum interior point iterations"}
    )
    boundary_tol: float = field(
        default=1e-6,
        metadata={
            "help": "strict-hinted constraints whose relative minimum eigenvalue falls "
            "below this report NEAR_BOUNDARY"
        },
    )
    eliminate_equalities: bool = field(
        default=True,
        metadata={"help": "substitute the Lyapunov equality when its operator is invertible"},
    )
    recovery_backoff: float = field(
        default=1e-4,
        metadata={
            "help": "relative back-off on gamma used to re-center solutions before "
            "recovering a dynamic policy"
        },
    )
    recovery_cap: float = field(
        default=1e4, metadata={"help": "norm cap on X and Y during re-centering"}
    )
    verbose: bool = field(default=False, metadata={"help": "print solver output"})

@dataclass
class ReportConfig(Dataclass):
    report_format: REPORT_FORMAT_CHOICES = field(
        default="json", metadata={"help": "format of the emitted report"}
    )
    report_path: Optional[str] = field(
        default=None, metadata={"help": "write the report here instead of stdout"}
    )
    include_timings: bool = field(
        default=False,
        metadata={"help": "include wall-clock timings (makes reports run-dependent)"},
    )

@dataclass
class VerifyConfig(Dataclass):
    case: Optional[str] = field(
        default=None, metadata={"help": "id of the registered case to run"}
    )
    all: bool = field(default=False, metadata={"help": "run every registered case"})

@dataclass
class LandscapeConfig(Dataclass):
    grid: Optional[str] = field(
        default=None,
        metadata={"help": "grid spec, e.g. 'k1=-3:3:101,k2=-3:3:101'"},
    )
    slice: Optional[str] = field(
        default=None,
        metadata={"help": "registered 2-D policy slice of the problem (default: its first slice)"},
    )
    csv_path: Optional[str] = field(
        default=None, metadata={"help": "write the grid here instead of stdout"}
    )

@dataclass
class Config(Dataclass):
    common: CommonConfig = field(default_factory=CommonConfig)
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    report: ReportConfig = field(default_factory=ReportConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    landscape: LandscapeConfig = field(default_factory=LandscapeConfig)
    problem: Any = None
