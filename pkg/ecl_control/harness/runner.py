"""
Runs registered example cases, in-process or on a pool of worker processes,
and assembles the suite report. Report assembly is single-threaded and keeps
the order of the requested ids.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, Optional, Sequence

from omegaconf import DictConfig, OmegaConf

from ecl_control.cases import build_case, case_ids
from ecl_control.dataclass.utils import config_get
from ecl_control.harness.report import CaseReport, Report
from ecl_control.logging import metrics
from ecl_control.logging.progress_bar import build_progress_bar

logger = logging.getLogger(__name__)


def _as_container(cfg) -> Optional[Dict[str, Any]]:
    if cfg is None:
        return None
    if isinstance(cfg, DictConfig):
        return OmegaConf.to_container(cfg, resolve=True)
    if isinstance(cfg, dict):
        return cfg
    return OmegaConf.to_container(OmegaConf.structured(cfg), resolve=True)


def run_example(case_id: str, numerics=None, solver=None) -> CaseReport:
    """Run one registered case; raises :class:`UnknownCaseError` for unknown ids."""
    case = build_case(case_id, numerics=numerics, solver=solver)
    start = time.perf_counter()
    report = case.run()
    report.seconds = time.perf_counter() - start
    return report


def _run_in_worker(case_id: str, numerics: Optional[Dict], solver: Optional[Dict]) -> CaseReport:
    numerics = OmegaConf.create(numerics) if numerics is not None else None
    solver = OmegaConf.create(solver) if solver is not None else None
    return run_example(case_id, numerics=numerics, solver=solver)


def resolve_case_ids(case: Optional[str], all_cases: bool) -> Sequence[str]:
    if all_cases:
        return case_ids()
    if case is None:
        raise ValueError("either a case id or --all is required")
    return [c.strip() for c in case.split(",") if c.strip()]


def run_cases(ids: Sequence[str], cfg=None) -> Report:
    """Run ``ids`` with the ``common``, ``numerics`` and ``solver`` groups of ``cfg``."""
    common = getattr(cfg, "common", None)
    numerics = getattr(cfg, "numerics", None)
    solver = getattr(cfg, "solver", None)
    num_workers = config_get(common, "num_workers", 1)

    # fail fast on unknown ids before any work is scheduled
    for case_id in ids:
        build_case(case_id, numerics=numerics, solver=solver)

    reports = {}
    with metrics.aggregate("verify", new_root=True) as agg:
        metrics.log_start_time("wall", round=3)
        progress = build_progress_bar(common, list(ids), prefix="verify")
        if num_workers > 1 and len(ids) > 1:
            with ProcessPoolExecutor(max_workers=num_workers) as pool:
                futures = {
                    case_id: pool.submit(_run_in_worker, case_id, _as_container(numerics), _as_container(solver))
                    for case_id in ids
                }
                for case_id in progress:
                    reports[case_id] = futures[case_id].result()
                    _log_case(progress, reports[case_id])
        else:
            for case_id in progress:
                reports[case_id] = run_example(case_id, numerics=numerics, solver=solver)
                _log_case(progress, reports[case_id])
        metrics.log_stop_time("wall")
        progress.print(agg.get_smoothed_values(), tag="verify")

    report = Report(cases=[reports[case_id] for case_id in ids])
    logger.info("{} of {} cases passed".format(report.summary()["passed"], len(ids)))
    return report


def _log_case(progress, case: CaseReport) -> None:
    metrics.log_scalar_sum("cases", 1)
    metrics.log_scalar_sum("passed", int(case.passed))
    metrics.log_scalar_sum("checks", len(case.checks))
    metrics.log_scalar_sum("failed_checks", sum(1 for c in case.checks if not c.passed))
    if case.seconds is not None:
        metrics.log_scalar_max("slowest", case.seconds, round=3)
    if not case.passed:
        failed = [c.quantity for c in case.checks if not c.passed]
        logger.warning("case {} failed: {}".format(case.case_id, case.error or ", ".join(failed)))
    progress.log({"passed": int(case.passed), "checks": len(case.checks)}, tag=case.case_id)
