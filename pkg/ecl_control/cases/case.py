import logging
from typing import Any, Dict, List

from ecl_control.errors import EclError
from ecl_control.harness.report import CaseReport, Expected, check

logger = logging.getLogger(__name__)


class ExampleCase(object):
    """
    A reproducible example: builds its plant (usually from a shipped fixture),
    measures a set of named quantities and compares them with expected values,
    each tagged with where the value comes from.

    Subclasses implement :meth:`expected` and :meth:`measure`; cases are
    registered with :func:`~ecl_control.cases.register_case`.
    """

    description = ""

    def __init__(self, numerics=None, solver=None, **kwargs):
        self.numerics = numerics
        self.solver_cfg = solver

    @property
    def case_id(self) -> str:
        return getattr(self, "registered_name", type(self).__name__)

    def problem(self, name: str, **fields):
        from ecl_control.problems import build_problem

        return build_problem(name, numerics=self.numerics, solver=self.solver_cfg, **fields)

    def expected(self) -> List[Expected]:
        raise NotImplementedError

    def measure(self) -> Dict[str, Any]:
        """Named measured quantities; every expected quantity must be present."""
        raise NotImplementedError

    def run(self) -> CaseReport:
        try:
            values = self.measure()
        except EclError as e:
            logger.warning("case {} raised {}: {}".format(self.case_id, type(e).__name__, e))
            return CaseReport(case_id=self.case_id, passed=False, error="{}: {}".format(type(e).__name__, e))

        checks = []
        for exp in self.expected():
            if exp.quantity not in values:
                logger.error("case {} did not measure '{}'".format(self.case_id, exp.quantity))
            checks.append(check(exp, values.get(exp.quantity)))
        passed = bool(checks) and all(c.passed for c in checks)
        return CaseReport(case_id=self.case_id, passed=passed, checks=checks, values=values)
