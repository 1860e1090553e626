from .serialization import (  # noqa
    PLANT_KINDS,
    POLICY_KINDS,
    dumps,
    emit_plant,
    emit_policy,
    load_json,
    load_plant,
    load_policy,
    loads,
    parse_matrix,
    parse_pattern,
    parse_plant,
    parse_policy,
)
from .report import CaseReport, CheckResult, Expected, Report, check, emit_report, report_dict  # noqa
from .landscape import (  # noqa
    GridAxis,
    feasibility_mask,
    grid_minimum,
    landscape_grid,
    parse_grid,
    read_grid,
    write_grid,
)
from .certify import Certificate, certify  # noqa
