#!/usr/bin/env python3 -u
# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
"""
Run registered example cases and emit the verification report.
"""

import logging
import os
import sys

from omegaconf import DictConfig

from ecl_control.dataclass.utils import convert_namespace_to_omegaconf
from ecl_control.errors import EXIT_CHECK_FAILED, EXIT_OK, EclError, exit_code
from ecl_control.harness.report import emit_report
from ecl_control.harness.runner import resolve_case_ids, run_cases
from ecl_control.utils import options, utils

logging.basicConfig(
    format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    level=os.environ.get("LOGLEVEL", "INFO").upper(),
    stream=sys.stderr,
)
logger = logging.getLogger("ecl_cli.verify")


def main(cfg: DictConfig) -> int:
    utils.import_user_module(cfg.common)

    ids = resolve_case_ids(cfg.verify.case, cfg.verify.all)
    report = run_cases(ids, cfg)

    utils.write_output(
        emit_report(report, fmt=str(cfg.report.report_format), include_timings=cfg.report.include_timings),
        cfg.report.report_path,
    )
    if not report.passed:
        failed = [c.case_id for c in report.cases if not c.passed]
        logger.error("failed cases: {}".format(", ".join(failed)))
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cli_main(input_args=None) -> int:
    parser = options.get_verify_parser()
    args = options.parse_args_and_problem(parser, input_args)
    if args.case is None and not args.all:
        parser.error("one of --case or --all is required")

    try:
        return main(convert_namespace_to_omegaconf(args))
    except EclError as e:
        logger.error(str(e))
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(cli_main())
