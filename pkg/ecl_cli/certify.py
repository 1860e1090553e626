#!/usr/bin/env python3 -u
# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
"""
Certify a candidate policy: stationarity, non-degeneracy at its cost level
and the gap to the convex optimum. Exits 0 only for a globally optimal
verdict.
"""

import logging
import os
import sys

from omegaconf import DictConfig

from ecl_control.dataclass.utils import convert_namespace_to_omegaconf
from ecl_control.errors import EXIT_CHECK_FAILED, EXIT_OK, EclError, exit_code
from ecl_control.harness import serialization
from ecl_control.harness.certify import GLOBALLY_OPTIMAL, Certificate, certify
from ecl_control.problems import setup_problem
from ecl_control.utils import options, utils

logging.basicConfig(
    format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    level=os.environ.get("LOGLEVEL", "INFO").upper(),
    stream=sys.stderr,
)
logger = logging.getLogger("ecl_cli.certify")


def format_certificate(cert: Certificate, fmt: str = "json") -> str:
    if fmt == "json":
        return serialization.dumps(cert.to_dict())
    lines = ["{}: {}".format(k, "-" if v is None else v) for k, v in cert.to_dict().items()]
    return "\n".join(lines) + "\n"


def main(cfg: DictConfig) -> int:
    utils.import_user_module(cfg.common)

    problem = setup_problem(cfg.problem, numerics=cfg.numerics, solver=cfg.solver)
    plant = problem.load_plant()
    policy = problem.load_policy(plant)
    cert = certify(problem, plant, policy)
    logger.info("{}: {}".format(problem.name, cert.verdict))

    utils.write_output(
        format_certificate(cert, str(cfg.report.report_format)),
        cfg.problem.out or cfg.report.report_path,
    )
    return EXIT_OK if cert.verdict == GLOBALLY_OPTIMAL else EXIT_CHECK_FAILED


def cli_main(input_args=None) -> int:
    parser = options.get_certify_parser()
    args = options.parse_args_and_problem(parser, input_args)
    if getattr(args, "policy", None) is None:
        parser.error("--policy is required")

    try:
        return main(convert_namespace_to_omegaconf(args))
    except EclError as e:
        logger.error(str(e))
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(cli_main())
