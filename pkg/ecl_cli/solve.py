#!/usr/bin/env python3 -u
# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
"""
Solve the convex reformulation of a control problem and emit the optimum and
the recovered policy as JSON.
"""

import logging
import os
import sys

from omegaconf import DictConfig

from ecl_control.dataclass.utils import convert_namespace_to_omegaconf
from ecl_control.errors import EXIT_OK, EclError, exit_code
from ecl_control.harness import serialization
from ecl_control.problems import setup_problem
from ecl_control.utils import options, utils

logging.basicConfig(
    format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    level=os.environ.get("LOGLEVEL", "INFO").upper(),
    stream=sys.stderr,
)
logger = logging.getLogger("ecl_cli.solve")


def main(cfg: DictConfig) -> int:
    utils.import_user_module(cfg.common)

    problem = setup_problem(cfg.problem, numerics=cfg.numerics, solver=cfg.solver)
    plant = problem.load_plant()
    result = problem.solve(plant)
    logger.info("{}: status {}, gamma {}".format(problem.name, result["status"], result["gamma"]))

    utils.write_output(serialization.dumps(result), cfg.problem.out)
    return EXIT_OK


def cli_main(input_args=None) -> int:
    parser = options.get_solve_parser()
    args = options.parse_args_and_problem(parser, input_args)

    try:
        return main(convert_namespace_to_omegaconf(args))
    except EclError as e:
        logger.error(str(e))
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(cli_main())
