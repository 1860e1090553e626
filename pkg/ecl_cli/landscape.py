#!/usr/bin/env python3 -u
# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
"""
Evaluate a problem's cost on a 2-D grid over one of its policy slices and
emit the CSV ``coord1,coord2,cost`` (``inf`` where the policy is not
stabilizing).
"""

import logging
import os
import sys

import numpy as np
from omegaconf import DictConfig

from ecl_control.dataclass.utils import convert_namespace_to_omegaconf
from ecl_control.errors import EXIT_OK, EclError, exit_code
from ecl_control.harness.landscape import landscape_grid, parse_grid, write_grid
from ecl_control.logging.progress_bar import build_progress_bar
from ecl_control.problems import setup_problem
from ecl_control.utils import options, utils

logging.basicConfig(
    format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
    level=os.environ.get("LOGLEVEL", "INFO").upper(),
    stream=sys.stderr,
)
logger = logging.getLogger("ecl_cli.landscape")


def main(cfg: DictConfig) -> int:
    utils.import_user_module(cfg.common)

    problem = setup_problem(cfg.problem, numerics=cfg.numerics, solver=cfg.solver)
    plant = problem.load_plant()
    sl = problem.slice(plant, cfg.landscape.slice)
    axes = parse_grid(cfg.landscape.grid or sl.grid)
    logger.info(
        "{} slice '{}' ({}): {}x{} grid".format(problem.name, sl.name, sl.description, axes[0].num, axes[1].num)
    )

    df = landscape_grid(
        problem.slice_cost(plant, sl),
        axes,
        rows=lambda it: build_progress_bar(cfg.common, it, prefix="landscape"),
    )
    logger.info("{} of {} points stabilizing".format(int(np.isfinite(df["cost"]).sum()), len(df)))

    text = write_grid(df, cfg.landscape.csv_path or cfg.problem.out)
    if text is not None:
        utils.write_output(text)
    return EXIT_OK


def cli_main(input_args=None) -> int:
    parser = options.get_landscape_parser()
    args = options.parse_args_and_problem(parser, input_args)

    try:
        return main(convert_namespace_to_omegaconf(args))
    except EclError as e:
        logger.error(str(e))
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(cli_main())
