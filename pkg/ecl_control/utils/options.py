# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import argparse
from typing import Callable, List, Optional

from ecl_control.dataclass.configs import (
    CommonConfig,
    LandscapeConfig,
    NumericsConfig,
    ReportConfig,
    SolverConfig,
    VerifyConfig,
)
from ecl_control.dataclass.utils import gen_parser_from_dataclass
from ecl_control.utils import utils


def get_verify_parser():
    parser = get_parser("Verify")
    add_report_args(parser)
    group = parser.add_argument_group("Cases")
    gen_parser_from_dataclass(group, VerifyConfig())
    return parser


def get_solve_parser(default_problem=None):
    parser = get_parser("Solve")
    add_problem_args(parser, default_problem)
    return parser


def get_certify_parser(default_problem=None):
    parser = get_parser("Certify")
    add_problem_args(parser, default_problem)
    add_report_args(parser)
    return parser


def get_landscape_parser(default_problem=None):
    parser = get_parser("Landscape")
    add_problem_args(parser, default_problem)
    group = parser.add_argument_group("Landscape")
    gen_parser_from_dataclass(group, LandscapeConfig())
    return parser


def parse_args_and_problem(
    parser: argparse.ArgumentParser,
    input_args: List[str] = None,
    parse_known: bool = False,
    modify_parser: Optional[Callable[[argparse.ArgumentParser], None]] = None,
):
    """
    Args:
        parser (ArgumentParser): the parser
        input_args (List[str]): strings to parse, defaults to sys.argv
        parse_known (bool): only parse known arguments, similar to
            `ArgumentParser.parse_known_args`
        modify_parser (Optional[Callable[[ArgumentParser], None]]):
            function to modify the parser, e.g., to set default values
    """
    # import the user module first so that custom problems become choices
    usr_parser = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    usr_parser.add_argument("--user-dir", default=None)
    usr_args, _ = usr_parser.parse_known_args(input_args)
    utils.import_user_module(usr_args)

    if modify_parser is not None:
        modify_parser(parser)

    # first pass: find the problem, then add its arguments and parse again
    args, _ = parser.parse_known_args(input_args)

    if getattr(args, "problem", None) is not None:
        from ecl_control.problems import PROBLEM_REGISTRY

        group = parser.add_argument_group("Problem-specific configuration")
        PROBLEM_REGISTRY[args.problem].add_args(group)

    if modify_parser is not None:
        modify_parser(parser)

    if parse_known:
        args, extra = parser.parse_known_args(input_args)
        return args, extra
    return parser.parse_args(input_args)


def get_parser(desc):
    # Before creating the true parser, we need to import optional user module
    # in order to eagerly import custom problems and cases.
    usr_parser = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    usr_parser.add_argument("--user-dir", default=None)
    usr_args, _ = usr_parser.parse_known_args()
    utils.import_user_module(usr_args)

    parser = argparse.ArgumentParser(description=desc, allow_abbrev=False)
    gen_parser_from_dataclass(parser, CommonConfig())
    add_numerics_args(parser)
    add_solver_args(parser)
    return parser


def add_numerics_args(parser):
    group = parser.add_argument_group("Numerics")
    gen_parser_from_dataclass(group, NumericsConfig())
    return group


def add_solver_args(parser):
    group = parser.add_argument_group("Conic solver")
    gen_parser_from_dataclass(group, SolverConfig())
    return group


def add_report_args(parser):
    group = parser.add_argument_group("Report")
    gen_parser_from_dataclass(group, ReportConfig())
    return group


def add_problem_args(parser, default_problem=None):
    from ecl_control.problems import PROBLEM_REGISTRY

    group = parser.add_argument_group("Problem")
    # fmt: off
    group.add_argument("--problem", metavar="PROBLEM", default=default_problem,
                       required=default_problem is None,
                       choices=sorted(PROBLEM_REGISTRY.keys()),
                       help="control problem: " + ", ".join(sorted(PROBLEM_REGISTRY.keys())))
    # fmt: on
    return group
