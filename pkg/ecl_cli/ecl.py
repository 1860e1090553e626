#!/usr/bin/env python3 -u
# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
"""
Umbrella entry point: ``ecl {verify,solve,landscape,certify} [args]``.
"""

import argparse
import importlib
import sys

from ecl_control import __version__

COMMANDS = {
    "verify": "ecl_cli.verify",
    "solve": "ecl_cli.solve",
    "landscape": "ecl_cli.landscape",
    "certify": "ecl_cli.certify",
}


def get_parser():
    parser = argparse.ArgumentParser(prog="ecl", allow_abbrev=False)
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("command", choices=sorted(COMMANDS), help="subcommand to run")
    return parser


def cli_main(input_args=None) -> int:
    input_args = sys.argv[1:] if input_args is None else list(input_args)
    parser = get_parser()
    # only the subcommand is ours, everything after it belongs to the subcommand parser
    args = parser.parse_args(input_args[:1])

    module = importlib.import_module(COMMANDS[args.command])
    return module.cli_main(input_args[1:])


if __name__ == "__main__":
    sys.exit(cli_main())
