# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import importlib
import logging
import os
import sys
from typing import Optional, Union

logger = logging.getLogger(__name__)


def import_user_module(args):
    """Import ``--user-dir`` so that the problems and cases it registers become available.

    A user module may contain ``problems/`` and ``cases/`` sub-packages; their
    files are imported the same way as the built-in ones.
    """
    module_path = getattr(args, "user_dir", None)
    if module_path is None:
        return

    module_path = os.path.abspath(module_path)
    if not os.path.exists(module_path):
        rel_path = os.path.join(os.path.dirname(__file__), "..", args.user_dir)
        if os.path.exists(rel_path):
            module_path = rel_path
        else:
            raise FileNotFoundError(module_path)

    # ensure that user modules are only imported once
    import_user_module.memo = getattr(import_user_module, "memo", set())
    if module_path in import_user_module.memo:
        return
    import_user_module.memo.add(module_path)

    module_parent, module_name = os.path.split(module_path)
    if module_name in sys.modules:
        raise ImportError(
            "Failed to import --user-dir={} because the corresponding module name "
            "({}) is not globally unique. Please rename the directory to "
            "something unique and try again.".format(module_path, module_name)
        )

    sys.path.insert(0, module_parent)
    importlib.import_module(module_name)

    problems_path = os.path.join(module_path, "problems")
    if os.path.exists(problems_path):
        from ecl_control.problems import import_problems

        import_problems(problems_path, f"{module_name}.problems")

    cases_path = os.path.join(module_path, "cases")
    if os.path.exists(cases_path):
        from ecl_control.cases import import_cases

        import_cases(cases_path, f"{module_name}.cases")


def reset_logging():
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.setLevel(os.environ.get("LOGLEVEL", "INFO").upper())
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        logging.Formatter(
            fmt="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
    )
    root.addHandler(handler)


def write_output(data: Union[str, bytes], path: Optional[str] = None) -> None:
    """Write a command result to ``path``, or to stdout when no path is given."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if path is None:
        sys.stdout.write(data)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(data)
    logger.info("wrote {}".format(path))
