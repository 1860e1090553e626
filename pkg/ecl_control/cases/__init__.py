"""
Registry of reproducible example cases run by ``ecl-verify``.
"""

import importlib
import os

from ecl_control.utils import registry

from .case import ExampleCase  # noqa

build_case, register_case, CASE_REGISTRY = registry.setup_registry("--case", base_class=ExampleCase, required=True)


def case_ids():
    return sorted(CASE_REGISTRY)


def import_cases(cases_dir, namespace):
    for file in sorted(os.listdir(cases_dir)):
        path = os.path.join(cases_dir, file)
        if (
            not file.startswith("_")
            and not file.startswith(".")
            and (file.endswith(".py") or os.path.isdir(path))
        ):
            case_module = file[: file.find(".py")] if file.endswith(".py") else file
            importlib.import_module(namespace + "." + case_module)


# automatically import any Python files in the cases/ directory
cases_dir = os.path.dirname(__file__)
import_cases(cases_dir, "ecl_control.cases")
