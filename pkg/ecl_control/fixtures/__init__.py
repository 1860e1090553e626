"""
Plant fixtures shipped with the package, as JSON documents in the plant
schema of :mod:`ecl_control.harness.serialization`.
"""

import os

from ecl_control.errors import SchemaError

FIXTURES_DIR = os.path.dirname(__file__)


def fixture_names():
    return sorted(f[: -len(".json")] for f in os.listdir(FIXTURES_DIR) if f.endswith(".json"))


def fixture_path(name: str) -> str:
    path = os.path.join(FIXTURES_DIR, name + ".json")
    if not os.path.exists(path):
        raise SchemaError(name, "no such fixture; available: {}".format(", ".join(fixture_names())))
    return path


def load_fixture(name: str):
    from ecl_control.harness.serialization import load_plant

    return load_plant(fixture_path(name))
