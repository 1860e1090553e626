#!/usr/bin/env python3
# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import os
import subprocess
import sys

from setuptools import find_packages, setup


if sys.version_info < (3, 8):
    sys.exit("Sorry, Python >= 3.8 is required for ecl_control.")


def write_version_py():
    with open(os.path.join("ecl_control", "version.txt")) as f:
        version = f.read().strip()

    # append latest commit hash to version string
    try:
        sha = (
            subprocess.check_output(["git", "rev-parse", "HEAD"], stderr=subprocess.DEVNULL)
            .decode("ascii")
            .strip()
        )
        version += "+" + sha[:7]
    except Exception:
        pass

    # write version info to ecl_control/version.py
    with open(os.path.join("ecl_control", "version.py"), "w") as f:
        f.write('__version__ = "{}"\n'.format(version))
    return version


version = write_version_py()


with open("README.md") as f:
    readme = f.read()


def do_setup(package_data):
    setup(
        name="ecl_control",
        version=version,
        description="Extended convex liftings for certifying global optimality in policy optimization",
        classifiers=[
            "Intended Audience :: Science/Research",
            "Programming Language :: Python :: 3.8",
            "Programming Language :: Python :: 3.9",
            "Programming Language :: Python :: 3.10",
            "Programming Language :: Python :: 3.11",
            "Topic :: Scientific/Engineering :: Mathematics",
        ],
        long_description=readme,
        long_description_content_type="text/markdown",
        python_requires=">=3.8",
        install_requires=[
            "hydra-core>=1.2",
            "omegaconf>=2.1",
            "numpy",
            "scipy>=1.7",
            "cvxpy>=1.3",
            "clarabel",
            "pandas",
            "tqdm",
        ],
        extras_require={
            "test": ["pytest", "hypothesis"],
        },
        packages=find_packages(
            exclude=[
                "examples",
                "examples.*",
                "tests",
                "tests.*",
            ]
        ),
        package_data=package_data,
        test_suite="tests",
        entry_points={
            "console_scripts": [
                "ecl = ecl_cli.ecl:cli_main",
                "ecl-verify = ecl_cli.verify:cli_main",
                "ecl-solve = ecl_cli.solve:cli_main",
                "ecl-landscape = ecl_cli.landscape:cli_main",
                "ecl-certify = ecl_cli.certify:cli_main",
                "ecl-hydra-verify = ecl_cli.hydra_verify:cli_main",
            ],
        },
        zip_safe=False,
    )


def get_files(path, relative_to="ecl_control"):
    all_files = []
    for root, _dirs, files in os.walk(path, followlinks=True):
        root = os.path.relpath(root, relative_to)
        for file in files:
            if file.endswith(".pyc") or file.endswith(".py"):
                continue
            all_files.append(os.path.join(root, file))
    return all_files


if __name__ == "__main__":
    package_data = {
        "ecl_control": (
            ["version.txt"]
            + get_files(os.path.join("ecl_control", "config"))
            + get_files(os.path.join("ecl_control", "fixtures"))
        )
    }
    do_setup(package_data)
