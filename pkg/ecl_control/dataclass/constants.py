# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
from enum import Enum, EnumMeta
from typing import List


class StrEnumMeta(EnumMeta):
    # enum values restored by a worker process are not instances of the parent's class
    @classmethod
    def __instancecheck__(cls, other):
        return "enum" in str(type(other))


class StrEnum(Enum, metaclass=StrEnumMeta):
    """Enum whose members compare equal to, and print as, their string value."""

    def __str__(self):
        return self.value

    __repr__ = __str__

    def __eq__(self, other):
        return self.value == str(other)

    def __hash__(self):
        return hash(self.value)


def ChoiceEnum(choices: List[str]):
    return StrEnum("Choices", {k: k for k in choices})


LOG_FORMAT_CHOICES = ChoiceEnum(["json", "none", "simple", "tqdm"])
REPORT_FORMAT_CHOICES = ChoiceEnum(["json", "text"])
LYAPUNOV_METHOD_CHOICES = ChoiceEnum(["kronecker", "bartels_stewart"])
SOLVER_CHOICES = ChoiceEnum(["CLARABEL", "SCS", "CVXOPT"])
PROVENANCE_CHOICES = ChoiceEnum(["PAPER", "DERIVED", "TRIVIAL"])
