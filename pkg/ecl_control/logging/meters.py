# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import bisect
import time
from collections import OrderedDict
from typing import Dict, Optional

import numpy as np


def safe_round(number, ndigits):
    if np.ndim(number) == 0 and hasattr(number, "item"):
        number = number.item()
    if isinstance(number, float) and not np.isfinite(number):
        return number
    if hasattr(number, "__round__"):
        return round(number, ndigits)
    return number


class Meter(object):
    """Base class for suite meters. Subclasses set ``value``."""

    def __init__(self, round: Optional[int] = None):
        self.round = round
        self.reset()

    def reset(self):
        raise NotImplementedError

    @property
    def value(self):
        raise NotImplementedError

    @property
    def smoothed_value(self) -> float:
        val = self.value
        if self.round is not None and val is not None:
            val = safe_round(val, self.round)
        return val


class SumMeter(Meter):
    """Running total, e.g. the number of passed checks."""

    def reset(self):
        self.sum = 0

    def update(self, val):
        if val is not None:
            self.sum += val

    @property
    def value(self):
        return self.sum


class MaxMeter(Meter):
    """Largest value seen, e.g. the slowest case of a suite."""

    def reset(self):
        self.max = None

    def update(self, val):
        if val is None:
            return
        val = float(val)
        if self.max is None or val > self.max:
            self.max = val

    @property
    def value(self):
        return self.max


class StopwatchMeter(Meter):
    """Wall-clock seconds between :meth:`start` and :meth:`stop`, summed over laps."""

    def reset(self):
        self.sum = 0.0
        self.start_time = None

    def start(self):
        self.start_time = time.perf_counter()

    def stop(self):
        if self.start_time is not None:
            self.sum += time.perf_counter() - self.start_time
            self.start_time = None

    @property
    def value(self):
        if self.start_time is not None:
            return self.sum + time.perf_counter() - self.start_time
        return self.sum


class MetersDict(OrderedDict):
    """Meters keyed by name and ordered by the priority given when first added."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.priorities = []

    def add_meter(self, key, meter, priority):
        assert key not in self, "MetersDict doesn't support reassignment"
        bisect.insort(self.priorities, (priority, len(self.priorities), key))
        super().__setitem__(key, meter)
        for _, _, k in self.priorities:
            self.move_to_end(k)

    def get_smoothed_value(self, key: str) -> float:
        return self[key].smoothed_value

    def get_smoothed_values(self) -> Dict[str, float]:
        return OrderedDict((key, self[key].smoothed_value) for key in self.keys() if not key.startswith("_"))

    def reset(self):
        for meter in self.values():
            meter.reset()
