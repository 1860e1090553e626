# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Wrapper around various loggers and progress bars (e.g., tqdm) used while
iterating over verification cases or landscape grid rows.
"""

import json
import logging
import sys
from collections import OrderedDict
from contextlib import contextmanager
from numbers import Number
from typing import Optional

from .meters import Meter


logger = logging.getLogger(__name__)


def progress_bar(
    iterator,
    log_format: Optional[str] = None,
    log_interval: int = 1,
    log_file: Optional[str] = None,
    prefix: Optional[str] = None,
    default_log_format: str = "tqdm",
):
    if log_format is None:
        log_format = default_log_format
    log_format = str(log_format)

    if log_format == "tqdm" and not sys.stderr.isatty():
        log_format = "simple"

    if log_format == "json":
        bar = JsonProgressBar(iterator, prefix, log_interval)
    elif log_format == "none":
        bar = NoopProgressBar(iterator, prefix)
    elif log_format == "simple":
        bar = SimpleProgressBar(iterator, prefix, log_interval)
    elif log_format == "tqdm":
        bar = TqdmProgressBar(iterator, prefix)
    else:
        raise ValueError("Unknown log format: {}".format(log_format))

    if log_file is not None:
        handler = logging.FileHandler(filename=log_file)
        logger.addHandler(handler)

    return bar


def build_progress_bar(cfg, iterator, prefix: Optional[str] = None, default: str = "tqdm"):
    """Build a bar from a ``CommonConfig`` group."""
    if getattr(cfg, "no_progress_bar", False):
        default = "none"
    return progress_bar(
        iterator,
        log_format=getattr(cfg, "log_format", None),
        log_interval=getattr(cfg, "log_interval", 1),
        log_file=getattr(cfg, "log_file", None),
        prefix=prefix,
        default_log_format=default,
    )


def format_stat(stat):
    if isinstance(stat, bool):
        stat = str(stat)
    elif isinstance(stat, Number):
        stat = "{:g}".format(stat)
    elif isinstance(stat, Meter):
        val = stat.smoothed_value
        stat = "-" if val is None else "{:.4g}".format(val)
    return stat


class BaseProgressBar(object):
    """Abstract class for progress bars."""

    def __init__(self, iterable, prefix=None):
        self.iterable = iterable
        self.n = getattr(iterable, "n", 0)
        self.prefix = prefix if prefix is not None else ""

    def __len__(self):
        return len(self.iterable)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False

    def __iter__(self):
        raise NotImplementedError

    def log(self, stats, tag=None, step=None):
        """Log intermediate stats according to log_interval."""
        raise NotImplementedError

    def print(self, stats, tag=None, step=None):
        """Print the summary stats of the run."""
        raise NotImplementedError

    def _str_commas(self, stats):
        return ", ".join(key + "=" + stats[key].strip() for key in stats.keys())

    def _str_pipes(self, stats):
        return " | ".join(key + " " + stats[key].strip() for key in stats.keys())

    def _format_stats(self, stats):
        postfix = OrderedDict(stats)
        for key in postfix.keys():
            postfix[key] = str(format_stat(postfix[key]))
        return postfix


@contextmanager
def rename_logger(logger, new_name):
    old_name = logger.name
    if new_name is not None:
        logger.name = new_name
    try:
        yield logger
    finally:
        logger.name = old_name


class _CountingProgressBar(BaseProgressBar):

    def __init__(self, iterable, prefix=None, log_interval=1):
        super().__init__(iterable, prefix)
        self.log_interval = log_interval
        self.i = None
        self.size = None

    def __iter__(self):
        self.size = len(self.iterable)
        for i, obj in enumerate(self.iterable, start=self.n):
            self.i = i
            yield obj

    def _should_log(self, step):
        step = step if step is not None else (self.i + 1 if self.i is not None else 0)
        return step > 0 and self.log_interval is not None and step % self.log_interval == 0


class JsonProgressBar(_CountingProgressBar):
    """Log output in JSON format."""

    def log(self, stats, tag=None, step=None):
        if self._should_log(step):
            stats = self._format_json(stats, position=self.i)
            with rename_logger(logger, tag):
                logger.info(json.dumps(stats))

    def print(self, stats, tag=None, step=None):
        if tag is not None:
            stats = OrderedDict([(tag + "_" + k, v) for k, v in stats.items()])
        with rename_logger(logger, tag):
            logger.info(json.dumps(self._format_json(stats)))

    def _format_json(self, stats, position=None):
        postfix = OrderedDict()
        if position is not None:
            postfix["case"] = position + 1
        for key in stats.keys():
            if not key.startswith("_"):
                postfix[key] = format_stat(stats[key])
        return postfix


class NoopProgressBar(BaseProgressBar):
    """No logging."""

    def __iter__(self):
        for obj in self.iterable:
            yield obj

    def log(self, stats, tag=None, step=None):
        pass

    def print(self, stats, tag=None, step=None):
        pass


class SimpleProgressBar(_CountingProgressBar):
    """A minimal logger for non-TTY environments."""

    def log(self, stats, tag=None, step=None):
        if self._should_log(step):
            postfix = self._str_commas(self._format_stats(stats))
            with rename_logger(logger, tag):
                logger.info(
                    "{}:  {:5d} / {:d} {}".format(
                        self.prefix, self.i + 1, self.size, postfix
                    )
                )

    def print(self, stats, tag=None, step=None):
        postfix = self._str_pipes(self._format_stats(stats))
        with rename_logger(logger, tag):
            logger.info("{} | {}".format(self.prefix, postfix))


class TqdmProgressBar(BaseProgressBar):
    """Log to tqdm."""

    def __init__(self, iterable, prefix=None):
        super().__init__(iterable, prefix)
        from tqdm import tqdm

        self.tqdm = tqdm(
            iterable,
            self.prefix,
            leave=False,
            disable=(logger.getEffectiveLevel() > logging.INFO),
        )

    def __iter__(self):
        return iter(self.tqdm)

    def log(self, stats, tag=None, step=None):
        self.tqdm.set_postfix(self._format_stats(stats), refresh=False)

    def print(self, stats, tag=None, step=None):
        postfix = self._str_pipes(self._format_stats(stats))
        with rename_logger(logger, tag):
            logger.info("{} | {}".format(self.prefix, postfix))

