# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
from dataclasses import MISSING
from typing import Any

from hydra.core.config_store import ConfigStore
from omegaconf import DictConfig, OmegaConf

from ecl_control.dataclass.configs import Config

logger = logging.getLogger(__name__)


def hydra_init(cfg_name="ecl_config") -> None:
    """Store :class:`Config` and each of its groups in hydra's ConfigStore."""
    cs = ConfigStore.instance()
    cs.store(name=cfg_name, node=Config)

    for name, f in Config.__dataclass_fields__.items():
        # the problem slot is filled per problem by register_problem
        if f.type == Any:
            continue
        # base-class fields such as _name are not config groups
        if f.default_factory is MISSING:
            continue
        node = f.default_factory()
        try:
            cs.store(name=name, node=node)
        except BaseException:
            logger.error("cannot store config group {}: {}".format(name, node))
            raise


def add_defaults(cfg: DictConfig) -> None:
    """Expand ``problem=NAME`` into the defaults of that problem's dataclass."""
    from ecl_control.dataclass.utils import merge_with_parent
    from ecl_control.problems import PROBLEM_DATACLASS_REGISTRY

    problem = cfg.get("problem")
    if problem is None:
        return

    OmegaConf.set_struct(cfg, False)
    if isinstance(problem, str):
        problem = DictConfig({"_name": problem})
    dc = PROBLEM_DATACLASS_REGISTRY.get(problem.get("_name"))
    if dc is not None:
        cfg.problem = merge_with_parent(dc(), problem)
