# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
"""
Hydra front-end of ``verify``: ``ecl-hydra-verify verify.all=true numerics.eig_tol=1e-12``.
"""

import logging
import os
import sys

import hydra
from hydra.core.hydra_config import HydraConfig
from omegaconf import OmegaConf, open_dict

from ecl_cli.verify import main as pre_main
from ecl_control.dataclass.configs import Config
from ecl_control.dataclass.initialize import add_defaults, hydra_init
from ecl_control.errors import EclError, exit_code
from ecl_control.utils.utils import reset_logging

logger = logging.getLogger("ecl_cli.hydra_verify")


@hydra.main(config_path=os.path.join("..", "ecl_control", "config"), config_name="config", version_base=None)
def hydra_main(cfg: Config) -> int:
    add_defaults(cfg)

    if cfg.common.reset_logging:
        reset_logging()  # Hydra hijacks logging, fix that
    elif HydraConfig.initialized():
        with open_dict(cfg):
            cfg.job_logging_cfg = OmegaConf.to_container(HydraConfig.get().job_logging, resolve=True)

    cfg = OmegaConf.create(OmegaConf.to_container(cfg, resolve=True, enum_to_str=True))
    OmegaConf.set_struct(cfg, True)

    if cfg.verify.case is None and not cfg.verify.all:
        logger.error("set verify.case=ID or verify.all=true")
        sys.exit(2)

    try:
        code = pre_main(cfg)
    except EclError as e:
        logger.error(str(e))
        code = exit_code(e)
    # hydra discards the return value of the task function
    if code:
        sys.exit(code)
    return code


def cli_main():
    try:
        from hydra._internal.utils import get_args

        cfg_name = get_args().config_name or "ecl_config"
    except Exception:
        logger.warning("Failed to get config name from hydra args")
        cfg_name = "ecl_config"
    hydra_init(cfg_name)
    hydra_main()


if __name__ == "__main__":
    cli_main()
