# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
"""
Bridges between the config dataclasses, argparse and hydra.

Every config field becomes a ``--kebab-case`` flag; a parsed namespace is
turned back into hydra overrides and composed against ``config/config.yaml``
so that the argparse front-ends and ``ecl-hydra-verify`` see the same
structured config.
"""

import inspect
import logging
import os
import typing
from argparse import ArgumentError, ArgumentParser, Namespace
from dataclasses import MISSING, is_dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Type

from hydra import compose, initialize
from hydra.core.global_hydra import GlobalHydra
from omegaconf import DictConfig, OmegaConf

from ecl_control.dataclass.configs import Config, Dataclass

logger = logging.getLogger(__name__)


def interpret_dc_type(field_type):
    """Unwrap ``Optional[T]`` to ``T``; ``Any`` is read as a string."""
    if isinstance(field_type, str):
        raise RuntimeError("field should be a type")
    if field_type == Any:
        return str
    args = getattr(field_type, "__args__", None)
    if getattr(field_type, "__origin__", None) is typing.Union and args and type(None) in args:
        return next(a for a in args if a is not type(None))
    return field_type


def _is_enum(t) -> bool:
    return isinstance(t, type) and issubclass(t, Enum)


def _argparse_kwargs(dc: Dataclass, k: str) -> Dict[str, Any]:
    field_type = interpret_dc_type(dc._get_type(k))
    default = dc._get_default(k)

    kwargs = {"help": dc._get_help(k)}
    if default is MISSING:
        kwargs["required"] = True
    if field_type is bool:
        kwargs["action"] = "store_false" if default is True else "store_true"
        kwargs["default"] = default
    elif _is_enum(field_type):
        kwargs["type"] = str
        kwargs["choices"] = [t.value for t in field_type]
        if default is not MISSING:
            kwargs["default"] = None if default is None else str(default)
    else:
        kwargs["type"] = field_type
        if default is not MISSING:
            kwargs["default"] = default
    return kwargs


def gen_parser_from_dataclass(parser: ArgumentParser, dataclass_instance: Dataclass) -> None:
    """Add one ``--flag`` per field of ``dataclass_instance`` to ``parser``."""
    for k in dataclass_instance._get_all_attributes():
        field_type = dataclass_instance._get_type(k)
        if inspect.isclass(field_type) and issubclass(field_type, Dataclass):
            gen_parser_from_dataclass(parser, field_type())
            continue
        try:
            parser.add_argument("--" + k.replace("_", "-"), **_argparse_kwargs(dataclass_instance, k))
        except ArgumentError:
            # the flag is already owned by another group
            pass


def _format_override(key: str, val) -> str:
    if val is None:
        return "{}=null".format(key)
    if isinstance(val, str):
        if val == "":
            return "{}=''".format(key)
        return "{}='{}'".format(key, val.replace("'", r"\'"))
    return "{}={}".format(key, val)


def _override_attr(sub_node: str, data_class: Type[Dataclass], args: Namespace) -> List[str]:
    if not inspect.isclass(data_class) or not issubclass(data_class, Dataclass):
        return []

    defaults = data_class()
    overrides = []
    for k in defaults._get_all_attributes():
        val = getattr(args, k) if hasattr(args, k) else defaults._get_default(k)
        field_type = interpret_dc_type(data_class.__dataclass_fields__[k].type)
        if isinstance(val, Enum):
            val = str(val)
        elif val is not None and field_type in (int, float, bool):
            val = field_type(val)
        overrides.append(_format_override("{}.{}".format(sub_node, k), val))
    return overrides


def override_module_args(args: Namespace) -> Tuple[List[str], List[str]]:
    """Hydra overrides for every config group set from ``args``, and the groups to null out."""
    overrides = []
    deletes = []
    for name, f in Config.__dataclass_fields__.items():
        overrides.extend(_override_attr(name, f.type, args))

    from ecl_control.problems import PROBLEM_DATACLASS_REGISTRY

    problem = getattr(args, "problem", None) if args is not None else None
    if problem in PROBLEM_DATACLASS_REGISTRY:
        overrides.append("problem={}".format(problem))
        overrides.append("problem._name={}".format(problem))
        overrides.extend(_override_attr("problem", PROBLEM_DATACLASS_REGISTRY[problem], args))
    else:
        deletes.append("problem")
    return overrides, deletes


def convert_namespace_to_omegaconf(args: Namespace) -> DictConfig:
    """Convert a flat argparse.Namespace to a structured DictConfig."""
    overrides, deletes = override_module_args(args)

    # relative to this file; ecl_control/config after installation
    config_path = os.path.join("..", "config")

    GlobalHydra.instance().clear()
    with initialize(config_path=config_path, version_base=None):
        try:
            composed_cfg = compose("config", overrides=overrides)
        except Exception:
            logger.error("Error when composing. Overrides: " + str(overrides))
            raise
        for k in deletes:
            composed_cfg[k] = None

    cfg = OmegaConf.create(OmegaConf.to_container(composed_cfg, resolve=True, enum_to_str=True))
    OmegaConf.set_struct(cfg, True)
    return cfg


def populate_dataclass(dataclass: Dataclass, args: Namespace) -> Dataclass:
    for k in dataclass._get_all_attributes():
        if hasattr(args, k):
            setattr(dataclass, k, getattr(args, k))
    return dataclass


def merge_with_parent(dc: Dataclass, cfg: DictConfig) -> DictConfig:
    """Merge ``cfg`` over the defaults of ``dc``, keeping ``cfg``'s place in its parent config."""
    assert is_dataclass(dc)
    merged_cfg = OmegaConf.merge(dc, cfg)
    merged_cfg.__dict__["_parent"] = cfg.__dict__["_parent"]
    OmegaConf.set_struct(merged_cfg, True)
    return merged_cfg


def config_get(cfg: Optional[Any], key: str, default: Any) -> Any:
    """Read ``key`` from a dataclass or DictConfig group, falling back to ``default``."""
    if cfg is None:
        return default
    value = getattr(cfg, key, None)
    return default if value is None else value
