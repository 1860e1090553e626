# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from typing import Optional

from ecl_control.errors import UnknownCaseError

REGISTRIES = {}


def setup_registry(registry_name: str, base_class=None, default=None, required=False):
    """Create a named registry and return ``(build_x, register_x, REGISTRY)``.

    ``build_x(name, **kwargs)`` instantiates the registered class; unknown
    names raise :class:`~ecl_control.errors.UnknownCaseError` so that CLI
    front-ends can map them to a usage error.
    """
    assert registry_name.startswith("--")
    registry_name = registry_name[2:].replace("-", "_")
    if registry_name in REGISTRIES:
        raise ValueError("registry {} already exists".format(registry_name))

    REGISTRY = {}
    REGISTRIES[registry_name] = {"registry": REGISTRY, "default": default}

    def build_x(choice: Optional[str], *extra_args, **extra_kwargs):
        if choice is None:
            choice = default
        if choice is None:
            if required:
                raise ValueError("{} is required!".format(registry_name))
            return None
        if choice not in REGISTRY:
            raise UnknownCaseError(
                "unknown {} '{}'; registered: {}".format(registry_name, choice, ", ".join(sorted(REGISTRY)))
            )
        return REGISTRY[choice](*extra_args, **extra_kwargs)

    def register_x(name):
        def register_x_cls(cls):
            if name in REGISTRY:
                raise ValueError("Cannot register duplicate {} ({})".format(registry_name, name))
            if base_class is not None and not issubclass(cls, base_class):
                raise ValueError("{} must extend {}".format(cls.__name__, base_class.__name__))
            REGISTRY[name] = cls
            cls.registered_name = name
            return cls

        return register_x_cls

    return build_x, register_x, REGISTRY
