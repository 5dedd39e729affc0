# ------------------------------------------------------------------------
# Modified from BasicSR (https://github.com/xinntao/BasicSR)
# Copyright 2018-2020 BasicSR Authors
# ------------------------------------------------------------------------
import importlib
from os import path as osp

from pseur.utils import scandir
from .arch_util import BaseReconstructor

# automatically scan and import arch modules
# scan all the files under the 'archs' folder and collect files ending with
# '_arch.py'
arch_folder = osp.dirname(osp.abspath(__file__))
arch_filenames = [
    osp.splitext(osp.basename(v))[0] for v in scandir(arch_folder)
    if v.endswith('_arch.py')
]
# import all the arch modules
_arch_modules = [
    importlib.import_module(f'pseur.models.archs.{file_name}')
    for file_name in arch_filenames
]


def dynamic_instantiation(modules, cls_type, opt):
    """Dynamically instantiate a reconstructor class.

    Args:
        modules (list[importlib modules]): List of modules from importlib
            files.
        cls_type (str): Class name; must be a ``BaseReconstructor``
            subclass.
        opt (dict): Class initialization kwargs.

    Returns:
        BaseReconstructor: Instantiated reconstructor.
    """
    cls_ = None
    for module in modules:
        candidate = getattr(module, cls_type, None)
        if isinstance(candidate, type) and \
                issubclass(candidate, BaseReconstructor):
            cls_ = candidate
            break
    if cls_ is None:
        raise ValueError(f'Reconstructor {cls_type} is not found.')
    try:
        return cls_(**opt)
    except TypeError as err:
        raise ValueError(f'Invalid options for {cls_type}: {err}') from err


def define_reconstructor(opt):
    """Reconstructor named by ``opt['type']``, built from the other keys."""
    opt = dict(opt)
    if 'type' not in opt:
        raise ValueError(f'Reconstructor options need a type, got {opt}.')
    reconstructor_type = opt.pop('type')
    return dynamic_instantiation(_arch_modules, reconstructor_type, opt)
