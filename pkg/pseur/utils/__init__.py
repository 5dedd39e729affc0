# ------------------------------------------------------------------------
# Modified from BasicSR (https://github.com/xinntao/BasicSR)
# Copyright 2018-2020 BasicSR Authors
# ------------------------------------------------------------------------
from .csv_util import (BEAMPATTERN_HEADER, SWEEP_HEADER, export_beampattern,
                       export_sweep, load_csv, write_csv)
from .logger import MessageLogger, get_env_info, get_root_logger
from .misc import (get_time_str, make_exp_dirs, mkdir_and_rename, scandir,
                   trial_rng)

__all__ = [
    # csv_util.py
    'SWEEP_HEADER',
    'BEAMPATTERN_HEADER',
    'write_csv',
    'load_csv',
    'export_sweep',
    'export_beampattern',
    # logger.py
    'MessageLogger',
    'get_root_logger',
    'get_env_info',
    # misc.py
    'trial_rng',
    'get_time_str',
    'mkdir_and_rename',
    'make_exp_dirs',
    'scandir',
]
