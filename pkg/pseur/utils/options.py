# ------------------------------------------------------------------------
# Modified from BasicSR (https://github.com/xinntao/BasicSR)
# Copyright 2018-2020 BasicSR Authors
# ------------------------------------------------------------------------
import copy
import numpy as np
import yaml
from collections import OrderedDict
from os import path as osp

MISMATCH_TYPES = ('none', 'look_direction', 'gain_phase',
                  'coherent_scattering')
SWEEP_AXES = ('snr_db', 'num_snapshots')
DEFAULT_SWEEP_VALUES = {
    'snr_db': [float(v) for v in range(-20, 31, 5)],
    'num_snapshots': list(range(10, 101, 10)),
}


def ordered_yaml():
    """Support OrderedDict for yaml.

    Returns:
        yaml Loader and Dumper.
    """
    try:
        from yaml import CDumper as Dumper
        from yaml import CLoader as Loader
    except ImportError:
        from yaml import Dumper, Loader

    _mapping_tag = yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG

    def dict_representer(dumper, data):
        return dumper.represent_dict(data.items())

    def dict_constructor(loader, node):
        return OrderedDict(loader.construct_pairs(node))

    Dumper.add_representer(OrderedDict, dict_representer)
    Loader.add_constructor(_mapping_tag, dict_constructor)
    return Loader, Dumper


def default_opt():
    """Options of the no-mismatch simulation: M=20 sensors, SOI at 10 deg,
    two 30 dB interferers at -50 and 30 deg, 30 snapshots, 100 trials."""
    return OrderedDict(
        name='Example1_snr',
        manual_seed=0,
        num_worker=1,
        model_type='MVDRBeamformer',
        scenario=OrderedDict(
            array=OrderedDict(
                num_elements=20, spacing_wavelengths=0.5, grid_step=0.9),
            noise_power=1.0,
            soi=OrderedDict(direction=10.0, snr_db=10.0),
            interferers=[
                OrderedDict(direction=-50.0, inr_db=30.0, drift=0.0),
                OrderedDict(direction=30.0, inr_db=30.0, drift=0.0),
            ],
            mismatch=OrderedDict(type='none'),
            look_direction=None,
            sector_half_width=6.0),
        sweep=OrderedDict(
            axis='snr_db',
            values=list(DEFAULT_SWEEP_VALUES['snr_db']),
            num_snapshots=30,
            snr_db=10.0),
        trials=100,
        methods=OrderedDict([
            ('pseur', OrderedDict(type='PseurReconstructor')),
            ('ipn-cc', OrderedDict(type='CaponReconstructor')),
            ('ipn-meps', OrderedDict(type='MepsReconstructor')),
            ('smi', OrderedDict(type='SampleReconstructor')),
        ]),
        metrics=OrderedDict([
            ('sinr', OrderedDict(type='calculate_sinr')),
            ('deviation', OrderedDict(type='calculate_deviation')),
        ]),
        path=OrderedDict(results_root=None))


def _merge(base, update):
    """Recursively overlay ``update`` on ``base``. Lists are replaced."""
    for key, val in update.items():
        if isinstance(val, dict) and isinstance(base.get(key), dict) \
                and key != 'methods':
            _merge(base[key], val)
        else:
            base[key] = copy.deepcopy(val)
    return base


def _validate(opt):
    if int(opt['trials']) < 1:
        raise ValueError(f'trials must be >= 1, got {opt["trials"]}.')
    if int(opt['num_worker']) < 1:
        raise ValueError(
            f'num_worker must be >= 1, got {opt["num_worker"]}.')

    mismatch = opt['scenario']['mismatch']
    if mismatch.get('type', 'none') not in MISMATCH_TYPES:
        raise ValueError(f'Unknown mismatch type {mismatch.get("type")}; '
                         f'supported: {MISMATCH_TYPES}.')

    sweep = opt['sweep']
    if sweep['axis'] not in SWEEP_AXES:
        raise ValueError(
            f'Unknown sweep axis {sweep["axis"]}; supported: {SWEEP_AXES}.')
    values = np.asarray(sweep['values'], dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValueError('sweep.values must be a non-empty list.')
    if np.any(np.diff(values) <= 0):
        raise ValueError(
            f'sweep.values must be strictly increasing, got {list(values)}.')
    if sweep['axis'] == 'num_snapshots' and (
            np.any(values < 1) or np.any(values != np.round(values))):
        raise ValueError('Snapshot counts must be positive integers, '
                         f'got {list(values)}.')

    if not opt['methods']:
        raise ValueError('At least one method is required.')
    for tag, method in opt['methods'].items():
        if 'type' not in method:
            raise ValueError(f'Method {tag} has no type.')


def complete_opt(opt=None, root_path=None):
    """Fill defaults into a (possibly partial) option dict and validate it.

    Args:
        opt (dict | None): User options. Missing keys take the defaults of
            ``default_opt``.
        root_path (str | None): Root of the results folder. Default: the
            repository root.

    Returns:
        (dict): Options.
    """
    opt = opt or {}
    has_values = 'values' in (opt.get('sweep') or {})
    opt = _merge(default_opt(), opt)
    if not has_values:
        opt['sweep']['values'] = list(
            DEFAULT_SWEEP_VALUES.get(opt['sweep']['axis'], []))
    opt['trials'] = int(opt['trials'])
    opt['num_worker'] = int(opt['num_worker'])
    opt['manual_seed'] = int(opt['manual_seed'])
    _validate(opt)

    # paths
    if root_path is None:
        root_path = osp.abspath(osp.join(__file__, osp.pardir, osp.pardir,
                                         osp.pardir))
    opt['path']['root'] = root_path
    results_root = opt['path'].get('results_root')
    if results_root is None:
        results_root = osp.join(root_path, 'results', opt['name'])
    opt['path']['results_root'] = osp.expanduser(results_root)
    opt['path']['log'] = opt['path']['results_root']
    return opt


def load_yaml(opt_path):
    """Read an option file without filling defaults."""
    opt_path = osp.expanduser(opt_path)
    try:
        with open(opt_path, mode='r') as f:
            Loader, _ = ordered_yaml()
            opt = yaml.load(f, Loader=Loader)
    except OSError as err:
        raise OSError(f'Cannot read option file {opt_path}: {err}') from err
    if opt is None:
        opt = OrderedDict()
    if not isinstance(opt, dict):
        raise ValueError(f'Option file {opt_path} must hold a mapping.')
    return opt


def parse(opt_path, root_path=None):
    """Parse option file.

    Args:
        opt_path (str): Option file path.
        root_path (str | None): Root of the results folder.

    Returns:
        (dict): Options.
    """
    return complete_opt(load_yaml(opt_path), root_path=root_path)


def example_path(index):
    """Option file of one of the four bundled simulation examples."""
    if index not in (1, 2, 3, 4):
        raise ValueError(f'Example must be 1, 2, 3 or 4, got {index}.')
    root = osp.abspath(osp.join(__file__, osp.pardir, osp.pardir, osp.pardir))
    return osp.join(root, 'options', f'Example{index}',
                    f'example{index}_snr.yml')


def dict2str(opt, indent_level=1):
    """dict to string for printing options.

    Args:
        opt (dict): Option dict.
        indent_level (int): Indent level. Default: 1.

    Return:
        (str): Option string for printing.
    """
    msg = '\n'
    for k, v in opt.items():
        if isinstance(v, dict):
            msg += ' ' * (indent_level * 2) + k + ':['
            msg += dict2str(v, indent_level + 1)
            msg += ' ' * (indent_level * 2) + ']\n'
        else:
            msg += ' ' * (indent_level * 2) + k + ': ' + str(v) + '\n'
    return msg
