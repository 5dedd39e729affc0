import logging
import numpy as np
import os
import pytest
import yaml
from collections import OrderedDict

import pseur
from pseur.data import load_scenario, scenario_from_opt
from pseur.sweep import ExperimentPlan
from pseur.utils import (get_env_info, get_root_logger, make_exp_dirs,
                         mkdir_and_rename, scandir, trial_rng)
from pseur.utils.options import (complete_opt, default_opt, dict2str,
                                 example_path, load_yaml, ordered_yaml, parse)

MISMATCHES = {
    1: 'none',
    2: 'look_direction',
    3: 'gain_phase',
    4: 'coherent_scattering'
}


@pytest.mark.parametrize('index', [1, 2, 3, 4])
def test_bundled_examples(index):
    opt = parse(example_path(index))
    assert opt['name'] == f'Example{index}_snr'
    assert opt['scenario']['mismatch']['type'] == MISMATCHES[index]
    plan = ExperimentPlan.from_opt(opt)
    assert plan.trials == 100
    assert plan.values[0] == -20.0 and plan.values[-1] == 30.0
    assert list(plan.methods) == ['pseur', 'ipn-cc', 'ipn-meps', 'smi']
    assert plan.scenario.array.num_elements == 20


def test_drift_example():
    path = os.path.join(
        os.path.dirname(example_path(1)), 'example1_drift.yml')
    opt = parse(path)
    plan = ExperimentPlan.from_opt(opt)
    assert plan.axis == 'num_snapshots'
    assert plan.values == tuple(range(10, 101, 10))
    assert plan.scenario.drifts == (2.0, -2.0)
    assert plan.num_worker == 4
    assert plan.methods['smi']['loading'] == 10


def test_load_scenario():
    scenario = load_scenario(example_path(2))
    assert scenario.mismatch.type == 'look_direction'
    assert scenario.mismatch.bound == 5.0


def test_example_index():
    with pytest.raises(ValueError):
        example_path(5)


def test_defaults():
    opt = complete_opt()
    assert opt['trials'] == 100
    assert opt['scenario']['array']['num_elements'] == 20
    assert len(opt['sweep']['values']) == 11
    assert opt['path']['results_root'].endswith(
        os.path.join('results', 'Example1_snr'))
    assert opt['path']['log'] == opt['path']['results_root']


def test_partial_override_keeps_defaults():
    opt = complete_opt(
        OrderedDict(scenario=OrderedDict(soi=OrderedDict(snr_db=20.0))))
    assert opt['scenario']['soi']['snr_db'] == 20.0
    assert opt['scenario']['soi']['direction'] == 10.0
    assert len(opt['scenario']['interferers']) == 2


def test_methods_replaced_wholesale():
    opt = complete_opt(
        OrderedDict(methods=OrderedDict(
            smi=OrderedDict(type='SampleReconstructor'))))
    assert list(opt['methods']) == ['smi']


def test_snapshot_axis_defaults():
    opt = complete_opt(OrderedDict(sweep=OrderedDict(axis='num_snapshots')))
    assert opt['sweep']['values'] == list(range(10, 101, 10))


@pytest.mark.parametrize('override', [
    OrderedDict(trials=0),
    OrderedDict(num_worker=0),
    OrderedDict(scenario=OrderedDict(mismatch=OrderedDict(type='bogus'))),
    OrderedDict(sweep=OrderedDict(axis='inr_db')),
    OrderedDict(sweep=OrderedDict(values=[10, 0])),
    OrderedDict(sweep=OrderedDict(axis='num_snapshots', values=[10.5])),
    OrderedDict(methods=OrderedDict(pseur=OrderedDict(q_in=14))),
    OrderedDict(methods=OrderedDict()),
])
def test_invalid_options(override):
    with pytest.raises(ValueError):
        complete_opt(override)


def test_root_path(tmp_path):
    opt = complete_opt(root_path=str(tmp_path))
    assert opt['path']['results_root'] == str(
        tmp_path / 'results' / 'Example1_snr')


def test_load_yaml_errors(tmp_path):
    with pytest.raises(OSError, match='missing.yml'):
        load_yaml(str(tmp_path / 'missing.yml'))
    path = tmp_path / 'list.yml'
    path.write_text('- 1\n- 2\n')
    with pytest.raises(ValueError, match='mapping'):
        load_yaml(str(path))
    path = tmp_path / 'empty.yml'
    path.write_text('')
    assert load_yaml(str(path)) == OrderedDict()


def test_ordered_yaml_keeps_order():
    Loader, Dumper = ordered_yaml()
    opt = OrderedDict([('zeta', 1), ('alpha', 2), ('mid', 3)])
    text = yaml.dump(opt, Dumper=Dumper)
    assert list(yaml.load(text, Loader=Loader)) == ['zeta', 'alpha', 'mid']


def test_dict2str():
    text = dict2str(default_opt())
    assert 'name: Example1_snr' in text
    assert 'scenario:[' in text


def test_scenario_from_example_opt():
    scenario = scenario_from_opt(parse(example_path(4))['scenario'])
    assert scenario.mismatch.num_paths == 4
    assert scenario.mismatch.angular_spread == 2.0


def test_trial_rng():
    assert np.array_equal(
        trial_rng(3, 1).standard_normal(5),
        trial_rng(3, 1).standard_normal(5))
    assert not np.array_equal(
        trial_rng(3, 1).standard_normal(5),
        trial_rng(4, 1).standard_normal(5))
    with pytest.raises(ValueError):
        trial_rng(0, -1)


def test_mkdir_and_rename(tmp_path):
    path = str(tmp_path / 'results')
    mkdir_and_rename(path)
    open(os.path.join(path, 'old.csv'), 'w').close()
    mkdir_and_rename(path)
    assert os.listdir(path) == []
    archived = [p for p in os.listdir(tmp_path) if '_archived_' in p]
    assert len(archived) == 1


def test_make_exp_dirs(tmp_path):
    path = str(tmp_path / 'results')
    opt = dict(path=dict(results_root=path, log=path))
    make_exp_dirs(opt, archive=False)
    open(os.path.join(path, 'trial.csv'), 'w').close()
    make_exp_dirs(opt, archive=False)
    assert os.listdir(path) == ['trial.csv']
    make_exp_dirs(opt)
    assert os.listdir(path) == []
    archived = [p for p in os.listdir(tmp_path) if '_archived_' in p]
    assert len(archived) == 1


def test_scandir(tmp_path):
    for name in ('b_arch.py', 'a_arch.py', 'notes.txt'):
        (tmp_path / name).write_text('')
    assert list(scandir(str(tmp_path), suffix='_arch.py')) == [
        'a_arch.py', 'b_arch.py'
    ]
    with pytest.raises(TypeError):
        list(scandir(str(tmp_path), suffix=1))


def test_logger():
    logger = get_root_logger()
    assert logger.name == 'pseur'
    assert logger is logging.getLogger('pseur')
    assert 'pseur' in get_env_info()


def test_version_matches_release_file():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    with open(os.path.join(root, 'VERSION')) as f:
        release = f.read().strip()
    assert pseur.__version__ == release
    assert pseur.version_info == tuple(int(v) for v in release.split('.'))
