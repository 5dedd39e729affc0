import importlib
import logging
import numpy as np
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from tqdm import tqdm

from pseur.data import Scenario, create_dataset, scenario_from_opt
from pseur.metrics import calculate_optimal_sinr
from pseur.models import create_model

logger = logging.getLogger('pseur')
metric_module = importlib.import_module('pseur.metrics')

METHOD_PRESETS = OrderedDict([
    ('pseur', OrderedDict(type='PseurReconstructor')),
    ('ipn-cc', OrderedDict(type='CaponReconstructor')),
    ('ipn-meps', OrderedDict(type='MepsReconstructor')),
    ('smi', OrderedDict(type='SampleReconstructor')),
    ('optimal', OrderedDict(type='OracleReconstructor')),
])
DEFAULT_METHODS = ('pseur', 'ipn-cc', 'ipn-meps', 'smi')
SWEEP_METRICS = OrderedDict([
    ('sinr', OrderedDict(type='calculate_sinr')),
    ('deviation', OrderedDict(type='calculate_deviation')),
])


def select_methods(tags):
    """Reconstructor options of the named method presets."""
    unknown = [tag for tag in tags if tag not in METHOD_PRESETS]
    if unknown:
        raise ValueError(f'Unknown methods {unknown}; supported: '
                         f'{list(METHOD_PRESETS)}.')
    return OrderedDict((tag, METHOD_PRESETS[tag].copy()) for tag in tags)


def check_metrics(metrics):
    """Validate a ``metrics`` option block.

    The sweep tables need ``sinr`` and ``deviation``; further metrics are
    computed and logged by the ``trial`` command.
    """
    missing = [name for name in SWEEP_METRICS if name not in metrics]
    if missing:
        raise ValueError(f'metrics must define {missing}.')
    for name, opt in metrics.items():
        metric_type = opt.get('type') if isinstance(opt, dict) else None
        if not callable(getattr(metric_module, str(metric_type), None)):
            raise ValueError(
                f'Metric {name} has unknown type {metric_type}.')


@dataclass(frozen=True)
class ExperimentPlan:
    """A Monte-Carlo sweep.

    Attributes:
        scenario (Scenario): Scenario template.
        axis (str): 'snr_db' or 'num_snapshots'.
        values (tuple): Strictly increasing sweep values.
        trials (int): Trials per sweep point.
        methods (OrderedDict): Method tag -> reconstructor options.
        base_seed (int): Seed of the per-trial streams.
        num_snapshots (int): N of an SNR sweep. Default: 30.
        snr_db (float): SNR of a snapshot sweep. Default: 10.
        num_worker (int): Worker processes. Default: 1.
        metrics (OrderedDict): Metric name -> options with a ``type``.
    """
    scenario: Scenario
    axis: str
    values: tuple
    trials: int = 100
    methods: OrderedDict = field(
        default_factory=lambda: select_methods(DEFAULT_METHODS))
    base_seed: int = 0
    num_snapshots: int = 30
    snr_db: float = 10.0
    num_worker: int = 1
    metrics: OrderedDict = field(
        default_factory=lambda: OrderedDict(
            (k, OrderedDict(v)) for k, v in SWEEP_METRICS.items()))

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(self.values))
        if self.axis not in ('snr_db', 'num_snapshots'):
            raise ValueError(f'Unknown sweep axis {self.axis}.')
        if self.trials < 1:
            raise ValueError(f'trials must be >= 1, got {self.trials}.')
        if not self.values:
            raise ValueError('A sweep needs at least one value.')
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f'Sweep values must be strictly increasing, '
                             f'got {self.values}.')
        if not self.methods:
            raise ValueError('A sweep needs at least one method.')
        if self.num_worker < 1:
            raise ValueError(
                f'num_worker must be >= 1, got {self.num_worker}.')
        check_metrics(self.metrics)

    @classmethod
    def from_opt(cls, opt):
        sweep = opt['sweep']
        values = tuple(
            int(v) if sweep['axis'] == 'num_snapshots' else float(v)
            for v in sweep['values'])
        return cls(
            scenario=scenario_from_opt(opt['scenario'],
                                       seed=opt['manual_seed']),
            axis=sweep['axis'],
            values=values,
            trials=int(opt['trials']),
            methods=OrderedDict(
                (tag, OrderedDict(m)) for tag, m in opt['methods'].items()),
            base_seed=int(opt['manual_seed']),
            num_snapshots=int(sweep.get('num_snapshots', 30)),
            snr_db=float(sweep.get('snr_db', 10.0)),
            num_worker=int(opt.get('num_worker', 1)),
            metrics=OrderedDict(
                (name, OrderedDict(m))
                for name, m in opt.get('metrics', SWEEP_METRICS).items()))

    def point(self, value):
        """(scenario, num_snapshots) at one sweep value."""
        if self.axis == 'snr_db':
            return self.scenario.with_snr(value), self.num_snapshots
        return self.scenario.with_snr(self.snr_db), int(value)

    def dataset(self, value):
        """SnapshotDataset holding the trials of one sweep value."""
        scenario, num_snapshots = self.point(value)
        return create_dataset(
            OrderedDict(
                name=f'{self.axis} {value:g}',
                type='SnapshotDataset',
                scenario=scenario,
                num_snapshots=num_snapshots,
                trials=self.trials,
                manual_seed=self.base_seed))


@dataclass(frozen=True)
class ResultRow:
    """Aggregate of one method at one sweep value.

    Means and the standard deviation are taken over the successful trials;
    ``trials`` counts every trial, ``failures`` the failed ones.
    """
    sweep_value: float
    method: str
    mean_sinr_db: float
    std_db: float
    mean_dev_db: float
    trials: int
    failures: int


def build_models(methods, metrics=SWEEP_METRICS):
    return OrderedDict((tag,
                        create_model(
                            OrderedDict(
                                name=tag,
                                model_type='MVDRBeamformer',
                                reconstructor=reconstructor,
                                metrics=metrics)))
                       for tag, reconstructor in methods.items())


def run_trial(dataset, trial_index, methods, metrics=SWEEP_METRICS):
    """Score every method on one trial of a dataset.

    Returns:
        tuple: (optimal SINR in dB, OrderedDict tag -> metric dict or None
            for a failed trial).
    """
    batch = dataset[trial_index]
    results = OrderedDict()
    for tag, model in build_models(methods, metrics).items():
        results[tag] = model.evaluate(batch)
    return calculate_optimal_sinr(batch), results


def _run_trial(task):
    return run_trial(*task)


def _aggregate(value, tag, outcomes):
    sinr = np.array([o[tag]['sinr'] for o in outcomes if o[tag] is not None])
    dev = np.array(
        [o[tag]['deviation'] for o in outcomes if o[tag] is not None])
    failures = len(outcomes) - sinr.size
    if failures:
        logger.warning(f'{tag} at {value:g}: {failures} of {len(outcomes)} '
                       'trials failed.')
    if sinr.size == 0:
        return ResultRow(value, tag, np.nan, np.nan, np.nan, len(outcomes),
                         failures)
    return ResultRow(value, tag, float(np.mean(sinr)), float(np.std(sinr)),
                     float(np.mean(dev)), len(outcomes), failures)


def run_sweep(plan, msg_logger=None, use_pbar=False):
    """Monte-Carlo sweep of every method over the plan's axis.

    Trial ``i`` draws from the same stream at every sweep value and for
    every method. Results are merged in trial order, so the rows do not
    depend on ``num_worker``.

    Args:
        plan (ExperimentPlan): The sweep.
        msg_logger (MessageLogger | None): Logs one line per sweep point.
        use_pbar (bool): Show a progress bar. Default: False.

    Returns:
        list[ResultRow]: Rows sorted by (sweep value, method).
    """
    rows = []
    executor = None
    if plan.num_worker > 1:
        executor = ProcessPoolExecutor(max_workers=plan.num_worker)
    if use_pbar:
        pbar = tqdm(total=len(plan.values) * plan.trials, unit='trial')
    try:
        for point, value in enumerate(plan.values):
            dataset = plan.dataset(value)
            tasks = [(dataset, idx, plan.methods, plan.metrics)
                     for idx in range(len(dataset))]
            if executor is None:
                outcomes = map(_run_trial, tasks)
            else:
                chunksize = max(1, plan.trials // (4 * plan.num_worker))
                outcomes = executor.map(
                    _run_trial, tasks, chunksize=chunksize)
            merged = []
            for _, results in outcomes:
                merged.append(results)
                if use_pbar:
                    pbar.update(1)
                    pbar.set_description(f'{plan.axis} {value:g}')
            point_rows = sorted(
                (_aggregate(value, tag, merged) for tag in plan.methods),
                key=lambda row: row.method)
            rows.extend(point_rows)
            if msg_logger is not None:
                msg_logger(dict(point=point, value=value, rows=point_rows))
    finally:
        if executor is not None:
            executor.shutdown()
        if use_pbar:
            pbar.close()
    return sorted(rows, key=lambda row: (row.sweep_value, row.method))


def with_methods(plan, tags):
    """Copy of a plan restricted to the named method presets."""
    return replace(plan, methods=select_methods(tags))
