import numpy as np
from dataclasses import dataclass

from pseur.utils import trial_rng
from .array_util import (ArraySpec, draw_gain_phase, drift_directions,
                         perturbed_signature, scattered_signature,
                         steering_vector)
from .scenario import Scenario, scenario_from_opt


@dataclass(frozen=True, eq=False)
class SnapshotBatch:
    """Received data of one observation interval with its ground truth.

    Attributes:
        data (ndarray): Snapshots x(t_n) as rows, shape (N, M).
        directions (ndarray): Actual direction of every source at every
            snapshot in degrees, shape (N, K). Column 0 is the SOI.
        soi_signature (ndarray): True (possibly mismatched) SOI signature
            (M, ).
        soi_power (float): True SOI power sigma_1^2.
        ipn_covariance (ndarray): True interference-plus-noise covariance
            (M, M).
        noise_power (float): True noise power sigma_n^2.
        look_direction (float): Presumed SOI direction in degrees.
        spec (ArraySpec): Array geometry.
        interferer_steering (ndarray): Steering vectors of the interferers at
            their mid-interval directions, shape (M, K - 1).
        interferer_powers (ndarray): True interferer powers (K - 1, ).
        drifting (bool): Whether any interferer moves during the interval.
    """
    data: np.ndarray
    directions: np.ndarray
    soi_signature: np.ndarray
    soi_power: float
    ipn_covariance: np.ndarray
    noise_power: float
    look_direction: float
    spec: ArraySpec
    interferer_steering: np.ndarray
    interferer_powers: np.ndarray
    drifting: bool = False

    @property
    def num_snapshots(self):
        return self.data.shape[0]

    @property
    def num_sources(self):
        return self.directions.shape[1]


def _complex_gaussian(rng, shape, power):
    """Circular complex Gaussian samples with E|s|^2 = power."""
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return np.sqrt(power / 2.0) * (real + 1j * imag)


def synthesize(scenario, num_snapshots, rng=None):
    """Generate N snapshots of a scenario.

    Random draws happen in a fixed order: mismatch first, then the source
    waveforms, then the sensor noise. The same generator state therefore
    yields bit-identical batches.

    Args:
        scenario (Scenario): Source and array description.
        num_snapshots (int): N >= 1.
        rng (numpy.random.Generator | None): Random stream. Default: a fresh
            generator seeded with ``scenario.seed``.

    Returns:
        SnapshotBatch: Data and truth.
    """
    if not isinstance(scenario, Scenario):
        raise TypeError(f'Expected a Scenario, got {type(scenario)}.')
    if int(num_snapshots) != num_snapshots or num_snapshots < 1:
        raise ValueError(
            f'num_snapshots must be an integer >= 1, got {num_snapshots}.')
    num_snapshots = int(num_snapshots)
    if rng is None:
        rng = np.random.default_rng(scenario.seed)

    spec = scenario.array
    num_elements = spec.num_elements
    mismatch = scenario.mismatch
    centers = np.array([s.direction for s in scenario.sources])

    # mismatch, fixed over the interval
    if mismatch.type == 'look_direction':
        offsets = rng.uniform(-mismatch.bound, mismatch.bound, centers.size)
        centers = np.clip(centers + offsets, -90.0, 90.0)
        soi_signature = steering_vector(centers[0], spec)
    elif mismatch.type == 'gain_phase':
        gains, phases = draw_gain_phase(rng, num_elements, mismatch.gain_std,
                                        mismatch.phase_std)
        soi_signature = perturbed_signature(centers[0], gains, phases, spec)
    elif mismatch.type == 'coherent_scattering':
        soi_signature = scattered_signature(centers[0], spec, rng,
                                            mismatch.num_paths,
                                            mismatch.angular_spread)
    else:
        soi_signature = steering_vector(centers[0], spec)

    powers = np.array([s.power for s in scenario.sources])
    signals = _complex_gaussian(rng, (num_snapshots, powers.size), powers)
    noise = _complex_gaussian(rng, (num_snapshots, num_elements),
                              scenario.noise_power)

    directions = np.empty((num_snapshots, centers.size))
    directions[:, 0] = centers[0]
    data = signals[:, :1] * soi_signature[None, :]
    ipn = scenario.noise_power * np.eye(num_elements, dtype=np.complex128)
    drifts = scenario.interferer_drifts()
    for k, drift in enumerate(drifts, start=1):
        trajectory = np.clip(
            drift_directions(centers[k], drift, num_snapshots), -90.0, 90.0)
        directions[:, k] = trajectory
        if drift == 0:
            steering = steering_vector(centers[k], spec)
            data = data + signals[:, k:k + 1] * steering[None, :]
            ipn += powers[k] * np.outer(steering, steering.conj())
        else:
            # (M, N) steering of the moving source
            steering = steering_vector(trajectory, spec)
            data = data + signals[:, k:k + 1] * steering.T
            ipn += powers[k] / num_snapshots * (steering @ steering.conj().T)
    data = data + noise

    if centers.size > 1:
        interferer_steering = steering_vector(centers[1:], spec)
    else:
        interferer_steering = np.zeros((num_elements, 0), dtype=np.complex128)

    return SnapshotBatch(
        data=data,
        directions=directions,
        soi_signature=soi_signature,
        soi_power=float(powers[0]),
        ipn_covariance=ipn,
        noise_power=float(scenario.noise_power),
        look_direction=float(scenario.presumed_direction),
        spec=spec,
        interferer_steering=interferer_steering,
        interferer_powers=powers[1:].copy(),
        drifting=any(d != 0 for d in drifts))


class SnapshotDataset():
    """Indexable collection of Monte-Carlo trials of one scenario.

    Item ``i`` synthesizes trial ``i`` from the counter-derived stream of
    (manual_seed, i). The same stream is reused at every sweep point and by
    every method, so methods are compared on paired data.

    Args:
        opt (dict): Config for the dataset. It contains the following keys:
            name (str): Dataset name.
            scenario (dict | Scenario): Scenario block or object.
            num_snapshots (int): Snapshots per trial.
            trials (int): Number of trials.
            manual_seed (int): Base seed.
            snr_db (float, optional): Overrides the SOI power.
    """

    def __init__(self, opt):
        super(SnapshotDataset, self).__init__()
        self.opt = opt
        self.base_seed = int(opt.get('manual_seed', 0))
        scenario = opt['scenario']
        if not isinstance(scenario, Scenario):
            scenario = scenario_from_opt(scenario, seed=self.base_seed)
        if opt.get('snr_db') is not None:
            scenario = scenario.with_snr(opt['snr_db'])
        self.scenario = scenario
        self.num_snapshots = int(opt['num_snapshots'])
        self.num_trials = int(opt['trials'])
        if self.num_trials < 1:
            raise ValueError(f'trials must be >= 1, got {self.num_trials}.')

    def __getitem__(self, index):
        if not 0 <= index < self.num_trials:
            raise IndexError(
                f'Trial {index} out of range [0, {self.num_trials}).')
        rng = trial_rng(self.base_seed, index)
        return synthesize(self.scenario, self.num_snapshots, rng)

    def __len__(self):
        return self.num_trials
