import numpy as np
from dataclasses import dataclass

GAIN_STD = 0.05
PHASE_STD = 0.025 * np.pi


@dataclass(frozen=True)
class ArraySpec:
    """Uniform linear array geometry and the angular search grid.

    Attributes:
        num_elements (int): Number of sensors M. Must be >= 2.
        spacing_wavelengths (float): Element spacing d/lambda. Default: 0.5.
        grid_step (float): Angular grid resolution in degrees. Default: 0.9.
    """
    num_elements: int
    spacing_wavelengths: float = 0.5
    grid_step: float = 0.9

    def __post_init__(self):
        if int(self.num_elements) != self.num_elements or \
                self.num_elements < 2:
            raise ValueError(
                f'num_elements must be an integer >= 2, '
                f'got {self.num_elements}.')
        if not self.spacing_wavelengths > 0:
            raise ValueError('spacing_wavelengths must be positive, '
                             f'got {self.spacing_wavelengths}.')
        if not self.grid_step > 0:
            raise ValueError(
                f'grid_step must be positive, got {self.grid_step}.')

    @property
    def grid(self):
        """Scan grid covering [-90, 90] degrees at ``grid_step``."""
        num_points = int(np.floor(180.0 / self.grid_step + 1e-9)) + 1
        return -90.0 + self.grid_step * np.arange(num_points)


def _check_directions(theta):
    theta = np.asarray(theta, dtype=np.float64)
    if np.any(np.abs(theta) > 90.0) or not np.all(np.isfinite(theta)):
        raise ValueError(
            f'Directions must lie in [-90, 90] degrees, got {theta}.')
    return theta


def steering_vector(theta, spec):
    """ULA steering vector(s).

    Element m (zero based) is exp(-j m 2pi (d/lambda) sin(theta)).

    Args:
        theta (float | ndarray): Direction(s) in degrees.
        spec (ArraySpec): Array geometry.

    Returns:
        ndarray: Shape (M, ) for a scalar direction, (M, len(theta))
            otherwise.
    """
    theta = _check_directions(theta)
    phase = 2 * np.pi * spec.spacing_wavelengths * np.sin(np.deg2rad(theta))
    index = np.arange(spec.num_elements)
    return np.exp(-1j * np.multiply.outer(index, phase))


def draw_gain_phase(rng, num_elements, gain_std=GAIN_STD,
                    phase_std=PHASE_STD):
    """Draw per-sensor amplitude and phase errors.

    Returns:
        tuple[ndarray]: gains alpha ~ N(0, gain_std^2) and
            phases beta ~ N(0, phase_std^2), each of shape (M, ).
    """
    gains = rng.normal(0.0, gain_std, num_elements)
    phases = rng.normal(0.0, phase_std, num_elements)
    return gains, phases


def perturbed_signature(theta, gains, phases, spec):
    """Steering vector distorted by sensor gain and phase errors.

    The error model is written as (1 + alpha_m) exp(j(pi sin(theta)(m-1) +
    beta_m)); it is conjugated here so that it shares the sign convention of
    ``steering_vector``.

    Args:
        theta (float): Direction in degrees.
        gains (ndarray): Amplitude errors alpha, shape (M, ).
        phases (ndarray): Phase errors beta in radians, shape (M, ).
        spec (ArraySpec): Array geometry.

    Returns:
        ndarray: Perturbed signature (M, ).
    """
    gains = np.asarray(gains, dtype=np.float64)
    phases = np.asarray(phases, dtype=np.float64)
    if gains.shape != (spec.num_elements, ) or phases.shape != gains.shape:
        raise ValueError('gains and phases must have shape '
                         f'({spec.num_elements}, ).')
    nominal = steering_vector(theta, spec)
    return (1.0 + gains) * nominal * np.exp(-1j * phases)


def coherent_sum(theta, spec, directions, phases):
    """Direct path plus coherently scattered paths.

    Returns a(theta) + sum_i exp(j phi_i) a(theta_i).
    """
    directions = np.atleast_1d(np.asarray(directions, dtype=np.float64))
    phases = np.atleast_1d(np.asarray(phases, dtype=np.float64))
    if directions.shape != phases.shape:
        raise ValueError('directions and phases must have the same length.')
    signature = steering_vector(theta, spec).copy()
    if directions.size:
        paths = steering_vector(np.clip(directions, -90.0, 90.0), spec)
        signature += paths @ np.exp(1j * phases)
    return signature


def scattered_signature(theta, spec, rng, num_paths=4, angular_spread=2.0):
    """Signature formed by a direct path and ``num_paths`` local scatterers.

    Scatter directions are drawn from N(theta, angular_spread^2) degrees and
    path phases from U[0, 2pi). Draw once per run; the signature then stays
    fixed for every snapshot.
    """
    directions = rng.normal(theta, angular_spread, num_paths)
    phases = rng.uniform(0.0, 2 * np.pi, num_paths)
    return coherent_sum(theta, spec, directions, phases)


def drift_directions(center, total_drift, num_snapshots):
    """Linear drift of a source over the observation interval.

    theta(t_n) = center + (total_drift / N) (t_n - N / 2), t_n = n = 1..N.

    Args:
        center (float): Direction at mid-interval in degrees.
        total_drift (float): Total sweep over the interval in degrees.
        num_snapshots (int): N.

    Returns:
        ndarray: Directions in degrees, shape (N, ).
    """
    if num_snapshots < 1:
        raise ValueError(
            f'num_snapshots must be >= 1, got {num_snapshots}.')
    t = np.arange(1, num_snapshots + 1, dtype=np.float64)
    if total_drift == 0:
        return np.full(num_snapshots, float(center))
    return center + total_drift / num_snapshots * (t - num_snapshots / 2)


def db2pow(value_db):
    return 10.0**(np.asarray(value_db, dtype=np.float64) / 10.0)


def pow2db(value):
    return 10.0 * np.log10(value)
