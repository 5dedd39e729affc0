import logging
import numpy as np
from dataclasses import dataclass
from scipy import linalg

from pseur.data.array_util import steering_vector
from pseur.ops import (EigenSystem, NoInterferenceError, NumericalError,
                       bessel_matrix, ipn_matrix, woodbury_inverse)
from .doa_util import AngularSector
from .weight_util import mvdr_weights

logger = logging.getLogger('pseur')

Q_IN = 14
MIN_SECTOR_SAMPLES = 3
DENSE_CHECK_SIZE = 64
DENSE_CHECK_TOL = 1e-8


def merge_sectors(sectors, levels=None):
    """Union of possibly overlapping sectors as disjoint sectors.

    Args:
        sectors (Sequence[AngularSector]): Input sectors.
        levels (Sequence[float] | None): Per-sector power. Merged sectors keep
            the largest level.

    Returns:
        tuple: (merged sectors sorted by lower edge, merged levels).
    """
    if levels is None:
        levels = [0.0] * len(sectors)
    if len(levels) != len(sectors):
        raise ValueError('levels needs one entry per sector.')
    items = sorted(zip(sectors, levels), key=lambda x: x[0].lower)
    merged = []
    for sector, level in items:
        if merged and sector.lower <= merged[-1][1]:
            lower, upper, top = merged[-1]
            merged[-1] = (lower, max(upper, sector.upper), max(top, level))
        else:
            merged.append((sector.lower, sector.upper, level))
    out_sectors = tuple(
        AngularSector(0.5 * (lo + hi), 0.5 * (hi - lo))
        for lo, hi, _ in merged)
    return out_sectors, tuple(float(top) for _, _, top in merged)


@dataclass(frozen=True)
class TwoLevelSpectrum:
    """Piecewise-constant angular power density.

    gamma_high inside the union of ``sectors``, gamma_low elsewhere.

    Attributes:
        gamma_low (float): Noise floor level gamma_L.
        gamma_high (float): Interference level gamma_H.
        sectors (tuple[AngularSector]): Disjoint interference sectors.
        levels (tuple[float]): Interference power of each sector, used only
            by per-sector weighting.
    """
    gamma_low: float
    gamma_high: float
    sectors: tuple = ()
    levels: tuple = None

    def __post_init__(self):
        if not self.gamma_low > 0:
            raise ValueError(
                f'gamma_low must be positive, got {self.gamma_low}.')
        if not self.gamma_high > self.gamma_low:
            raise ValueError(f'gamma_high ({self.gamma_high}) must exceed '
                             f'gamma_low ({self.gamma_low}).')
        sectors, levels = merge_sectors(tuple(self.sectors), self.levels)
        object.__setattr__(self, 'sectors', sectors)
        object.__setattr__(self, 'levels', levels)


@dataclass(frozen=True, eq=False)
class ReconstructionProduct:
    """Reconstructed IPN covariance with everything it was built from."""
    spectrum: TwoLevelSpectrum
    partial_cov: np.ndarray
    partial_eig: EigenSystem
    covariance: np.ndarray
    inverse: np.ndarray
    angles: np.ndarray
    q_in: int
    delta: float


def interference_power(data, steering, noise_power):
    """Interference power from the beam output of its steering vector.

    z(t_n) = a^H x(t_n), r = mean |z|^2 and
    sigma_k^2 = max(0, (r - sigma_n^2 M) / M^2).

    Args:
        data (SnapshotBatch | ndarray): Snapshots as rows (N, M).
        steering (ndarray): a_k with ||a_k||^2 = M.
        noise_power (float): Estimated sigma_n^2.

    Returns:
        float: Estimated sigma_k^2, never negative.
    """
    data = np.asarray(getattr(data, 'data', data))
    steering = np.asarray(steering)
    num_elements = steering.shape[0]
    beam = data @ steering.conj()
    power = np.mean(np.abs(beam)**2)
    estimate = (power - noise_power * num_elements) / num_elements**2
    if estimate < 0:
        logger.warning(f'Negative interference power estimate {estimate:.4e} '
                       'clamped to 0.')
        return 0.0
    return float(estimate)


def gamma_levels(noise_power, powers):
    """Two spectrum levels from the noise and interference estimates.

    gamma_L = sigma_n^2 / 2pi and gamma_H = max_k sigma_k^2 + gamma_L.

    Returns:
        tuple[float]: (gamma_L, gamma_H).
    """
    if not noise_power > 0:
        raise ValueError(f'noise_power must be positive, got {noise_power}.')
    powers = np.asarray(powers, dtype=np.float64)
    if powers.size == 0:
        raise NoInterferenceError('No interferer to reconstruct.')
    if np.any(powers < 0):
        raise ValueError(f'Interference powers must be >= 0, got {powers}.')
    if not np.any(powers > 0):
        raise NoInterferenceError(
            'No interference detected: all power estimates are zero.')
    gamma_low = noise_power / (2 * np.pi)
    return gamma_low, float(np.max(powers)) + gamma_low


def allocate_samples(widths, q_in):
    """Split ``q_in`` samples over sectors in proportion to their widths.

    Every sector gets at least 3 samples; rounding is settled by the largest
    remainders.
    """
    widths = np.asarray(widths, dtype=np.float64)
    exact = q_in * widths / widths.sum()
    counts = np.maximum(np.floor(exact).astype(int), MIN_SECTOR_SAMPLES)
    remainder = exact - np.floor(exact)
    by_remainder = np.argsort(-remainder, kind='stable')
    i = 0
    while counts.sum() < q_in:
        counts[by_remainder[i % counts.size]] += 1
        i += 1
    i = counts.size - 1
    while counts.sum() > q_in:
        idx = by_remainder[i % counts.size]
        if counts[idx] > MIN_SECTOR_SAMPLES:
            counts[idx] -= 1
        i -= 1
    return counts


def sector_sampling(sectors, q_in=Q_IN, grid_step=0.9, levels=None):
    """Uniform samples of the interference region.

    Args:
        sectors (Sequence[AngularSector]): Disjoint sectors.
        q_in (int): Total sample count Q_in. Default: 14.
        grid_step (float): Sample spacing in degrees used when the union has
            zero width. Default: 0.9.
        levels (Sequence[float] | None): Per-sector level, repeated for every
            sample of the sector.

    Returns:
        tuple: (angles in degrees, delta in radians, per-sample levels or
            None).
    """
    sectors = tuple(sectors)
    if not sectors:
        return np.zeros(0), 0.0, None
    if q_in < MIN_SECTOR_SAMPLES * len(sectors):
        raise ValueError(f'q_in must be >= {MIN_SECTOR_SAMPLES} per sector, '
                         f'got {q_in} for {len(sectors)} sectors.')
    widths = np.array([s.width for s in sectors])
    total = widths.sum()
    if total <= 0:
        angles = np.array([s.center for s in sectors])
        counts = np.ones(len(sectors), dtype=int)
        delta = np.deg2rad(grid_step)
    else:
        counts = allocate_samples(widths, q_in)
        angles = np.concatenate([
            s.lower + (np.arange(n) + 0.5) * s.width / n
            for s, n in zip(sectors, counts)
        ])
        delta = np.deg2rad(total) / q_in
    sample_levels = None
    if levels is not None:
        sample_levels = np.repeat(np.asarray(levels, dtype=np.float64),
                                  counts)
    return angles, float(delta), sample_levels


def partial_covariance(angles, delta, spec, weights=None):
    """sum_i w_i a(theta_i) a^H(theta_i) delta over the sector samples."""
    angles = np.atleast_1d(np.asarray(angles, dtype=np.float64))
    if angles.size == 0:
        raise ValueError('partial_covariance needs at least one sample.')
    steering = steering_vector(angles, spec)
    if weights is None:
        weights = np.ones(angles.size)
    cov = (steering * (np.asarray(weights) * delta)) @ steering.conj().T
    return 0.5 * (cov + cov.conj().T)


def reconstruct(spectrum, partial_eig, num_elements, spec=None,
                keep_bessel_term=False, partial_cov=None, angles=None,
                q_in=Q_IN, delta=0.0):
    """Reconstructed IPN covariance and its inverse.

    R = 2pi gamma_L I + (gamma_H - gamma_L) R_r with R_r reassembled from the
    retained eigenpairs, inverted by the Woodbury identity. With
    ``keep_bessel_term`` the floor term is 2pi gamma_L B (B the Bessel
    matrix) and the inverse is dense.

    Args:
        spectrum (TwoLevelSpectrum): Levels and sectors.
        partial_eig (EigenSystem): Truncated eigensystem of R_r. May have
            rank 0.
        num_elements (int): M.
        spec (ArraySpec | None): Needed only for ``keep_bessel_term``.
        keep_bessel_term (bool): Keep the exact floor term. Default: False.

    Returns:
        ReconstructionProduct: The product.
    """
    gamma_low, gamma_high = spectrum.gamma_low, spectrum.gamma_high
    if partial_eig.vectors.shape[0] != num_elements:
        raise ValueError(f'Eigenvectors have {partial_eig.vectors.shape[0]} '
                         f'rows, expected {num_elements}.')
    if keep_bessel_term:
        if spec is None:
            raise ValueError('keep_bessel_term requires the array spec.')
        covariance = (2 * np.pi * gamma_low *
                      bessel_matrix(num_elements, spec.spacing_wavelengths) +
                      (gamma_high - gamma_low) * partial_eig.reassemble())
        try:
            inverse = linalg.inv(covariance)
        except linalg.LinAlgError as err:
            raise NumericalError(
                f'Reconstructed covariance is singular: {err}')
    else:
        covariance = ipn_matrix(gamma_low, gamma_high, partial_eig)
        inverse = woodbury_inverse(gamma_low, gamma_high, partial_eig)
        if num_elements <= DENSE_CHECK_SIZE:
            dense = linalg.inv(covariance)
            error = linalg.norm(inverse - dense) / linalg.norm(dense)
            if error > DENSE_CHECK_TOL:
                raise NumericalError(
                    f'Woodbury and dense inverses disagree: relative error '
                    f'{error:.3e}.')

    if partial_cov is None:
        partial_cov = partial_eig.reassemble()
    return ReconstructionProduct(
        spectrum=spectrum,
        partial_cov=partial_cov,
        partial_eig=partial_eig,
        covariance=covariance,
        inverse=0.5 * (inverse + inverse.conj().T),
        angles=np.zeros(0) if angles is None else np.asarray(angles),
        q_in=int(q_in),
        delta=float(delta))


class BaseReconstructor():
    """Base class of the IPN covariance estimators.

    Subclasses implement ``inverse``; ``weights`` then forms the MVDR
    beamformer from it.
    """
    method = 'base'

    def steering(self, batch):
        """Presumed SOI signature of a batch."""
        return steering_vector(batch.look_direction, batch.spec)

    def inverse(self, batch, look_steering):
        raise NotImplementedError

    def weights(self, batch):
        look_steering = self.steering(batch)
        return mvdr_weights(
            self.inverse(batch, look_steering), look_steering, self.method)

    def __repr__(self):
        return f'{self.__class__.__name__}()'
