import numpy as np
from dataclasses import dataclass
from scipy.signal import find_peaks

from pseur.data.array_util import steering_vector
from pseur.ops import UnderResolvedError

SCAN_HALF_WIDTH = 3.0
SECTOR_STEP = 0.1
KEEP_RATIO = 0.5
DETECTION_RATIO = 10.0
NOISE_MODES = ('mean', 'paper-squared')


@dataclass(frozen=True, eq=False)
class SubspacePartition:
    """Signal / noise split of a covariance eigensystem.

    Attributes:
        signal_basis (ndarray): U_s, shape (M, K).
        noise_basis (ndarray): U_n, shape (M, M - K).
        signal_values (ndarray): lambda_1..lambda_K, descending.
        noise_values (ndarray): lambda_{K+1}..lambda_M, descending.
    """
    signal_basis: np.ndarray
    noise_basis: np.ndarray
    signal_values: np.ndarray
    noise_values: np.ndarray

    @property
    def num_sources(self):
        return self.signal_basis.shape[1]


@dataclass(frozen=True)
class AngularSector:
    """Closed angular interval [center - half_width, center + half_width]."""
    center: float
    half_width: float

    def __post_init__(self):
        if not self.half_width >= 0:
            raise ValueError(
                f'half_width must be >= 0, got {self.half_width}.')

    @property
    def lower(self):
        return self.center - self.half_width

    @property
    def upper(self):
        return self.center + self.half_width

    @property
    def width(self):
        return 2 * self.half_width

    def contains(self, theta, tol=1e-9):
        theta = np.asarray(theta)
        return (theta >= self.lower - tol) & (theta <= self.upper + tol)


def sample_covariance(data):
    """(1/N) sum_n x(t_n) x^H(t_n).

    Args:
        data (SnapshotBatch | ndarray): Batch, or snapshots as rows (N, M).

    Returns:
        ndarray: Hermitian PSD matrix (M, M).
    """
    data = np.asarray(getattr(data, 'data', data))
    if data.ndim != 2 or data.shape[0] == 0:
        raise ValueError(
            f'Need at least one snapshot of shape (N, M), got {data.shape}.')
    cov = data.T @ data.conj() / data.shape[0]
    return 0.5 * (cov + cov.conj().T)


def partition_subspaces(eig, num_sources):
    """Split an eigensystem into K signal and M - K noise eigenpairs."""
    num_elements = eig.vectors.shape[0]
    if not 1 <= num_sources < num_elements:
        raise ValueError(f'num_sources must lie in [1, {num_elements - 1}], '
                         f'got {num_sources}.')
    return SubspacePartition(
        signal_basis=eig.vectors[:, :num_sources],
        noise_basis=eig.vectors[:, num_sources:],
        signal_values=eig.values[:num_sources],
        noise_values=eig.values[num_sources:])


def estimate_noise_power(partition, mode='mean'):
    """Noise power from the noise-subspace eigenvalues.

    Args:
        partition (SubspacePartition): Signal / noise split.
        mode (str): 'mean' averages the eigenvalues. 'paper-squared'
            averages their squares, which only equals the noise power when
            it is 1. Default: 'mean'.

    Returns:
        float: Estimated sigma_n^2.
    """
    values = partition.noise_values
    if mode == 'mean':
        return float(np.mean(values))
    if mode == 'paper-squared':
        return float(np.mean(values**2))
    raise ValueError(f'Unknown noise mode {mode}; supported: {NOISE_MODES}.')


def detect_source_count(values, ratio=DETECTION_RATIO):
    """Number of eigenvalues above ``ratio`` times their median."""
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        raise ValueError('Need at least two eigenvalues.')
    count = int(np.sum(values > ratio * np.median(values)))
    return min(count, values.size - 1)


def music_spectrum(noise_basis, grid, spec):
    """Null spectrum ||a^H(theta) U_n||^2 over the grid."""
    steering = steering_vector(grid, spec)
    projection = noise_basis.conj().T @ steering
    return np.sum(np.abs(projection)**2, axis=0)


def music_doas(noise_basis, grid, num_sources, spec):
    """Directions of the K deepest local minima of the null spectrum.

    Args:
        noise_basis (ndarray): U_n, shape (M, M - K).
        grid (ndarray): Scan angles in degrees.
        num_sources (int): K.
        spec (ArraySpec): Array geometry.

    Returns:
        ndarray: K directions in degrees, ascending.
    """
    grid = np.unique(np.asarray(grid, dtype=np.float64))
    null = music_spectrum(noise_basis, grid, spec)
    # padded so that a minimum at either end of the grid counts
    minima, _ = find_peaks(np.concatenate(([-np.inf], -null, [-np.inf])))
    minima = minima - 1
    if minima.size < num_sources:
        raise UnderResolvedError(
            f'MUSIC found {minima.size} local minima, {num_sources} '
            'sources requested.')
    deepest = minima[np.argsort(null[minima], kind='stable')[:num_sources]]
    return np.sort(grid[deepest])


def _sector_grid(center, half_width, step):
    if half_width < 0 or not step > 0:
        raise ValueError(f'Invalid sector: half_width={half_width}, '
                         f'step={step}.')
    num_side = int(np.floor(half_width / step + 1e-9))
    offsets = step * np.arange(-num_side, num_side + 1)
    angles = center + offsets
    keep = np.abs(angles) <= 90.0
    if not np.any(keep):
        raise ValueError(f'Sector around {center} deg holds no grid point.')
    return angles[keep], offsets[keep]


def snapshot_doas(data, center, spec, half_width=SCAN_HALF_WIDTH,
                  step=SECTOR_STEP):
    """Per-snapshot correlation DoA inside [center - c, center + c].

    For every snapshot, the sector angle maximising |x^H(t_n) a(theta)|.
    Ties go to the angle nearest ``center``.

    Args:
        data (ndarray): Snapshots as rows (N, M), or a single snapshot (M, ).
        center (float): Sector center in degrees.
        spec (ArraySpec): Array geometry.
        half_width (float): Scan half-width c in degrees. Default: 3.
        step (float): Sector grid step in degrees. Default: 0.1.

    Returns:
        ndarray: DoAs in degrees, shape (N, ).
    """
    data = np.atleast_2d(np.asarray(data))
    angles, offsets = _sector_grid(center, half_width, step)
    # candidates in tie-break order: nearest the center first
    order = np.lexsort((offsets, np.abs(offsets)))
    angles = angles[order]
    corr = np.abs(data.conj() @ steering_vector(angles, spec))
    peak = corr.max(axis=1, keepdims=True)
    best = np.argmax(corr >= peak * (1 - 1e-12), axis=1)
    return angles[best]


def snapshot_doa(snapshot, center, spec, half_width=SCAN_HALF_WIDTH,
                 step=SECTOR_STEP):
    return float(snapshot_doas(snapshot, center, spec, half_width, step)[0])


def refine_direction(doas):
    """Median of the per-snapshot DoAs of one interferer.

    The per-snapshot search runs on the fine sector grid, so the median
    resolves a direction between two MUSIC grid points.
    """
    doas = np.asarray(doas, dtype=np.float64)
    if doas.size == 0:
        raise ValueError('Need at least one per-snapshot DoA.')
    return float(np.median(doas))


def per_snapshot_widths(doas, center, keep_ratio=KEEP_RATIO):
    """Invert the linear drift model snapshot by snapshot.

    Delta(t_n) = 2N / (2 t_n - N) * (theta(t_n) - center), t_n = 1..N,
    evaluated only where |2 t_n - N| >= keep_ratio * N.

    Returns:
        tuple[ndarray]: Retained snapshot indices t_n and their widths.
    """
    doas = np.asarray(doas, dtype=np.float64)
    num_snapshots = doas.size
    t = np.arange(1, num_snapshots + 1, dtype=np.float64)
    lever = 2 * t - num_snapshots
    keep = np.abs(lever) >= keep_ratio * num_snapshots
    widths = 2 * num_snapshots / lever[keep] * (doas[keep] - center)
    return t[keep], widths


def uncertainty_width(doas, center, scan_half_width=SCAN_HALF_WIDTH,
                      keep_ratio=KEEP_RATIO, grid_step=0.9):
    """Uncertainty sector of one interferer from its per-snapshot DoAs.

    The half-width is min(median |Delta(t_n)| / 2, c) over the retained
    snapshots; ``grid_step`` when none is retained.

    Args:
        doas (ndarray): Per-snapshot DoAs in degrees, shape (N, ), N >= 2.
        center (float): MUSIC direction of the interferer in degrees.
        scan_half_width (float): c in degrees. Default: 3.
        keep_ratio (float): Retain snapshots with |2 t_n - N| >= ratio * N.
            Default: 0.5.
        grid_step (float): Fallback half-width in degrees. Default: 0.9.

    Returns:
        AngularSector: Sector centred on ``center``.
    """
    doas = np.asarray(doas, dtype=np.float64)
    if doas.size < 2:
        raise ValueError(f'Need at least 2 snapshots, got {doas.size}.')
    _, widths = per_snapshot_widths(doas, center, keep_ratio)
    if widths.size == 0:
        return AngularSector(center, grid_step)
    half_width = min(float(np.median(np.abs(widths))) / 2, scan_half_width)
    return AngularSector(center, half_width)
