import logging
import numpy as np
from dataclasses import dataclass, fields

from pseur.data.array_util import steering_vector
from pseur.ops import RANK_TOL, NoInterferenceError, hermitian_eig
from .arch_util import (Q_IN, BaseReconstructor, TwoLevelSpectrum,
                        gamma_levels, interference_power, partial_covariance,
                        reconstruct, sector_sampling)
from .doa_util import (KEEP_RATIO, SCAN_HALF_WIDTH, SECTOR_STEP,
                       AngularSector, detect_source_count,
                       estimate_noise_power, music_doas, partition_subspaces,
                       refine_direction, sample_covariance, snapshot_doas,
                       uncertainty_width)
from .weight_util import mvdr_weights, white_noise_weights

logger = logging.getLogger('pseur')

NOISE_FLOOR_RATIO = 1e-5


@dataclass(frozen=True)
class PipelineConfig:
    """Tuning of the reconstruction pipeline.

    Attributes:
        scan_half_width (float): Per-snapshot DoA search half-width c in
            degrees. Default: 3.
        q_in (int): Samples of the interference region. Default: 14.
        noise_mode (str): 'mean' or 'paper-squared'. Default: 'mean'.
        num_sources (int | str | None): Source count K. None takes it from
            the data, 'auto' detects it from the eigenvalues.
        sector_step (float): Grid step of the per-snapshot search in degrees.
            Default: 0.1.
        keep_ratio (float): Snapshots with |2 t_n - N| >= ratio * N enter the
            width estimate. Default: 0.5.
        rank_tol (float): Relative eigenvalue threshold of the partial
            covariance. Default: 1e-8.
        desired_half_width (float): A MUSIC direction within this many degrees
            of the look direction is taken as the SOI. Default: 6.
        per_sector_levels (bool): Weight each sector by its own power
            instead of one global gamma_H. Default: False.
        keep_bessel_term (bool): Keep the exact Bessel floor term.
            Default: False.
    """
    scan_half_width: float = SCAN_HALF_WIDTH
    q_in: int = Q_IN
    noise_mode: str = 'mean'
    num_sources: object = None
    sector_step: float = SECTOR_STEP
    keep_ratio: float = KEEP_RATIO
    rank_tol: float = RANK_TOL
    desired_half_width: float = 6.0
    per_sector_levels: bool = False
    keep_bessel_term: bool = False

    @classmethod
    def from_opt(cls, opt):
        names = {f.name for f in fields(cls)}
        unknown = set(opt) - names
        if unknown:
            raise ValueError(f'Unknown pipeline options: {sorted(unknown)}.')
        return cls(**opt)


@dataclass(frozen=True, eq=False)
class PipelineState:
    """Intermediate estimates of one pipeline run."""
    noise_power: float
    soi_direction: float
    interferer_directions: np.ndarray
    interferer_powers: np.ndarray
    sectors: tuple
    product: object


def _source_count(values, config, batch):
    if config.num_sources is None:
        return batch.num_sources
    if config.num_sources == 'auto':
        return detect_source_count(values)
    return int(config.num_sources)


def split_directions(directions, look_direction, desired_half_width):
    """Separate the SOI from the interferers among the MUSIC directions.

    The direction nearest the look direction is the SOI if it lies within
    ``desired_half_width``; otherwise every direction is an interferer.
    """
    directions = np.asarray(directions, dtype=np.float64)
    if directions.size == 0:
        return None, directions
    nearest = int(np.argmin(np.abs(directions - look_direction)))
    if abs(directions[nearest] - look_direction) > desired_half_width:
        return None, directions
    return float(directions[nearest]), np.delete(directions, nearest)


def estimate_ipn(batch, look_direction=None, config=None):
    """Reconstruct the IPN covariance of a batch.

    Args:
        batch (SnapshotBatch): Received data.
        look_direction (float | None): Presumed SOI direction. Default: the
            batch's.
        config (PipelineConfig | None): Pipeline tuning.

    Returns:
        PipelineState: Estimates and the reconstruction product.
    """
    config = config or PipelineConfig()
    spec = batch.spec
    if look_direction is None:
        look_direction = batch.look_direction
    num_elements = spec.num_elements

    cov = sample_covariance(batch)
    eig = hermitian_eig(cov)
    num_sources = _source_count(eig.values, config, batch)
    if num_sources < 1:
        raise NoInterferenceError('No source detected in the data.')
    partition = partition_subspaces(eig, num_sources)

    noise_power = estimate_noise_power(partition, config.noise_mode)
    floor = NOISE_FLOOR_RATIO * eig.values[0] / num_elements
    if noise_power < floor:
        logger.warning(f'Noise power estimate {noise_power:.3e} raised to '
                       f'{floor:.3e}.')
        noise_power = floor

    directions = music_doas(partition.noise_basis, spec.grid, num_sources,
                            spec)
    soi_direction, interferers = split_directions(
        directions, look_direction, config.desired_half_width)

    sectors, powers, centers = [], [], []
    for direction in interferers:
        doas = snapshot_doas(batch.data, direction, spec,
                             config.scan_half_width, config.sector_step)
        center = refine_direction(doas)
        sector = uncertainty_width(doas, center, config.scan_half_width,
                                   config.keep_ratio, spec.grid_step)
        # never narrower than the resolution of the per-snapshot search
        if sector.half_width < config.sector_step / 2:
            sector = AngularSector(center, config.sector_step / 2)
        sectors.append(sector)
        centers.append(center)
        powers.append(
            interference_power(batch.data, steering_vector(center, spec),
                               noise_power))
    powers = np.asarray(powers)
    centers = np.asarray(centers)

    gamma_low, gamma_high = gamma_levels(noise_power, powers)
    # sectors without detected power carry no interference
    active = [i for i, p in enumerate(powers) if p > 0]
    spectrum = TwoLevelSpectrum(gamma_low, gamma_high,
                                tuple(sectors[i] for i in active),
                                tuple(powers[i] for i in active))

    angles, delta, levels = sector_sampling(
        spectrum.sectors, config.q_in, spec.grid_step,
        spectrum.levels if config.per_sector_levels else None)
    partial = partial_covariance(
        angles, delta, spec,
        None if levels is None else levels / (gamma_high - gamma_low))
    partial_eig = hermitian_eig(partial).truncate(config.rank_tol)
    product = reconstruct(
        spectrum,
        partial_eig,
        num_elements,
        spec=spec,
        keep_bessel_term=config.keep_bessel_term,
        partial_cov=partial,
        angles=angles,
        q_in=angles.size,
        delta=delta)
    return PipelineState(
        noise_power=noise_power,
        soi_direction=soi_direction,
        interferer_directions=centers,
        interferer_powers=powers,
        sectors=spectrum.sectors,
        product=product)


def run_pseur_pipeline(batch, look_direction=None, config=None):
    """Robust MVDR weights from the reconstructed IPN covariance.

    Falls back to the white-noise beamformer a / M when no interference is
    detected.

    Returns:
        BeamformerWeights: Weights tagged 'pseur'.
    """
    if look_direction is None:
        look_direction = batch.look_direction
    look_steering = steering_vector(look_direction, batch.spec)
    try:
        state = estimate_ipn(batch, look_direction, config)
    except NoInterferenceError as err:
        logger.warning(f'{err} Using the white-noise beamformer.')
        return white_noise_weights(look_steering, method='pseur')
    return mvdr_weights(state.product.inverse, look_steering, 'pseur')


class PseurReconstructor(BaseReconstructor):
    """IPN covariance from a two-level spectrum over estimated uncertainty
    sectors.

    Keyword arguments are the fields of ``PipelineConfig``.
    """
    method = 'pseur'

    def __init__(self, **kwargs):
        self.config = PipelineConfig.from_opt(kwargs)

    def inverse(self, batch, look_steering=None):
        return estimate_ipn(batch, batch.look_direction,
                            self.config).product.inverse

    def weights(self, batch):
        return run_pseur_pipeline(batch, batch.look_direction, self.config)

    def __repr__(self):
        return f'{self.__class__.__name__}({self.config})'
