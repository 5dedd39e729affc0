import logging
import numpy as np
from scipy import linalg

from pseur.data.array_util import steering_vector
from pseur.ops import NumericalError
from .arch_util import BaseReconstructor, sector_sampling
from .doa_util import AngularSector, sample_covariance

logger = logging.getLogger('pseur')

NUM_POINTS = 188
LOADING_RATIO = 1e-8


def ipn_region(look_direction, desired_half_width=6.0):
    """[-90, look - h) and (look + h, 90] as angular sectors."""
    sectors = []
    lower_edge = look_direction - desired_half_width
    upper_edge = look_direction + desired_half_width
    if lower_edge > -90.0:
        sectors.append(
            AngularSector(0.5 * (lower_edge - 90.0),
                          0.5 * (lower_edge + 90.0)))
    if upper_edge < 90.0:
        sectors.append(
            AngularSector(0.5 * (upper_edge + 90.0),
                          0.5 * (90.0 - upper_edge)))
    if not sectors:
        raise ValueError(
            f'The desired sector of +-{desired_half_width} deg around '
            f'{look_direction} deg leaves no interference region.')
    return tuple(sectors)


def cho_inverse(mat, name='covariance'):
    """Inverse of a Hermitian PD matrix; diagonal loading when it is not."""
    num_rows = mat.shape[0]
    eye = np.eye(num_rows, dtype=np.complex128)
    try:
        factor = linalg.cho_factor(mat)
    except linalg.LinAlgError:
        loading = LOADING_RATIO * np.trace(mat).real / num_rows
        logger.warning(f'The {name} is singular; diagonal loading '
                       f'{loading:.3e} applied.')
        try:
            factor = linalg.cho_factor(mat + loading * eye)
        except linalg.LinAlgError as err:
            raise NumericalError(
                f'The {name} stays singular after loading: {err}')
    inverse = linalg.cho_solve(factor, eye)
    return 0.5 * (inverse + inverse.conj().T)


def capon_spectrum(inverse, angles, spec):
    """rho(theta) = 1 / (a^H R^-1 a)."""
    steering = steering_vector(angles, spec)
    quad = np.sum(steering.conj() * (inverse @ steering), axis=0).real
    return 1.0 / quad


def meps_spectrum(inverse, angles, spec):
    """rho(theta) = 1 / (eps |a^H R^-1 u_1|^2), eps = 1 / (u_1^T R^-1 u_1)."""
    steering = steering_vector(angles, spec)
    eps = 1.0 / inverse[0, 0].real
    cross = steering.conj().T @ inverse[:, 0]
    return 1.0 / (eps * np.abs(cross)**2)


def spectral_ipn(batch, look_direction, spectrum_fn, num_points=NUM_POINTS,
                 desired_half_width=6.0):
    """IPN covariance by integrating a spatial spectrum outside the
    desired-signal sector.

    Returns:
        ndarray: Estimated R_{i+n} (M, M).
    """
    spec = batch.spec
    cov_inverse = cho_inverse(sample_covariance(batch), 'sample covariance')
    angles, delta, _ = sector_sampling(
        ipn_region(look_direction, desired_half_width), num_points,
        spec.grid_step)
    power = spectrum_fn(cov_inverse, angles, spec)
    steering = steering_vector(angles, spec)
    ipn = (steering * (power * delta)) @ steering.conj().T
    return 0.5 * (ipn + ipn.conj().T)


class CaponReconstructor(BaseReconstructor):
    """Capon spectrum integrated over the interference region."""
    method = 'ipn-cc'
    spectrum_fn = staticmethod(capon_spectrum)

    def __init__(self, num_points=NUM_POINTS, desired_half_width=6.0):
        if num_points < 6:
            raise ValueError(f'num_points must be >= 6, got {num_points}.')
        self.num_points = int(num_points)
        self.desired_half_width = float(desired_half_width)

    def inverse(self, batch, look_steering=None):
        ipn = spectral_ipn(batch, batch.look_direction, self.spectrum_fn,
                           self.num_points, self.desired_half_width)
        return cho_inverse(ipn, 'reconstructed covariance')

    def __repr__(self):
        return (f'{self.__class__.__name__}(num_points={self.num_points}, '
                f'desired_half_width={self.desired_half_width})')


class MepsReconstructor(CaponReconstructor):
    """Maximum-entropy power spectrum integrated over the interference
    region."""
    method = 'ipn-meps'
    spectrum_fn = staticmethod(meps_spectrum)
