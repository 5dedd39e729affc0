import numpy as np
from scipy import linalg

from pseur.ops import NumericalError, lowrank_update_inverse
from .arch_util import BaseReconstructor
from .doa_util import sample_covariance


def loaded_inverse(batch, loading=0.0):
    """(R_xx + eps I)^-1 of the sample covariance."""
    if loading < 0:
        raise ValueError(f'loading must be >= 0, got {loading}.')
    cov = sample_covariance(batch)
    num_elements = cov.shape[0]
    num_snapshots = np.asarray(getattr(batch, 'data', batch)).shape[0]
    if loading == 0 and num_snapshots < num_elements:
        raise ValueError(
            f'The sample covariance of {num_snapshots} snapshots is singular '
            f'for {num_elements} sensors; set loading > 0.')
    eye = np.eye(num_elements, dtype=np.complex128)
    try:
        factor = linalg.cho_factor(cov + loading * eye)
    except linalg.LinAlgError as err:
        raise NumericalError(
            f'Sample covariance is singular ({err}); set loading > 0.')
    return linalg.cho_solve(factor, eye)


def true_ipn_inverse(batch):
    """Inverse of the true IPN covariance.

    Without drift R = sigma_n^2 I + A S A^H and the inverse follows from the
    Woodbury identity; a drifting batch is inverted densely.
    """
    if not batch.noise_power > 0:
        raise ValueError('The true IPN covariance needs noise_power > 0.')
    if batch.drifting:
        return linalg.inv(batch.ipn_covariance)
    return lowrank_update_inverse(batch.noise_power,
                                  batch.interferer_steering,
                                  batch.interferer_powers)


class SampleReconstructor(BaseReconstructor):
    """Sample matrix inversion with optional diagonal loading.

    Args:
        loading (float): Diagonal loading eps >= 0. Default: 0.
    """
    method = 'smi'

    def __init__(self, loading=0.0):
        if loading < 0:
            raise ValueError(f'loading must be >= 0, got {loading}.')
        self.loading = float(loading)

    def inverse(self, batch, look_steering=None):
        return loaded_inverse(batch, self.loading)

    def __repr__(self):
        return f'{self.__class__.__name__}(loading={self.loading})'


class OracleReconstructor(BaseReconstructor):
    """Optimal beamformer: true IPN covariance and true SOI signature."""
    method = 'optimal'

    def steering(self, batch):
        return batch.soi_signature

    def inverse(self, batch, look_steering=None):
        return true_ipn_inverse(batch)
