import numpy as np
from dataclasses import dataclass

from pseur.ops import NumericalError


@dataclass(frozen=True, eq=False)
class BeamformerWeights:
    """Weight vector with the method that produced it.

    Attributes:
        weights (ndarray): w, shape (M, ).
        method (str): Method tag, e.g. 'pseur' or 'smi'.
        look_steering (ndarray): SOI signature the constraint w^H a = 1
            holds for.
    """
    weights: np.ndarray
    method: str
    look_steering: np.ndarray

    def response(self, steering):
        """w^H a for one steering vector (M, ) or a matrix of them (M, G)."""
        return self.weights.conj() @ steering


def mvdr_weights(inverse, look_steering, method='mvdr'):
    """Distortionless weights R^-1 a / (a^H R^-1 a).

    Args:
        inverse (ndarray): Hermitian positive definite R^-1 (M, M).
        look_steering (ndarray): Presumed SOI signature a (M, ).
        method (str): Tag stored with the weights.

    Returns:
        BeamformerWeights: The weights.
    """
    look_steering = np.asarray(look_steering, dtype=np.complex128)
    numerator = inverse @ look_steering
    denominator = np.vdot(look_steering, numerator)
    if not np.isfinite(denominator) or denominator.real <= 0:
        raise NumericalError(
            f'a^H R^-1 a = {denominator} is not positive; the inverse '
            'covariance is not positive definite.')
    return BeamformerWeights(numerator / denominator.real, method,
                             look_steering)


def white_noise_weights(look_steering, method='white-noise'):
    """Matched filter a / ||a||^2, i.e. a / M for a steering vector."""
    look_steering = np.asarray(look_steering, dtype=np.complex128)
    norm = np.vdot(look_steering, look_steering).real
    return BeamformerWeights(look_steering / norm, method, look_steering)
