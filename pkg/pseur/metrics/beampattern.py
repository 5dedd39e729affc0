import numpy as np
from dataclasses import dataclass

from pseur.data.array_util import steering_vector


@dataclass(frozen=True, eq=False)
class Beampattern:
    """Array response of a beamformer.

    Attributes:
        angles (ndarray): Scan angles in degrees.
        magnitude (ndarray): |w^H a(theta)|.
        gain_db (ndarray): 20 log10 of the magnitude relative to the
            response at the presumed SOI signature.
    """
    angles: np.ndarray
    magnitude: np.ndarray
    gain_db: np.ndarray

    def gain_at(self, theta):
        """Gain in dB at the grid point nearest ``theta``."""
        return float(self.gain_db[np.argmin(np.abs(self.angles - theta))])


def beampattern(weights, spec, grid=None):
    """Evaluate |w^H a(theta)| over a grid.

    Args:
        weights (BeamformerWeights): Weights with their look steering.
        spec (ArraySpec): Array geometry.
        grid (ndarray | None): Angles in degrees. Default: ``spec.grid``.

    Returns:
        Beampattern: The pattern, 0 dB at the presumed SOI signature.
    """
    angles = spec.grid if grid is None else np.asarray(grid, np.float64)
    magnitude = np.abs(weights.response(steering_vector(angles, spec)))
    reference = np.abs(weights.response(weights.look_steering))
    floor = np.finfo(np.float64).eps * reference
    gain_db = 20 * np.log10(np.maximum(magnitude, floor) / reference)
    return Beampattern(angles, magnitude, gain_db)


def notch_prediction(partial_eig, gamma_low, gamma_high, look_steering,
                     theta, spec, sectors=None):
    """Predicted beam response inside an interference sector.

    With b = E^H a_1 and a(theta) ~= E h(theta) (least squares),

        D(theta) = 2pi gamma_L / ||a_1||^2
                 * |sum_r h_r^* b_r / (2pi gamma_L + xi_r (gamma_H - gamma_L))|

    which neglects the sector-leakage term of a_1^H R^-1 a_1.

    Args:
        partial_eig (EigenSystem): Truncated (Xi, E) of the partial
            covariance.
        gamma_low (float): gamma_L.
        gamma_high (float): gamma_H.
        look_steering (ndarray): Presumed SOI signature a_1.
        theta (float | ndarray): Angle(s) in degrees.
        spec (ArraySpec): Array geometry.
        sectors (Sequence[AngularSector] | None): When given, every angle
            must lie in one of them.

    Returns:
        float | ndarray: Predicted |D(theta)|.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if sectors is not None:
        inside = np.zeros(theta.shape, dtype=bool)
        for sector in sectors:
            inside |= sector.contains(theta)
        if not np.all(inside):
            raise ValueError(f'Angles {theta[~inside]} lie outside the '
                             'interference sectors.')
    basis = partial_eig.vectors
    if basis.shape[1] == 0:
        raise ValueError('The partial covariance has no retained direction.')
    steering = steering_vector(np.atleast_1d(theta), spec)
    coeffs, *_ = np.linalg.lstsq(basis, steering, rcond=None)
    b = basis.conj().T @ look_steering
    base = 2 * np.pi * gamma_low
    scale = 1.0 / (base + partial_eig.values * (gamma_high - gamma_low))
    total = (coeffs.conj() * (b * scale)[:, None]).sum(axis=0)
    norm = np.vdot(look_steering, look_steering).real
    predicted = base / norm * np.abs(total)
    return float(predicted[0]) if theta.ndim == 0 else predicted
