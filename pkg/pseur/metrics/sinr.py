import numpy as np
from scipy import linalg


def _weight_vector(weights):
    return np.asarray(getattr(weights, 'weights', weights))


def calculate_sinr(weights, batch):
    """Output SINR in dB against the true scene of a batch.

    SINR = sigma_1^2 |w^H a~_1|^2 / (w^H R_{i+n} w), with a~_1 the true SOI
    signature and R_{i+n} the true IPN covariance.

    Args:
        weights (BeamformerWeights | ndarray): Beamformer weights (M, ).
        batch (SnapshotBatch): Batch carrying the truth.

    Returns:
        float: SINR in dB.
    """
    w = _weight_vector(weights)
    signal = batch.soi_power * np.abs(np.vdot(w, batch.soi_signature))**2
    noise = np.vdot(w, batch.ipn_covariance @ w).real
    return float(10 * np.log10(signal / noise))


def calculate_optimal_sinr(batch):
    """sigma_1^2 a~^H R_{i+n}^-1 a~ in dB, the largest SINR of any w."""
    solved = linalg.solve(
        batch.ipn_covariance, batch.soi_signature, assume_a='pos')
    value = batch.soi_power * np.vdot(batch.soi_signature, solved).real
    return float(10 * np.log10(value))


def calculate_deviation(weights, batch):
    """Optimal SINR minus the achieved SINR, in dB."""
    return calculate_optimal_sinr(batch) - calculate_sinr(weights, batch)
