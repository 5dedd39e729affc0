import numpy as np
from scipy import special
from scipy.linalg import toeplitz


def bessel_j0(x):
    """Bessel function of the first kind, order zero.

    Evaluated by the Cephes routine behind ``scipy.special.j0`` (rational
    approximation below |x| = 5, Hankel asymptotic expansion above), which
    holds double precision over the whole real line.

    Args:
        x (float | ndarray): Argument(s). Must be finite.

    Returns:
        float | ndarray: J0(x).
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError('bessel_j0 requires finite arguments.')
    out = special.j0(x)
    return float(out) if out.ndim == 0 else out


def bessel_matrix(num_elements, spacing_wavelengths=0.5):
    """Normalised angular integral of the ULA outer product.

    (1/2pi) * int_{-pi}^{pi} a(theta) a^H(theta) dtheta has entries
    J0(2pi (d/lambda) |l - m|), i.e. J0(|l - m| pi) for half-wavelength
    spacing.

    Args:
        num_elements (int): Number of array elements M.
        spacing_wavelengths (float): Element spacing d/lambda. Default: 0.5.

    Returns:
        ndarray: Real symmetric Toeplitz matrix (M, M) with unit diagonal.
    """
    if num_elements < 1:
        raise ValueError(f'num_elements must be >= 1, got {num_elements}.')
    lags = np.arange(num_elements)
    column = special.j0(2 * np.pi * spacing_wavelengths * lags)
    column[0] = 1.0
    return toeplitz(column)
