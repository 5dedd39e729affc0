import numpy as np
from dataclasses import dataclass
from scipy import linalg

HERMITIAN_TOL = 1e-12
RANK_TOL = 1e-8


class NumericalError(ArithmeticError):
    """Raised when a numerical kernel cannot produce a trustworthy result."""


class NoInterferenceError(NumericalError):
    """Every interference power estimate is zero."""


class UnderResolvedError(NumericalError):
    """The DoA search found fewer sources than requested."""


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs of a Hermitian matrix.

    Attributes:
        values (ndarray): Real eigenvalues in descending order, shape (r, ).
        vectors (ndarray): Orthonormal eigenvectors as columns, shape (n, r).
    """
    values: np.ndarray
    vectors: np.ndarray

    @property
    def rank(self):
        return self.values.shape[0]

    def truncate(self, rel_tol=RANK_TOL):
        """Keep the eigenpairs with value >= rel_tol * largest value."""
        if self.rank == 0 or self.values[0] <= 0:
            return EigenSystem(self.values[:0], self.vectors[:, :0])
        keep = self.values >= rel_tol * self.values[0]
        return EigenSystem(self.values[keep], self.vectors[:, keep])

    def reassemble(self):
        """V diag(values) V^H."""
        return (self.vectors * self.values) @ self.vectors.conj().T


def _check_square(mat, name):
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
        raise ValueError(f'{name} must be a non-empty square matrix, '
                         f'got shape {mat.shape}.')
    if not np.all(np.isfinite(mat)):
        raise ValueError(f'{name} has non-finite entries.')
    return mat


def hermitian_eig(mat, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned in descending order. The phase of every
    eigenvector is fixed so that its largest-magnitude entry is real and
    positive, which makes the output reproducible across runs.

    Args:
        mat (ndarray): Hermitian matrix (n, n).
        tol (float): Accepted max|A - A^H| relative to max|A|.
            Default: 1e-12.

    Returns:
        EigenSystem: Full eigensystem of ``mat``.
    """
    mat = _check_square(mat, 'mat').astype(np.complex128)
    scale = np.max(np.abs(mat))
    skew = np.max(np.abs(mat - mat.conj().T))
    if skew > tol * scale:
        raise NumericalError(
            f'Matrix is not Hermitian: max|A - A^H| = {skew:.3e} exceeds '
            f'{tol:.1e} * max|A| = {tol * scale:.3e}.')
    mat = 0.5 * (mat + mat.conj().T)

    values, vectors = linalg.eigh(mat)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1]

    pivot_rows = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[pivot_rows, np.arange(vectors.shape[1])]
    vectors = vectors * (np.abs(pivots) / pivots)
    return EigenSystem(values, np.ascontiguousarray(vectors))


def lowrank_update_inverse(base, basis, weights):
    """Inverse of ``base * I + U diag(weights) U^H`` by the Woodbury lemma.

    (bI + U W U^H)^-1 = (1/b) [I - U (b W^-1 + U^H U)^-1 U^H]

    Args:
        base (float): Positive diagonal level b.
        basis (ndarray): Update directions U, shape (n, r). r may be 0.
        weights (ndarray): Positive update weights, shape (r, ).

    Returns:
        ndarray: Inverse matrix (n, n).
    """
    if base <= 0:
        raise ValueError(f'Diagonal level must be positive, got {base}.')
    basis = np.asarray(basis, dtype=np.complex128)
    weights = np.asarray(weights, dtype=np.float64)
    num_rows = basis.shape[0]
    eye = np.eye(num_rows, dtype=np.complex128)
    if weights.size == 0:
        return eye / base
    if np.any(weights <= 0):
        raise NumericalError('Low-rank update weights must be positive.')

    core = np.diag(base / weights) + basis.conj().T @ basis
    try:
        solved = linalg.solve(core, basis.conj().T, assume_a='pos')
    except linalg.LinAlgError as err:
        raise NumericalError(f'Woodbury core matrix is singular: {err}')
    return (eye - basis @ solved) / base


def woodbury_inverse(gamma_low, gamma_high, eig):
    """Inverse of the two-level reconstructed covariance.

    Inverts 2*pi*gamma_L*I + (gamma_H - gamma_L) E Xi E^H, where (Xi, E) is
    the rank-truncated eigensystem of the partial covariance.

    Args:
        gamma_low (float): Low spectral level gamma_L.
        gamma_high (float): High spectral level gamma_H.
        eig (EigenSystem): Truncated eigensystem of the partial covariance.

    Returns:
        ndarray: Inverse matrix (M, M).
    """
    if not gamma_low > 0:
        raise ValueError(f'gamma_low must be positive, got {gamma_low}.')
    if not gamma_high > gamma_low:
        raise ValueError(
            f'gamma_high ({gamma_high}) must exceed gamma_low ({gamma_low}); '
            'the two-level approximation is invalid otherwise.')
    return lowrank_update_inverse(2 * np.pi * gamma_low, eig.vectors,
                                  (gamma_high - gamma_low) * eig.values)


def ipn_matrix(gamma_low, gamma_high, eig):
    """Dense 2*pi*gamma_L*I + (gamma_H - gamma_L) E Xi E^H."""
    num_rows = eig.vectors.shape[0]
    return (2 * np.pi * gamma_low * np.eye(num_rows, dtype=np.complex128) +
            (gamma_high - gamma_low) * eig.reassemble())
