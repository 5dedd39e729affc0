from .linalg import (HERMITIAN_TOL, RANK_TOL, EigenSystem, NoInterferenceError,
                     NumericalError, UnderResolvedError, hermitian_eig,
                     ipn_matrix, lowrank_update_inverse, woodbury_inverse)
from .special import bessel_j0, bessel_matrix

__all__ = [
    # linalg.py
    'HERMITIAN_TOL',
    'RANK_TOL',
    'EigenSystem',
    'NumericalError',
    'NoInterferenceError',
    'UnderResolvedError',
    'hermitian_eig',
    'ipn_matrix',
    'lowrank_update_inverse',
    'woodbury_inverse',
    # special.py
    'bessel_j0',
    'bessel_matrix',
]
