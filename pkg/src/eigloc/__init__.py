"""Eigenpair localization from Frobenius cosines, sign patterns, and SBM bipartitioning."""

from .linalg import (
    EigenConvergenceError,
    SolverOptions,
    SymmetricMatrix,
    cos_matrices,
    cos_rank_one,
    eig_full,
    frobenius_inner,
    frobenius_norm,
    leading_eigenpair,
    project_rank_one,
)
from .localize import LocalizationReport, localize, xi_from_c
from .sbm import SbmParams, sample, spectral_bipartition
from .signature import check_signature, check_signature_shifted, check_signature_variance

__version__ = "0.1.0"
