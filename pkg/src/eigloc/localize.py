"""Localizing the rightmost eigenpair of a symmetric matrix with a rank-one landmark.

Given ``A`` and a landmark ``x`` with ``c = cos(A, x x^T) > 0``:

* ``lambda_1(A) >= mu = c ||A||_F = x^T A x / x^T x``;
* ``|lambda_1 - mu| / |lambda_1| <= s = sqrt(1 - c^2)``;
* if ``c > 1/sqrt(2)`` then ``lambda_1`` is simple and dominates in modulus;
* if ``c^2 >= 1/2`` then ``cos(v_1, x)^2 >= xi``, the largest root of
  ``c^2 = 2 xi^2 - 2 xi + 1``.

``localize`` computes these quantities and checks each one against a full
eigendecomposition.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .linalg import (
    SymmetricMatrix,
    as_array,
    as_landmark,
    cos_rank_one,
    eig_full,
    frobenius_norm,
)

SQRT_HALF = 1.0 / np.sqrt(2.0)
# c within this of 1/sqrt(2) is treated as the boundary case
BOUNDARY_TOL = 1e-12
SLACK = 1e-9
DEGENERACY_TOL = 1e-8


class BoundNotApplicable(ValueError):
    pass


class LandmarkAntiAligned(ValueError):
    def __init__(self, c):
        super().__init__(f"landmark anti-aligned (c = {c:.6g} <= 0); analyze -A")
        self.c = c


@dataclass(frozen=True)
class LocalizationReport:
    c: float
    s: float
    mu: float
    simple_dominant_guaranteed: bool
    xi: float | None
    lambda1: float
    relative_gap: float
    cos2_v1_x: float
    gap_flag: bool
    multiplicity: int
    claim1_holds: bool
    dominance_holds: bool | None
    claim2_holds: bool
    claim3_holds: bool | None
    note: str = ""

    @property
    def verified(self):
        """True when every applicable claim checked out."""
        return all(v is not False for v in (
            self.claim1_holds, self.dominance_holds, self.claim2_holds, self.claim3_holds))

    def to_dict(self):
        return {k: v.item() if isinstance(v, np.generic) else v
                for k, v in asdict(self).items()}


def xi_from_c(c: float) -> float:
    """Largest root of ``c^2 = 2 xi^2 - 2 xi + 1``, i.e. ``(1 + sqrt(2c^2 - 1)) / 2``."""
    c = float(c)
    if c > 1.0 + BOUNDARY_TOL:
        raise ValueError(f"cosine {c} exceeds 1")
    disc = 2.0 * c * c - 1.0
    if disc < -2 * BOUNDARY_TOL or c < 0:
        raise BoundNotApplicable(f"bound not applicable: c^2 = {c * c:.6g} < 1/2")
    return 0.5 + 0.5 * np.sqrt(min(max(disc, 0.0), 1.0))


def polygonal_check(values) -> bool:
    """Strict polygonal inequality ``2 max(values) > sum(values)``."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("polygonal_check needs at least one value")
    if np.any(v < 0):
        raise ValueError("polygonal_check needs nonnegative values")
    return bool(2.0 * v.max() > v.sum())


def leading_eigenspace(eig, tol=DEGENERACY_TOL):
    """Columns of ``eig.eigenvectors`` whose eigenvalue ties with lambda_1."""
    w = eig.eigenvalues
    k = int(np.sum(w[0] - w < tol * (1.0 + abs(w[0]))))
    return eig.eigenvectors[:, :k]


def eigenspace_alignment(A, x, tol=DEGENERACY_TOL):
    """Range ``(min, max)`` of ``cos(u, x)^2`` over unit ``u`` in the leading eigenspace."""
    a = as_array(A)
    x = as_landmark(x, a.shape[0])
    basis = leading_eigenspace(eig_full(a), tol)
    hi = float(np.sum((basis.T @ x) ** 2) / (x @ x))
    lo = hi if basis.shape[1] == 1 else 0.0
    return lo, hi


def localize(A, x) -> LocalizationReport:
    a = as_array(A)
    x = as_landmark(x, a.shape[0])
    norm = frobenius_norm(a)
    if norm == 0.0:
        raise ValueError("cosine undefined for a zero matrix")
    c = cos_rank_one(a, x)
    if c <= 0.0:
        raise LandmarkAntiAligned(c)
    s = float(np.sqrt(max(1.0 - c * c, 0.0)))
    mu = float(x @ a @ x) / float(x @ x)
    guaranteed = bool(c > SQRT_HALF + BOUNDARY_TOL)
    try:
        xi = xi_from_c(c)
    except BoundNotApplicable:
        xi = None

    eig = eig_full(a)
    w = eig.eigenvalues
    lam1 = float(w[0])
    basis = leading_eigenspace(eig)
    mult = basis.shape[1]
    gap_flag = mult > 1
    if gap_flag:
        cos2 = float(np.sum((basis.T @ x) ** 2) / (x @ x))
        note = (f"leading eigenvalue has numerical multiplicity {mult}; cos2_v1_x "
                "measures x against its projection onto the leading eigenspace")
    else:
        v1 = basis[:, 0]
        if v1 @ x < 0:
            v1 = -v1
        cos2 = float((v1 @ x) ** 2 / (x @ x))
        note = ""
    if not guaranteed and xi is not None:
        note = (note + "; " if note else "") + "boundary case: c = 1/sqrt(2)"

    rel_gap = abs(lam1 - mu) / abs(lam1) if lam1 != 0 else np.inf
    claim1 = lam1 >= mu - SLACK * (1.0 + abs(mu))
    dominance = None
    if guaranteed:
        dominance = (not gap_flag) and polygonal_check(w**2)
    claim2 = rel_gap <= s + SLACK
    claim3 = None if xi is None else cos2 >= xi - SLACK
    return LocalizationReport(
        c=c, s=s, mu=mu, simple_dominant_guaranteed=guaranteed, xi=xi,
        lambda1=lam1, relative_gap=float(rel_gap), cos2_v1_x=cos2,
        gap_flag=gap_flag, multiplicity=mult,
        claim1_holds=bool(claim1), dominance_holds=dominance,
        claim2_holds=bool(claim2), claim3_holds=claim3, note=note,
    )


def counterexample_diag(y):
    """``A = blkdiag(y y^T, y y^T)`` with landmark ``x = (y, y)``.

    ``cos(A, x x^T)`` is exactly ``1/sqrt(2)`` and ``lambda_1 = lambda_2 = ||y||^2``,
    so the strict inequality for simplicity cannot be relaxed.
    """
    y = as_landmark(y)
    m = y.size
    a = np.zeros((2 * m, 2 * m))
    yy = np.outer(y, y)
    a[:m, :m] = yy
    a[m:, m:] = yy
    return SymmetricMatrix(a), np.concatenate((y, y))


def counterexample_antidiag(y):
    """``A = [[0, y y^T], [y y^T, 0]]`` with ``x = (y, y)``; eigenvalues ``+-||y||^2``."""
    y = as_landmark(y)
    m = y.size
    a = np.zeros((2 * m, 2 * m))
    yy = np.outer(y, y)
    a[:m, m:] = yy
    a[m:, :m] = yy
    return SymmetricMatrix(a), np.concatenate((y, y))
