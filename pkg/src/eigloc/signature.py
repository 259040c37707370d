"""Sign patterns of the leading eigenvector from the all-ones landmark.

With ``w(k) = (n - k)^2 + k^2`` and ``1 <= k < n/2``, the condition

    1^T A 1 >= sqrt(w(k)) ||A||_F

forces the spectral radius of ``A`` to be a simple eigenvalue whose
eigenvector, suitably oriented, has at least ``n - k + 1`` nonnegative
entries, ``n - k`` of them positive.  ``k = 1`` recovers the classical
statement that the eigenvector is nonnegative.

Two relaxations shift ``A`` by ``alpha I`` first; the ``variance`` one uses
``alpha = -tr(A)/n`` and reads the condition through the mean and variance
of the spectrum.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .linalg import SymmetricMatrix, as_array, eig_full

ZERO_TOL = 1e-10
SIMPLE_TOL = 1e-8
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class SignatureReport:
    k: int
    n: int
    variant: str
    alpha: float | None
    condition_lhs: float
    condition_rhs: float
    condition_holds: bool
    degenerate: bool
    nonneg_count: int | None
    pos_count: int | None
    rho_simple: bool | None
    lambda1: float | None
    conclusions_hold: bool | None

    def to_dict(self):
        return {k: v.item() if isinstance(v, np.generic) else v
                for k, v in asdict(self).items()}


def pi_k_n(k: int, n: int) -> float:
    """Largest cosine with the all-ones vector over vectors with at most k positive entries."""
    if not (0 < k <= n):
        raise ValueError(f"need 0 < k <= n, got k={k}, n={n}")
    return float(np.sqrt(k / n))


def sign_census(v, zero_tol=0.0):
    """Return ``(nonneg, pos)`` counts of ``v`` with a symmetric zero band."""
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    v = np.asarray(v, dtype=float)
    return int(np.sum(v >= -zero_tol)), int(np.sum(v > zero_tol))


def _check_k(k, n):
    if not (1 <= k and 2 * k < n):
        raise ValueError(f"k must satisfy 1 <= k < n/2, got k={k}, n={n}")


def _weight(k, n):
    return float((n - k) ** 2 + k ** 2)


def _shifted_condition(a, k, alpha):
    """Decide the condition on ``B = A + alpha I``.

    Returns ``(holds, lhs_B, rhs_B, B, degenerate)`` where
    ``lhs_B = 1^T A 1 + n alpha`` and ``rhs_B = sqrt(w ||B||_F^2)``.  Taking
    the root of the product keeps the equality cases (0/1 block matrices)
    exact.  ``B`` that vanishes up to rounding makes the condition read
    ``0 >= 0``; that case holds and is flagged degenerate.
    """
    n = a.shape[0]
    b = a + alpha * np.eye(n) if alpha else a
    lhs = float(a.sum()) + n * alpha if alpha else float(a.sum())
    bb = float(np.vdot(b, b))
    rhs = float(np.sqrt(_weight(k, n) * bb))
    scale = max(float(np.vdot(a, a)), alpha * alpha * n)
    degenerate = bb <= DEGENERATE_TOL**2 * scale
    return bool(degenerate or lhs >= rhs), lhs, rhs, b, bool(degenerate)


def _conclusions(a, b, k):
    """Eigen-side checks: rho(B) simple and the sign counts of v1.

    ``a`` and ``b`` share eigenvectors; the spectral-radius claim is about ``b``.
    """
    n = a.shape[0]
    eig = eig_full(b)
    w = eig.eigenvalues
    v1 = eig.eigenvectors[:, 0]
    if v1.sum() < 0:
        v1 = -v1
    tol = SIMPLE_TOL * (1.0 + abs(w[0]))
    rho_simple = bool(n == 1 or (w[0] - w[1] > tol and w[0] - abs(w[-1]) > tol))
    nonneg, pos = sign_census(v1, ZERO_TOL * float(np.max(np.abs(v1))))
    ok = rho_simple and nonneg >= n - k + 1 and pos >= n - k
    lam1 = float(v1 @ a @ v1)
    return nonneg, pos, rho_simple, lam1, bool(ok)


def _report(a, k, variant, alpha, holds, lhs, rhs, b, degenerate):
    n = a.shape[0]
    if holds and not degenerate:
        nonneg, pos, rho_simple, lam1, ok = _conclusions(a, b, k)
    else:
        nonneg = pos = rho_simple = lam1 = ok = None
    return SignatureReport(
        k=k, n=n, variant=variant, alpha=alpha,
        condition_lhs=lhs, condition_rhs=rhs, condition_holds=bool(holds),
        degenerate=degenerate, nonneg_count=nonneg, pos_count=pos,
        rho_simple=rho_simple, lambda1=lam1, conclusions_hold=ok,
    )


def check_signature(A, k: int) -> SignatureReport:
    """Plain condition ``1^T A 1 >= sqrt((n-k)^2 + k^2) ||A||_F``."""
    a = as_array(A)
    _check_k(k, a.shape[0])
    holds, lhs, rhs, b, degen = _shifted_condition(a, k, 0.0)
    return _report(a, k, "plain", None, holds, lhs, rhs, b, degen)


def check_signature_shifted(A, k: int, alpha: float) -> SignatureReport:
    """Condition ``1^T A 1 >= sqrt(w) ||A + alpha I||_F - n alpha``.

    Reported ``condition_rhs`` is the right-hand side in that form; the
    conclusions are for the rightmost eigenpair of ``A``.
    """
    a = as_array(A)
    n = a.shape[0]
    _check_k(k, n)
    alpha = float(alpha)
    holds, _, rhs_b, b, degen = _shifted_condition(a, k, alpha)
    return _report(a, k, "shifted", alpha, holds, float(a.sum()), rhs_b - n * alpha, b, degen)


def spectrum_moments(A):
    """Mean and variance of the eigenvalues, from the trace and ``||A - mean I||_F``."""
    a = as_array(A)
    n = a.shape[0]
    mean = float(np.trace(a)) / n
    b = a - mean * np.eye(n)
    return mean, float(np.vdot(b, b)) / n


def check_signature_variance(A, k: int) -> SignatureReport:
    """Condition ``(1/n) sum_{i != j} A_ij >= sigma sqrt(((n-k)^2 + k^2) / n)``.

    This is the shifted condition at ``alpha = -tr(A)/n`` rewritten; the
    verdict is decided in the shifted form so both always agree.  Reported
    sides are in the mean/variance form.  ``A = mean * I`` (zero variance)
    meets the condition with equality and is flagged degenerate.
    """
    a = as_array(A)
    n = a.shape[0]
    _check_k(k, n)
    mean, var = spectrum_moments(a)
    alpha = -mean
    holds, _, _, b, degen = _shifted_condition(a, k, alpha)
    lhs = (float(a.sum()) - float(np.trace(a))) / n
    rhs = float(np.sqrt(var)) * float(np.sqrt(_weight(k, n) / n))
    return _report(a, k, "variance", alpha, holds, lhs, rhs, b, degen)


def max_k(A):
    """Largest ``k < n/2`` meeting the plain condition, or ``None``."""
    a = as_array(A)
    n = a.shape[0]
    best = None
    for k in range(1, (n + 1) // 2):
        if _shifted_condition(a, k, 0.0)[0]:
            best = k
    return best


def blockJ_example(k: int, n: int) -> SymmetricMatrix:
    """``blkdiag(J_k, J_{n-k})``: meets the condition with equality.

    Its leading eigenvector is the indicator of the larger block, with
    exactly ``n - k`` positive entries.
    """
    _check_k(k, n)
    a = np.zeros((n, n))
    a[:k, :k] = 1.0
    a[k:, k:] = 1.0
    return SymmetricMatrix(a)
