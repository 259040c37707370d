"""Frobenius geometry on dense symmetric matrices and two eigensolvers.

``eig_full`` is a cyclic Jacobi method using the round-robin (tournament)
ordering, so that each round applies n/2 disjoint rotations at once with
vectorized numpy updates.  ``leading_eigenpair`` is a matrix-free shifted
power iteration for the rightmost eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

EIG_MAX_ORDER = 2000
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-12


class EigenConvergenceError(RuntimeError):
    """Raised when an eigensolver hits its iteration cap.

    ``best`` carries the last iterate (an ``EigenDecomposition`` or a
    ``LeadingEigenpair``) so callers can inspect how far it got.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SymmetricMatrix:
    """Immutable dense real symmetric matrix.

    Only the upper triangle of the input is read; the lower triangle is
    mirrored from it, so symmetry holds by construction.  Pass
    ``check=True`` to reject inputs whose mirrored entries disagree.
    """

    __slots__ = ("_a",)

    def __init__(self, a, check=False, tol=1e-12):
        a = np.array(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        if check:
            scale = max(1.0, float(np.max(np.abs(a))))
            if np.max(np.abs(a - a.T)) > tol * scale:
                raise ValueError("matrix is not symmetric")
        upper = np.triu(a)
        a = upper + np.triu(a, 1).T
        a.setflags(write=False)
        self._a = a

    @classmethod
    def from_packed(cls, n, upper):
        """Build from the row-major upper triangle (diagonal included)."""
        upper = np.asarray(upper, dtype=float)
        if upper.shape != (n * (n + 1) // 2,):
            raise ValueError("packed length does not match n(n+1)/2")
        a = np.zeros((n, n))
        a[np.triu_indices(n)] = upper
        return cls(a)

    @property
    def n(self):
        return self._a.shape[0]

    @property
    def array(self):
        """Read-only full ``(n, n)`` view."""
        return self._a

    def packed(self):
        return self._a[np.triu_indices(self.n)].copy()

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._a
        return self._a.astype(dtype)

    def __neg__(self):
        return SymmetricMatrix(-self._a)

    def __add__(self, other):
        return SymmetricMatrix(self._a + as_array(other))

    def __sub__(self, other):
        return SymmetricMatrix(self._a - as_array(other))

    def __mul__(self, s):
        return SymmetricMatrix(float(s) * self._a)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self.n, self._a.tobytes()))

    def __repr__(self):
        return f"SymmetricMatrix(n={self.n})"


def as_array(a):
    """Return the dense ndarray behind ``a`` (no copy for ``SymmetricMatrix``)."""
    if isinstance(a, SymmetricMatrix):
        return a.array
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_landmark(x, n=None):
    """Validate a landmark vector: 1-d, finite, not identically zero."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("landmark must be a vector")
    if n is not None and x.shape[0] != n:
        raise ValueError(f"landmark has length {x.shape[0]}, matrix has order {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("landmark has non-finite entries")
    if not np.any(x):
        raise ValueError("landmark must be nonzero")
    return x


def _same_order(a, b):
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def frobenius_inner(A, B) -> float:
    """<A, B> = tr(A B^T) = sum_ij A_ij B_ij."""
    a, b = as_array(A), as_array(B)
    _same_order(a, b)
    return float(np.vdot(a, b))


def frobenius_norm(A) -> float:
    a = as_array(A)
    return float(np.sqrt(np.vdot(a, a)))


def cos_matrices(A, B) -> float:
    """Cosine of the angle between A and B under the trace inner product."""
    a, b = as_array(A), as_array(B)
    _same_order(a, b)
    na, nb = frobenius_norm(a), frobenius_norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine undefined for a zero matrix")
    c = frobenius_inner(a, b) / (na * nb)
    return float(np.clip(c, -1.0, 1.0))


def rank_one(x):
    x = np.asarray(x, dtype=float)
    return np.outer(x, x)


def cos_rank_one(A, x) -> float:
    """cos(A, x x^T) = x^T A x / (x^T x ||A||_F), without forming x x^T."""
    a = as_array(A)
    x = as_landmark(x, a.shape[0])
    na = frobenius_norm(a)
    if na == 0.0:
        raise ValueError("cosine undefined for a zero matrix")
    c = float(x @ a @ x) / (float(x @ x) * na)
    return float(np.clip(c, -1.0, 1.0))


def project_rank_one(A, x):
    """Orthogonal projection of A onto span{x x^T}.

    Returns ``(tau, Z)`` with ``A = tau * x x^T + Z`` and ``<Z, x x^T> = 0``.
    """
    a = as_array(A)
    x = as_landmark(x, a.shape[0])
    xx = float(x @ x)
    tau = float(x @ a @ x) / xx**2
    return tau, SymmetricMatrix(a - tau * np.outer(x, x))


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual_norm: float
    sweeps: int = 0

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def _round_robin(m):
    """Pairings for a round-robin tournament on m (even) players.

    Every unordered pair appears exactly once across the m - 1 rounds.
    """
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        half = m // 2
        rounds.append([(players[i], players[m - 1 - i]) for i in range(half)])
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _schedule(n):
    m = n + (n % 2)
    out = []
    for pairs in _round_robin(m):
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            p, q = np.array(pairs).T
            out.append((p, q))
    return out


def _off_norm(a):
    # summing the off-diagonal squares directly; ||A||^2 - ||diag||^2 cancels
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _orient_columns(v):
    """Make the largest-magnitude entry of each column positive."""
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def _residuals(a, w, v):
    return np.linalg.norm(a @ v - v * w, axis=0)


def eig_full(A, max_sweeps=JACOBI_MAX_SWEEPS, tol=JACOBI_TOL, max_order=EIG_MAX_ORDER):
    """Full symmetric eigendecomposition by cyclic Jacobi rotations.

    Eigenvalues come back sorted nonincreasing (stable within ties), each
    eigenvector column oriented so its largest-magnitude entry is positive.
    Stops when the off-diagonal Frobenius norm drops to ``tol * ||A||_F``.
    """
    a = np.array(as_array(A), dtype=float)
    n = a.shape[0]
    if n > max_order:
        raise ValueError(f"order {n} exceeds eig_full cap {max_order}")
    v = np.eye(n)
    scale = frobenius_norm(a)
    target = tol * scale
    schedule = _schedule(n)
    sweeps = 0
    while _off_norm(a) > target:
        if sweeps >= max_sweeps:
            best = _finish(as_array(A), np.diag(a).copy(), v, sweeps)
            raise EigenConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps", best
            )
        for p, q in schedule:
            apq = a[p, q]
            live = apq != 0.0
            if not np.any(live):
                continue
            p, q, apq = p[live], q[live], apq[live]
            app, aqq = a[p, p], a[q, q]
            with np.errstate(over="ignore", invalid="ignore"):
                theta = (aqq - app) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                big = np.abs(theta) > 1e150
                t[big] = 0.5 / theta[big]
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp, rq = a[p, :], a[q, :]
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p], a[:, q]
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp, vq = v[:, p], v[:, q]
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
        sweeps += 1
    return _finish(as_array(A), np.diag(a).copy(), v, sweeps)


def _finish(a0, w, v, sweeps):
    order = np.argsort(-w, kind="stable")
    w, v = w[order], _orient_columns(v[:, order])
    res = float(np.max(_residuals(a0, w, v))) if w.size else 0.0
    w.setflags(write=False)
    v.setflags(write=False)
    return EigenDecomposition(w, v, res, sweeps)


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for ``leading_eigenpair``.

    ``shift`` defaults to an estimate of the spectral radius; pass
    ``||A||_F`` when it is known (it is for the modularity matrix).
    Convergence is declared when the residual is below
    ``tol * max(1, shift)``.
    """

    tol: float = 1e-10
    max_iter: int = 20000
    shift: float | None = None
    degeneracy_tol: float = 1e-8
    deflation_iter: int = 2000
    seed: int = 0


@dataclass(frozen=True)
class LeadingEigenpair:
    lambda1: float
    v1: np.ndarray
    residual: float
    gap_flag: bool
    lambda2_estimate: float = float("nan")
    iterations: int = 0
    shift: float = 0.0


def _unit(x):
    nrm = np.linalg.norm(x)
    return x / nrm if nrm > 0 else x


def _estimate_radius(matvec, n, rng, iters=30):
    v = _unit(rng.standard_normal(n))
    r = 0.0
    for _ in range(iters):
        w = matvec(v)
        r = max(r, float(np.linalg.norm(w)))
        if r == 0.0:
            break
        v = _unit(w)
    return r


def leading_eigenpair(matvec: Callable[[np.ndarray], np.ndarray], n: int,
                      opts: SolverOptions | None = None) -> LeadingEigenpair:
    """Rightmost eigenpair of a symmetric operator given only its matvec.

    Runs power iteration on ``A + shift*I`` so the rightmost eigenvalue is
    the dominant one, then reports the Rayleigh quotient of the final
    iterate.  A deflated power iteration estimates the second eigenvalue;
    ``gap_flag`` is raised when the gap cannot be certified above
    ``degeneracy_tol * (1 + |lambda1|)``.
    """
    opts = opts or SolverOptions()
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(opts.seed)
    shift = opts.shift
    if shift is None:
        # power-method norms underestimate the radius; double for margin
        shift = 2.0 * _estimate_radius(matvec, n, rng)
    shift = float(shift)
    tol = opts.tol * max(1.0, abs(shift))

    v = _unit(rng.standard_normal(n))
    lam, res, it = 0.0, np.inf, 0
    for it in range(1, opts.max_iter + 1):
        w = np.asarray(matvec(v), dtype=float)
        lam = float(v @ w)
        res = float(np.linalg.norm(w - lam * v))
        if res <= tol:
            break
        y = w + shift * v
        if not np.any(y):
            # v lies in the kernel of A + shift*I
            break
        v = _unit(y)
    else:
        best = LeadingEigenpair(lam, v, res, True, iterations=it, shift=shift)
        raise EigenConvergenceError(
            f"power iteration did not reach residual {tol:g} in {opts.max_iter} steps "
            f"(residual {res:.3g})", best)

    v = _orient_columns(v[:, None])[:, 0]
    lam2 = _second_eigenvalue(matvec, n, v, shift, rng, opts, tol)
    gap_tol = opts.degeneracy_tol * (1.0 + abs(lam))
    gap_flag = n > 1 and (lam - lam2) < gap_tol
    v.setflags(write=False)
    return LeadingEigenpair(lam, v, res, bool(gap_flag), lam2, it, shift)


def _second_eigenvalue(matvec, n, v1, shift, rng, opts, tol):
    """Upper estimate of lambda_2 from power iteration orthogonal to v1.

    Returns the Rayleigh quotient plus its residual, which bounds the
    distance to some eigenvalue of the deflated operator; the estimate is
    therefore conservative for flagging degeneracy.
    """
    if n == 1:
        return -np.inf
    u = rng.standard_normal(n)
    u = _unit(u - (v1 @ u) * v1)
    theta, prev = -np.inf, np.inf
    r = np.inf
    for _ in range(opts.deflation_iter):
        w = np.asarray(matvec(u), dtype=float)
        w -= (v1 @ w) * v1
        theta = float(u @ w)
        r = float(np.linalg.norm(w - theta * u))
        if r <= tol or abs(theta - prev) <= 1e-13 * max(1.0, abs(shift)):
            break
        prev = theta
        y = w + shift * u
        y -= (v1 @ y) * v1
        if not np.any(y):
            break
        u = _unit(y)
    return theta + r


def hoffman_wielandt_gap(A, B):
    """Both sides of sum_i (l_i(A) - l_i(B))^2 <= ||A - B||_F^2."""
    a, b = as_array(A), as_array(B)
    _same_order(a, b)
    la = eig_full(a).eigenvalues
    lb = eig_full(b).eigenvalues
    lhs = float(np.sum((la - lb) ** 2))
    d = a - b
    rhs = float(np.vdot(d, d))
    return lhs, rhs


def random_symmetric(n, rng):
    """Standard normal entries, symmetrized as (G + G^T) / 2."""
    g = rng.standard_normal((n, n))
    return SymmetricMatrix((g + g.T) / 2.0)
