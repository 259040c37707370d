"""Two-block stochastic block model and modularity-based bipartitioning.

Vertices ``0 .. n/2 - 1`` form the cluster ``C`` and the rest its
complement; the planted vector ``z`` is ``+1`` on ``C`` and ``-1`` off it.
Each upper-triangle position ``(i, j)``, ``i <= j``, is an independent
Bernoulli trial, mirrored to ``(j, i)``.  The diagonal is sampled too
(with ``p_in``) unless ``loopless=True``.

Edge uniforms come from a Philox stream keyed by the seed, position ``e`` of
the stream belonging to the ``e``-th upper-triangle entry in row-major
order, so any single edge can be regenerated on its own
(``edge_uniform``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    LeadingEigenpair,
    SolverOptions,
    SymmetricMatrix,
    as_array,
    eig_full,
    leading_eigenpair,
)
from .localize import BoundNotApplicable, xi_from_c


class DegenerateModelError(ValueError):
    pass


@dataclass(frozen=True)
class SbmParams:
    n: int
    p_in: float
    p_out: float
    seed: int = 0
    loopless: bool = False
    permute: bool = False
    strict: bool = True

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 4 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 4, got {self.n}")
        for name in ("p_in", "p_out"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.strict and self.p_out > self.p_in:
            raise ValueError("p_out > p_in; pass strict=False for a negative control")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def with_seed(self, seed):
        return SbmParams(self.n, self.p_in, self.p_out, seed,
                         self.loopless, self.permute, self.strict)

    def to_dict(self):
        return {"n": self.n, "p_in": self.p_in, "p_out": self.p_out, "seed": self.seed,
                "loopless": self.loopless, "permute": self.permute}


@dataclass(frozen=True)
class SbmSample:
    params: SbmParams
    adjacency: SymmetricMatrix
    planted: np.ndarray
    volume: float
    nu_C: float
    boundary: float

    @property
    def n(self):
        return self.params.n

    def metadata(self):
        """JSON-ready sidecar: seed, params and the edge counts."""
        return {**self.params.to_dict(), "volume": self.volume,
                "nu_C": self.nu_C, "boundary": self.boundary}

    def metadata_json(self):
        return json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n"


def _stream(seed):
    return np.random.Generator(np.random.Philox(key=int(seed)))


def edge_uniform(seed, n, i, j):
    """Regenerate the uniform that decided entry ``(i, j)`` of a size-``n`` sample."""
    i, j = sorted((int(i), int(j)))
    e = i * n - i * (i - 1) // 2 + (j - i)
    bg = np.random.Philox(key=int(seed))
    # Philox emits four 64-bit words per counter step
    bg.advance(e // 4)
    return float(np.random.Generator(bg).random(e % 4 + 1)[-1])


def _permutation(params):
    rng = np.random.Generator(np.random.Philox(key=int(params.seed), counter=[0, 0, 0, 1]))
    return rng.permutation(params.n)


def sample(params: SbmParams) -> SbmSample:
    n, h = params.n, params.n // 2
    iu, ju = np.triu_indices(n)
    u = _stream(params.seed).random(iu.size)
    same = (iu < h) == (ju < h)
    prob = np.where(same, params.p_in, params.p_out)
    hits = u < prob
    if params.loopless:
        hits &= iu != ju
    a = np.zeros((n, n))
    a[iu[hits], ju[hits]] = 1.0
    a = a + np.triu(a, 1).T
    z = np.concatenate((np.ones(h), -np.ones(h)))
    if params.permute:
        perm = _permutation(params)
        a = a[np.ix_(perm, perm)]
        z = z[perm]
    inside = z > 0
    in_c = float(a[np.ix_(inside, inside)].sum())
    in_cbar = float(a[np.ix_(~inside, ~inside)].sum())
    cross = float(a[np.ix_(inside, ~inside)].sum())
    z.setflags(write=False)
    return SbmSample(params, SymmetricMatrix(a), z, float(a.sum()),
                     in_c + in_cbar, 2.0 * cross)


class ModularityOperator:
    """``M = A - (vol V / n^2) J`` applied without forming ``M``."""

    def __init__(self, adjacency):
        if isinstance(adjacency, SbmSample):
            adjacency = adjacency.adjacency
        self.a = as_array(adjacency)
        self.n = self.a.shape[0]
        self.volume = float(self.a.sum())
        self._t = self.volume / self.n**2

    def matvec(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f"vector of length {v.shape} for operator of order {self.n}")
        return self.a @ v - self._t * v.sum()

    __call__ = matvec

    def dense(self):
        return SymmetricMatrix(self.a - self._t)

    def frobenius_norm_sq(self):
        """``||A||_F^2 - vol^2 / n^2``; equals ``vol (1 - vol/n^2)`` for 0/1 ``A``."""
        return float(np.vdot(self.a, self.a)) - self.volume**2 / self.n**2

    def frobenius_norm(self):
        return float(np.sqrt(max(self.frobenius_norm_sq(), 0.0)))


def modularity_matvec(op: ModularityOperator, v):
    return op.matvec(v)


def rayleigh_q(sample_or_adj, S) -> float:
    """``1_S^T M 1_S / |S| = (vol S - vol V |S|^2 / n^2) / |S|``.

    ``S`` is a boolean mask or a collection of vertex indices.
    """
    a = as_array(sample_or_adj.adjacency if isinstance(sample_or_adj, SbmSample)
                 else sample_or_adj)
    n = a.shape[0]
    S = np.asarray(S)
    if S.dtype == bool:
        idx = np.flatnonzero(S)
    else:
        idx = np.unique(S.astype(int))
    if idx.size == 0:
        raise ValueError("S must be nonempty")
    vol_s = float(a[np.ix_(idx, idx)].sum())
    size = idx.size
    return (vol_s - float(a.sum()) * size**2 / n**2) / size


def gamma(p_in: float, p_out: float) -> float:
    """Asymptotic lower estimate of ``cos(M, z z^T)`` for the two-block model."""
    for p in (p_in, p_out):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of range: {p}")
    total = p_in + p_out
    denom = total * (2.0 - total)
    if denom <= 0.0:
        raise DegenerateModelError(f"degenerate model: p_in + p_out = {total:g}")
    return (p_in - p_out) / float(np.sqrt(denom))


def xi_bar(gamma_val: float) -> float:
    """Asymptotic floor ``1/2 + sqrt(2 gamma^2 - 1)/2`` on the fraction classified correctly."""
    try:
        return xi_from_c(gamma_val)
    except BoundNotApplicable:
        raise BoundNotApplicable(
            f"guarantee not applicable: gamma^2 = {gamma_val**2:.6g} < 1/2") from None


def mu_predicted(params: SbmParams) -> float:
    return (params.p_in - params.p_out) * params.n / 2.0


def cos_M_Z(sample: SbmSample) -> float:
    """``(nu_C - boundary) / (n ||M||_F)`` from the edge counts alone.

    Uses ``||M||_F^2 = vol (1 - vol / n^2)``, valid for 0/1 adjacency.
    """
    n = sample.n
    vol = sample.volume
    m2 = vol * (1.0 - vol / n**2)
    if m2 <= 0.0:
        raise ValueError("modularity matrix is zero (empty or complete graph)")
    return (sample.nu_C - sample.boundary) / (n * float(np.sqrt(m2)))


@dataclass(frozen=True)
class Bipartition:
    labels: np.ndarray
    v1: np.ndarray
    lambda1: float
    gap_flag: bool = False
    residual: float = 0.0
    eigenpair: LeadingEigenpair | None = field(default=None, repr=False)


def _orient(v, planted):
    if planted is not None:
        return -v if v @ planted < 0 else v
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def spectral_bipartition(sample, method="matrix-free", planted=None,
                         opts: SolverOptions | None = None) -> Bipartition:
    """Split vertices by the sign of the leading modularity eigenvector.

    ``labels[i] = +1`` when ``v1[i] >= 0``.  ``v1`` is oriented toward the
    planted vector when one is known, otherwise its largest-magnitude entry
    is made positive.  ``method="dense"`` uses ``eig_full`` on the explicit
    ``M`` instead of the matrix-free power iteration.
    """
    if isinstance(sample, SbmSample):
        planted = sample.planted if planted is None else planted
        op = ModularityOperator(sample.adjacency)
    else:
        op = ModularityOperator(sample)
    if op.volume == 0.0:
        raise ValueError("spectral_bipartition needs a nonzero adjacency")
    if method == "matrix-free":
        if opts is None:
            opts = SolverOptions(shift=op.frobenius_norm())
        pair = leading_eigenpair(op.matvec, op.n, opts)
        v, lam, gap, res = np.array(pair.v1), pair.lambda1, pair.gap_flag, pair.residual
    elif method == "dense":
        eig = eig_full(op.dense())
        w = eig.eigenvalues
        v, lam = np.array(eig.eigenvectors[:, 0]), float(w[0])
        gap = bool(op.n > 1 and w[0] - w[1] < 1e-8 * (1.0 + abs(w[0])))
        res, pair = eig.residual_norm, None
    else:
        raise ValueError(f"unknown method {method!r}")
    v = _orient(v, planted)
    labels = np.where(v >= 0, 1, -1)
    return Bipartition(labels, v, float(lam), bool(gap), float(res), pair)


def accuracy(labels, planted) -> float:
    """Fraction of vertices with ``labels[i] == planted[i]`` (no label-swap maximization)."""
    labels = np.asarray(labels)
    planted = np.asarray(planted)
    if labels.shape != planted.shape:
        raise ValueError("labels and planted differ in length")
    return float(np.mean(labels * planted > 0))
