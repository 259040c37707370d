"""Spectral bipartition of a two-block random graph via the modularity matrix."""

import numpy as np

from eigloc.sbm import (
    ModularityOperator,
    SbmParams,
    accuracy,
    cos_M_Z,
    gamma,
    mu_predicted,
    rayleigh_q,
    sample,
    spectral_bipartition,
    xi_bar,
)

params = SbmParams(n=400, p_in=0.9, p_out=0.05, seed=7)
s = sample(params)
print(f"volume {s.volume:.0f} = inside {s.nu_C:.0f} + boundary {s.boundary:.0f}")

# the operator never forms M = A - (vol/n^2) J
op = ModularityOperator(s)
print("||M||_F =", round(op.frobenius_norm(), 4))

g = gamma(params.p_in, params.p_out)
print(f"cos(M, zz^T) = {cos_M_Z(s):.4f}   predicted >= gamma = {g:.4f}")

b = spectral_bipartition(s)
print(f"lambda1 = {b.lambda1:.2f}   predicted mu = {mu_predicted(params):.2f}")
print(f"accuracy = {accuracy(b.labels, s.planted):.4f}   floor xi_bar = {xi_bar(g):.4f}")

# the planted cluster scores higher than a random half under q(S)
rng = np.random.default_rng(0)
print("q(planted) =", round(rayleigh_q(s, s.planted > 0), 3),
      " q(random half) =", round(rayleigh_q(s, rng.permutation(400)[:200]), 3))
