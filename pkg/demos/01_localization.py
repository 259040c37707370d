"""Where the rightmost eigenvalue lives, read off one Frobenius cosine."""

import numpy as np

from eigloc.linalg import cos_rank_one, eig_full, random_symmetric
from eigloc.localize import counterexample_diag, localize

rng = np.random.default_rng(1)

# a random symmetric matrix with a strong rank-one component along u
u = rng.standard_normal(8)
u /= np.linalg.norm(u)
A = random_symmetric(8, rng).array + 12.0 * np.outer(u, u)

# the landmark is a noisy copy of u; c is the cosine between A and x x^T
x = u + 0.1 * rng.standard_normal(8)
print("cos(A, xx^T)       =", round(cos_rank_one(A, x), 6))

r = localize(A, x)
print("lower bound mu     =", round(r.mu, 6))
print("true lambda1       =", round(r.lambda1, 6))
print("relative gap       =", round(r.relative_gap, 6), "<= s =", round(r.s, 6))
print("cos^2(v1, x)       =", round(r.cos2_v1_x, 6), ">= xi =", round(r.xi, 6))
print("dominance promised =", r.simple_dominant_guaranteed)

# at c = 1/sqrt(2) the guarantee is lost: two equal blocks share the top eigenvalue
B, xb = counterexample_diag(np.ones(4))
rb = localize(B, xb)
print()
print("boundary example: c =", round(rb.c, 12), "| top eigenvalues",
      eig_full(B).eigenvalues[:2], "| note:", rb.note)
