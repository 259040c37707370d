"""How many entries of the leading eigenvector are positive, without computing it."""

import numpy as np

from eigloc.linalg import eig_full
from eigloc.signature import (
    blockJ_example,
    check_signature,
    check_signature_shifted,
    check_signature_variance,
    max_k,
)

rng = np.random.default_rng(2)
n = 10

# all-ones plus modest symmetric noise
g = rng.standard_normal((n, n))
A = np.ones((n, n)) + 0.35 * (g + g.T) / 2

k = max_k(A)
print("largest k meeting the condition:", k)
r = check_signature(A, k)
print(f"1'A1 = {r.condition_lhs:.4f} >= {r.condition_rhs:.4f}")
print(f"guaranteed: >= {n - k + 1} nonnegative, >= {n - k} positive")
print(f"observed:   {r.nonneg_count} nonnegative, {r.pos_count} positive")
print("v1 =", np.round(eig_full(A).eigenvectors[:, 0], 3))

# the bound is tight: two all-ones blocks meet it with equality
r = check_signature(blockJ_example(3, 10), 3)
print()
print("blkdiag(J3, J7): lhs =", r.condition_lhs, "rhs =", r.condition_rhs,
      "positive entries =", r.pos_count)

# a heavy diagonal hides the structure; shifting by the mean eigenvalue recovers it
C = np.ones((6, 6)) + 5 * np.eye(6)
print()
print("plain verdict   :", check_signature(C, 1).condition_holds)
print("shifted verdict :", check_signature_shifted(C, 1, -np.trace(C) / 6).condition_holds)
print("variance verdict:", check_signature_variance(C, 1).condition_holds)
