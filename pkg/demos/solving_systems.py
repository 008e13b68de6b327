"""
Determinants, inverses and linear systems
=========================================

Everything here goes through one CUP factorization of the input.
"""

import numpy as np

from ranklab import (Mat, PrimeField, determinant, inverse, nullspace_basis, random_matrix,
                     random_rank_matrix, rank_and_profile, solve)

F = PrimeField(65521)

# A uniformly random 5x5 matrix from a seed, so the run is reproducible.
A = random_matrix(5, 5, seed=2024, field=F)
print("det(A) =", determinant(A.copy()))

Ainv = inverse(A.copy())
print("A * A^-1 is the identity:",
      np.array_equal(A.data.astype(object).dot(Ainv.data) % F.p, np.eye(5, dtype=int)))

# A rank-3 system with 6 unknowns: solvable when b is in the column space.
B = random_rank_matrix(4, 6, 3, seed=7, field=F)
x0 = np.arange(1, 7)
b = Mat(F, (B.data.astype(object).dot(x0) % F.p).reshape(4, 1))
res = solve(B.copy(), b, with_nullspace=True)
print("consistent:", res.consistent, "rank:", res.rank)
print("one solution x =", res.x.data[:, 0])
print("nullspace has", res.nullspace.n, "basis vectors")

# The row outside the rank profile is a combination of the others.
# Nudging its entry of b makes the system unsolvable.
_, profile = rank_and_profile(B.copy())
dependent = next(i for i in range(4) if i not in profile)
b.data[dependent, 0] = (b.data[dependent, 0] + 1) % F.p
res = solve(B.copy(), b)
print("after perturbing b: consistent =", res.consistent, "witness row =", res.witness)

N = nullspace_basis(B.copy())
print("B N == 0:", not np.any(B.data.astype(object).dot(N.data) % F.p))
