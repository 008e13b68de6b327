"""
Rank profiles and packed factorizations
=======================================

Factor a small matrix over GF(7) in place and read the factors back out.
"""

import numpy as np

from ranklab import Mat, PrimeField, cup, expand_cup, naive_gauss, ple, red_col_ech_trans

F = PrimeField(7)

# Row 1 is twice row 0, so the row rank profile skips it.
A = Mat(F, [[1, 2, 0, 3],
            [2, 4, 0, 6],
            [0, 1, 5, 1],
            [1, 3, 5, 4]])
print("A =\n", A.data)

# cup overwrites its argument, so work on a copy.
pc = cup(A.copy())
print("rank", pc.r, "row profile", pc.rrp, "column permutation", pc.P.tolist())
print("packed [C\\U] body =\n", pc.body.data)

# The packed body expands to C (column echelon), U (unit upper) and P.
C, U, P = expand_cup(pc)
back = C.data.dot(U.data).dot(P.matrix()) % F.p
print("C U P == A:", np.array_equal(back, A.data))

# PLE is the transpose mirror and reveals the column rank profile.
pp = ple(A.copy())
print("column profile", pp.crp)

# The reduced column echelon form is canonical: it matches schoolbook elimination.
R, X = red_col_ech_trans(A.copy()).expand()
print("reduced echelon R =\n", R.data)
print("matches naive elimination:", R.tolist() == naive_gauss(A)[3])
