"""Rank, determinant, inverse, linear systems and nullspaces from CUP.

Every function here consumes its input matrix: on return it holds
factorization data, not the original entries. Copy first if it is needed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularMatrix
from .factor import PackedCup, cup
from .field import OpCounter, neg_mod
from .kernels import Left, Unit, Upper, trsm
from .matrix import Mat, perm_apply_rows
from .echelon import red_col_ech_trans


def _counter(ctr):
    return OpCounter() if ctr is None else ctr


def rank_and_profile(A: Mat, ctr: OpCounter | None = None):
    pc = cup(A, _counter(ctr))
    return pc.r, list(pc.rrp)


def determinant(A: Mat, ctr: OpCounter | None = None) -> int:
    """``sign(P) * prod(pivots)``, or 0 when ``A`` is singular (``det U = 1``)."""
    ctr = _counter(ctr)
    if A.m != A.n:
        raise DimensionMismatch(f"determinant of a {A.m}x{A.n} matrix")
    n = A.n
    pc = cup(A, ctr)
    if pc.r < n:
        return 0
    F = A.field
    piv = pc.pivots
    d = piv[0] if piv else 1
    for v in piv[1:]:
        d = F.mul(d, v, ctr)
    if pc.P.sign() < 0:
        d = F.neg(d, ctr)
    return d % F.p


def inverse(A: Mat, ctr: OpCounter | None = None) -> Mat:
    """``A^-1`` in the storage of ``A``; raises :class:`SingularMatrix` if ``r < n``."""
    ctr = _counter(ctr)
    if A.m != A.n:
        raise DimensionMismatch(f"inverse of a {A.m}x{A.n} matrix")
    rt = red_col_ech_trans(A, ctr)
    if rt.r < A.n:
        raise SingularMatrix(f"matrix has rank {rt.r} < {A.n}")
    # r = n forces Q = id and R = I, so the body is X and A^-1 = P^T X
    perm_apply_rows(A, rt.P, inverse=True)
    return A


@dataclass
class SolveResult:
    """Outcome of :func:`solve`.

    ``x`` is one solution (``None`` when inconsistent); ``witness`` is the
    first row of ``A x = b`` that no ``x`` can satisfy.
    """

    x: Mat | None
    consistent: bool
    witness: int | None = None
    nullspace: Mat | None = None
    rank: int = 0


def solve(A: Mat, b: Mat, ctr: OpCounter | None = None, *, with_nullspace: bool = False) -> SolveResult:
    """Solve ``A x = b`` for one right-hand side column ``b`` (m x 1)."""
    ctr = _counter(ctr)
    m, n = A.shape
    if b.m != m or b.n != 1:
        raise DimensionMismatch(f"right-hand side is {b.m}x{b.n}, expected {m}x1")
    F = A.field
    pc = cup(A, ctr)
    a = pc.body.data
    r, rrp = pc.r, pc.rrp
    rhs = [int(v) for v in b.data[:, 0]]

    # forward substitution on the pivot rows of C
    z = []
    for j, i in enumerate(rrp):
        s = rhs[i]
        for k in range(j):
            s = F.sub(s, F.mul(int(a[i, k]), z[k], ctr), ctr)
        z.append(F.div(s, int(a[i, j]), ctr))
    # other rows must agree; C row i lives in columns < min(i+1, r)
    pivset = set(rrp)
    for i in range(m):
        if i in pivset:
            continue
        s = 0
        for k in range(min(i + 1, r)):
            s = F.add(s, F.mul(int(a[i, k]), z[k], ctr), ctr)
        ctr.n_ztest += 1
        if s != rhs[i]:
            return SolveResult(None, False, i, rank=r)

    y = Mat(F, np.zeros((n, 1), dtype=np.int64))
    y.data[:r, 0] = z
    trsm(Left, Upper, Unit, pc.body.view(0, r, 0, r), y.view(0, r, 0, 1), ctr)
    perm_apply_rows(y, pc.P, inverse=True)
    N = _nullspace_from_cup(pc, ctr) if with_nullspace else None
    return SolveResult(y, True, None, N, r)


def _nullspace_from_cup(pc: PackedCup, ctr: OpCounter) -> Mat:
    # A P^T U^-1 = C has zero columns r..n-1, so N = P^T [-U1^-1 U2; I]
    F = pc.body.field
    m, n = pc.body.shape
    r = pc.r
    N = Mat(F, np.zeros((n, n - r), dtype=np.int64))
    top = N.view(0, r, 0, n - r)
    top.data[...] = pc.body.data[:r, r:]
    trsm(Left, Upper, Unit, pc.body.view(0, r, 0, r), top, ctr)
    ctr.n_addsub += top.data.size
    neg_mod(top.data, F.p)
    N.data[r:, :] = np.eye(n - r, dtype=np.int64)
    perm_apply_rows(N, pc.P, inverse=True)
    return N


def nullspace_basis(A: Mat, ctr: OpCounter | None = None) -> Mat:
    """Columns spanning ``{x : A x = 0}``, an ``n x (n - r)`` matrix."""
    ctr = _counter(ctr)
    pc = cup(A, ctr)
    return _nullspace_from_cup(pc, ctr)
