"""Rank-profile revealing factorizations: CUP and its transpose mirror PLE.

``cup(A)`` overwrites ``A`` with the packed ``[C\\U]`` layout: for row
``i < r`` the entries right of the diagonal hold ``U`` (whose unit diagonal
is implicit), every entry ``(i, j)`` with ``j <= min(i, r-1)`` holds ``C``,
and the block ``[r:, r:]`` is zero. Then ``A = C U P`` with ``U`` embedded in
an ``n x n`` unit upper triangular matrix and ``C`` padded with zero columns.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedPacked
from .field import OpCounter
from .kernels import Left, Lower, Right, Unit, Upper, mm, trsm
from .matrix import Mat, Perm, perm_apply_cols, perm_apply_rows


@dataclass
class PackedCup:
    body: Mat
    r: int
    rrp: list
    P: Perm

    @property
    def pivots(self):
        return [int(self.body.data[i, j]) for j, i in enumerate(self.rrp)]


@dataclass
class PackedPle:
    body: Mat
    r: int
    crp: list
    P: Perm

    @property
    def pivots(self):
        return [int(self.body.data[i, j]) for i, j in enumerate(self.crp)]


def _counter(ctr):
    return OpCounter() if ctr is None else ctr


def _first_nonzero(v: np.ndarray, ctr: OpCounter) -> int:
    """Index of the first nonzero of ``v`` (or -1), charging one zero test per entry inspected."""
    nz = np.flatnonzero(v)
    if nz.size == 0:
        ctr.n_ztest += v.size
        return -1
    i = int(nz[0])
    ctr.n_ztest += i + 1
    return i


def _shift_u_rows(a: np.ndarray, r1: int, k: int, r2: int) -> None:
    # Row k+i of the lower block carries U row r1+i right of column r1+i;
    # move it up and clear what it leaves behind (C entries above pivots).
    if k == r1:
        return
    for i in range(r2):
        d, s = r1 + i, k + i
        a[d, d + 1:] = a[s, d + 1:]
        a[s, d + 1:] = 0


def _shift_l_cols(a: np.ndarray, r1: int, k: int, r2: int) -> None:
    if k == r1:
        return
    for i in range(r2):
        d, s = r1 + i, k + i
        a[d + 1:, d] = a[d + 1:, s]
        a[d + 1:, s] = 0


def cup(A: Mat, ctr: OpCounter | None = None) -> PackedCup:
    """CUP decomposition of ``A`` in place; returns rank, row rank profile and ``P``."""
    ctr = _counter(ctr)
    r, rrp, P = _cup(A, ctr)
    return PackedCup(A, r, rrp, P)


def _cup(A: Mat, ctr: OpCounter):
    m, n = A.shape
    if m == 0 or n == 0:
        return 0, [], Perm.identity(n)
    a = A.data
    if m == 1:
        i = _first_nonzero(a[0], ctr)
        if i < 0:
            return 0, [], Perm.identity(n)
        if i:
            a[0, 0], a[0, i] = a[0, i], a[0, 0]
        if n > 1:
            inv = A.field.inv(int(a[0, 0]), ctr)
            row = a[0, 1:]
            ctr.n_mul += row.size
            np.multiply(row, inv, out=row)
            np.remainder(row, A.p, out=row)
        return 1, [0], Perm.transposition(0, i, n)

    k = m // 2
    r1, rrp1, P1 = _cup(A.view(0, k, 0, n), ctr)
    if r1 == 0:
        r2, rrp2, P2 = _cup(A.view(k, m, 0, n), ctr)
        _shift_u_rows(a, 0, k, r2)
        return r2, [i + k for i in rrp2], P2

    perm_apply_cols(A.view(k, m, 0, n), P1)
    # G <- A21 U1^-1; Unit so the C entries sharing U1's diagonal are never read
    trsm(Right, Upper, Unit, A.view(0, r1, 0, r1), A.view(k, m, 0, r1), ctr)
    if r1 == n:
        return r1, rrp1, P1
    # H <- A22 - G V1
    mm(A.view(k, m, 0, r1), A.view(0, r1, r1, n), A.view(k, m, r1, n), -1, 1, ctr)
    r2, rrp2, P2 = _cup(A.view(k, m, r1, n), ctr)
    if r2:
        perm_apply_cols(A.view(0, r1, r1, n), P2)
        _shift_u_rows(a, r1, k, r2)
    P = P2.embed(r1, n).compose(P1) if r2 else P1
    return r1 + r2, rrp1 + [i + k for i in rrp2], P


def ple(A: Mat, ctr: OpCounter | None = None) -> PackedPle:
    """PLE decomposition of ``A`` in place: ``A = P L E`` with ``[L\\E]`` packed.

    ``L`` (unit lower, implicit diagonal) lives strictly below the diagonal in
    the first ``r`` columns; ``E`` (row echelon) occupies rows ``0..r-1`` on and
    right of the diagonal. Returns the column rank profile.
    """
    ctr = _counter(ctr)
    r, crp, P = _ple(A, ctr)
    return PackedPle(A, r, crp, P)


def _ple(A: Mat, ctr: OpCounter):
    m, n = A.shape
    if m == 0 or n == 0:
        return 0, [], Perm.identity(m)
    a = A.data
    if n == 1:
        i = _first_nonzero(a[:, 0], ctr)
        if i < 0:
            return 0, [], Perm.identity(m)
        if i:
            a[0, 0], a[i, 0] = a[i, 0], a[0, 0]
        if m > 1:
            inv = A.field.inv(int(a[0, 0]), ctr)
            col = a[1:, 0]
            ctr.n_mul += col.size
            np.multiply(col, inv, out=col)
            np.remainder(col, A.p, out=col)
        return 1, [0], Perm.transposition(0, i, m)

    k = n // 2
    r1, crp1, P1 = _ple(A.view(0, m, 0, k), ctr)
    if r1 == 0:
        r2, crp2, P2 = _ple(A.view(0, m, k, n), ctr)
        _shift_l_cols(a, 0, k, r2)
        return r2, [j + k for j in crp2], P2

    perm_apply_rows(A.view(0, m, k, n), P1, inverse=True)
    # G <- L1^-1 A12
    trsm(Left, Lower, Unit, A.view(0, r1, 0, r1), A.view(0, r1, k, n), ctr)
    if r1 == m:
        return r1, crp1, P1
    # H <- A22 - M1 G
    mm(A.view(r1, m, 0, r1), A.view(0, r1, k, n), A.view(r1, m, k, n), -1, 1, ctr)
    r2, crp2, P2 = _ple(A.view(r1, m, k, n), ctr)
    if r2:
        perm_apply_rows(A.view(r1, m, 0, r1), P2, inverse=True)
        _shift_l_cols(a, r1, k, r2)
    P = P1.compose(P2.embed(r1, m)) if r2 else P1
    return r1 + r2, crp1 + [j + k for j in crp2], P


# ---------------------------------------------------------------------------


def validate_cup(pc: PackedCup) -> None:
    a = pc.body.data
    m, n = a.shape
    r = pc.r
    rrp = list(pc.rrp)
    if len(rrp) != r or r > min(m, n) or pc.P.k != n:
        raise MalformedPacked("rank, profile and permutation sizes disagree")
    if any(b <= a_ for a_, b in zip(rrp, rrp[1:])) or any(i < j for j, i in enumerate(rrp)) \
            or any(i >= m for i in rrp):
        raise MalformedPacked(f"bad row rank profile {rrp}")
    if np.any(a[r:, r:]):
        raise MalformedPacked("nonzero entries in the trailing block")
    for j, i in enumerate(rrp):
        if a[i, j] == 0:
            raise MalformedPacked(f"zero pivot at ({i}, {j})")
        if i > j and np.any(a[j:i, j]):
            raise MalformedPacked(f"nonzero above pivot in column {j}")


def expand_cup(pc: PackedCup):
    """Explicit ``(C, U, P)`` with ``C`` m x r, ``U`` r x n unit upper, ``A = C U P``."""
    validate_cup(pc)
    a = pc.body.data
    m, n = a.shape
    r = pc.r
    C = np.zeros((m, r), dtype=np.int64)
    for j in range(r):
        C[j:, j] = a[j:, j]
    U = np.triu(a[:r, :], 1)
    U[np.arange(r), np.arange(r)] = 1
    F = pc.body.field
    return Mat(F, C), Mat(F, U), pc.P


def validate_ple(pp: PackedPle) -> None:
    a = pp.body.data
    m, n = a.shape
    r = pp.r
    crp = list(pp.crp)
    if len(crp) != r or r > min(m, n) or pp.P.k != m:
        raise MalformedPacked("rank, profile and permutation sizes disagree")
    if any(b <= a_ for a_, b in zip(crp, crp[1:])) or any(j < i for i, j in enumerate(crp)) \
            or any(j >= n for j in crp):
        raise MalformedPacked(f"bad column rank profile {crp}")
    if np.any(a[r:, r:]):
        raise MalformedPacked("nonzero entries in the trailing block")
    for i, j in enumerate(crp):
        if a[i, j] == 0:
            raise MalformedPacked(f"zero pivot at ({i}, {j})")
        if j > i and np.any(a[i, i:j]):
            raise MalformedPacked(f"nonzero left of pivot in row {i}")


def expand_ple(pp: PackedPle):
    """Explicit ``(P, L, E)`` with ``L`` m x r unit lower, ``E`` r x n row echelon, ``A = P L E``."""
    validate_ple(pp)
    a = pp.body.data
    m, n = a.shape
    r = pp.r
    L = np.tril(a[:, :r], -1)
    L[np.arange(r), np.arange(r)] = 1
    E = np.zeros((r, n), dtype=np.int64)
    for i in range(r):
        E[i, i:] = a[i, i:]
    F = pp.body.field
    return pp.P, Mat(F, L), Mat(F, E)
