"""Oracles and comparison algorithms.

Nothing here calls the recursive kernels: :func:`naive_gauss` and
:func:`naive_mm` are plain loops over Python integers so they can check the
fast code independently. :func:`gauss_jordan` is the slice-recursive
Gauss-Jordan elimination, kept for its operation count and its use of
temporaries. :func:`random_rank_matrix` draws matrices of prescribed rank from
a fixed 64-bit generator so every port can reproduce the same inputs.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, RankOutOfRange
from .field import OpCounter, PrimeField, matmul_mod
from .kernels import mm
from .matrix import Mat, Perm, perm_apply_cols


# ---------------------------------------------------------------------------
# Naive elimination


def naive_gauss(A):
    """Column elimination with first-nonzero pivoting.

    Returns ``(r, rrp, E, R)`` where ``E`` is a column echelon form of ``A``
    and ``R`` its reduced column echelon form, both as nested lists.
    """
    if isinstance(A, Mat):
        p, rows = A.p, A.data.tolist()
    else:
        p, rows = A
        rows = [list(map(int, row)) for row in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    E = [[x % p for x in row] for row in rows]
    rrp = []
    c = 0
    for i in range(m):
        if c == n:
            break
        j = next((j for j in range(c, n) if E[i][j]), None)
        if j is None:
            continue
        for row in E:
            row[c], row[j] = row[j], row[c]
        inv = pow(E[i][c], p - 2, p) if p > 2 else 1
        for jj in range(c + 1, n):
            f = E[i][jj] * inv % p
            if f:
                for row in E:
                    row[jj] = (row[jj] - f * row[c]) % p
        rrp.append(i)
        c += 1
    r = len(rrp)
    R = [row[:] for row in E]
    for j, i in enumerate(rrp):
        inv = pow(R[i][j], p - 2, p)
        for row in R:
            row[j] = row[j] * inv % p
        for jj in range(r):
            if jj != j and R[i][jj]:
                f = R[i][jj]
                for row in R:
                    row[jj] = (row[jj] - f * row[j]) % p
    return r, rrp, E, R


def naive_mm(A: Mat, B: Mat) -> Mat:
    """Schoolbook product over exact integers."""
    if A.n != B.m:
        raise DimensionMismatch(f"naive_mm: {A.m}x{A.n} times {B.m}x{B.n}")
    p = A.p
    a = A.data.tolist()
    bt = B.data.T.tolist()
    out = [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a]
    return Mat(A.field, np.array(out, dtype=np.int64).reshape(A.m, B.n))


def naive_det(A: Mat) -> int:
    """Cofactor expansion along the first row; for tiny matrices only."""
    p = A.p
    rows = A.data.tolist()

    def det(M):
        if not M:
            return 1
        total = 0
        for j, x in enumerate(M[0]):
            if x:
                minor = [row[:j] + row[j + 1:] for row in M[1:]]
                total += (-1) ** j * x * det(minor)
        return total

    return det(rows) % p


# ---------------------------------------------------------------------------
# Slice-recursive Gauss-Jordan


def gauss_jordan(A: Mat, k: int = 0, s: int = 0, w: int | None = None,
                 ctr: OpCounter | None = None):
    """Reduce the column slice ``A[s:, k:k+w]`` to reduced row echelon form.

    Returns ``(r, P, Q)``: ``P`` (order m) is the row permutation applied to
    all of ``A`` and ``Q.sigma[j]`` is the original slice column now stored
    at slice column ``j``, pivot columns first. Afterwards ``A[:, k:k+r]``
    holds columns ``s..s+r-1`` of an m x m transform ``T`` (identity
    elsewhere), ``A[:, k+r:k+w]`` holds ``[F; G; 0]`` with ``G`` in rows
    ``s..s+r-1``, and ``T P A0[:, k + Q.sigma] = [[0, F], [I_r, G], [0, 0]]``.

    The two in-slice products that read and write the same block copy one
    operand into a temporary; :meth:`OpCounter.scratch` records those.
    """
    ctr = OpCounter() if ctr is None else ctr
    m, n = A.shape
    if w is None:
        w = n - k
    if not (0 <= k and k + w <= n and 0 <= s <= m and w >= 1):
        raise DimensionMismatch(f"gauss_jordan: bad slice k={k}, s={s}, w={w} on {m}x{n}")
    r, sigma, P = _gj(A, k, s, w, ctr)
    return r, P, Perm(sigma)


def _gj(A: Mat, k, s, w, ctr):
    a = A.data
    m = A.m
    p = A.p
    if w == 1:
        col = a[s:, k]
        nz = np.flatnonzero(col)
        ctr.n_ztest += int(nz[0]) + 1 if nz.size else col.size
        if nz.size == 0:
            return 0, [0], Perm.identity(m)
        j = s + int(nz[0])
        if j != s:
            a[[s, j]] = a[[j, s]]
        # store the transform column: [-a_top/piv; 1/piv; -a_bot/piv]
        inv = A.field.inv(int(a[s, k]), ctr)
        ninv = (-inv) % p
        ctr.n_addsub += 1
        ctr.n_mul += m - 1
        a[:, k] = a[:, k] * ninv % p
        a[s, k] = inv
        return 1, [0], Perm.transposition(s, j, m)

    h = w // 2
    r1, sig1, P1 = _gj(A, k, s, h, ctr)
    t, g = s + r1, k + h
    hi = k + w
    if r1:
        # Y1 <- Y1 + X1 Y2
        mm(A.view(0, s, k, k + r1), A.view(s, t, g, hi), A.view(0, s, g, hi), 1, 1, ctr)
        # Y3 <- Y3 + X3 Y2, before Y2 is overwritten
        mm(A.view(t, m, k, k + r1), A.view(s, t, g, hi), A.view(t, m, g, hi), 1, 1, ctr)
        temp = ctr.scratch((r1, hi - g))
        temp[...] = a[s:t, g:hi]
        # Y2 <- X2 Y2
        mm(A.view(s, t, k, k + r1), Mat(A.field, temp), A.view(s, t, g, hi), 1, 0, ctr)
    r2, sig2, P2 = _gj(A, g, t, w - h, ctr)
    if r2 and r1:
        # [X1; X2] <- [X1; X2] + [Z1; Z2] X3'
        mm(A.view(0, t, g, g + r2), A.view(t, t + r2, k, k + r1), A.view(0, t, k, k + r1), 1, 1, ctr)
        # X4' <- X4' + Z4 X3', before X3' is overwritten
        mm(A.view(t + r2, m, g, g + r2), A.view(t, t + r2, k, k + r1),
           A.view(t + r2, m, k, k + r1), 1, 1, ctr)
        temp = ctr.scratch((r2, r1))
        temp[...] = a[t:t + r2, k:k + r1]
        # X3' <- Z3 X3'
        mm(A.view(t, t + r2, g, g + r2), Mat(A.field, temp), A.view(t, t + r2, k, k + r1), 1, 0, ctr)
    if r2 and h > r1:
        # storage [X | E | Z | F] -> [X | Z | E | F]: keep the transform columns contiguous
        e = h - r1
        perm_apply_cols(A.view(0, m, k + r1, g + r2), Perm(list(range(e, e + r2)) + list(range(e))))
    sig2 = [h + c for c in sig2]
    sigma = sig1[:r1] + sig2[:r2] + sig1[r1:] + sig2[r2:]
    return r1 + r2, sigma, P2.compose(P1)


def gauss_jordan_transform(A: Mat, r: int, s: int = 0, k: int = 0) -> np.ndarray:
    """The m x m transform ``T`` held in ``A[:, k:k+r]`` after :func:`gauss_jordan`."""
    T = np.eye(A.m, dtype=np.int64)
    T[:, s:s + r] = A.data[:, k:k + r]
    return T


# ---------------------------------------------------------------------------
# Seeded rank-controlled matrices


class SplitMix64:
    """The splitmix64 generator: add ``0x9E3779B97F4A7C15``, then mix with
    multipliers ``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB`` and shifts
    30, 27, 31."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def choose(self, n: int, k: int) -> list:
        """Sorted ``k``-subset of ``range(n)`` by a partial Fisher-Yates shuffle."""
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])

    def elements(self, shape, p: int) -> np.ndarray:
        count = int(np.prod(shape))
        return np.array([self.below(p) for _ in range(count)], dtype=np.int64).reshape(shape)


def random_rank_matrix(m: int, n: int, r: int, seed: int, field, generic: bool = False) -> Mat:
    """``m x n`` matrix of rank exactly ``r`` as ``B C``.

    ``B`` (m x r) holds ``I_r`` on ``r`` seeded rows with random entries below
    each identity one; ``C`` (r x n) holds ``I_r`` on ``r`` seeded columns and
    random entries elsewhere. With ``generic=True`` the identity rows and
    columns are the leading ones, so the leading ``r x r`` minor is ``I_r``.
    """
    F = field if isinstance(field, PrimeField) else PrimeField(field)
    if not (0 <= r <= min(m, n)):
        raise RankOutOfRange(f"rank {r} outside [0, {min(m, n)}] for {m}x{n}")
    rng = SplitMix64(seed)
    p = F.p
    if generic:
        rows, cols = list(range(r)), list(range(r))
    else:
        rows, cols = rng.choose(m, r), rng.choose(n, r)
    B = np.zeros((m, r), dtype=np.int64)
    chosen = np.zeros(m, dtype=bool)
    chosen[rows] = True
    for j, i in enumerate(rows):
        B[i, j] = 1
        below = [x for x in range(i + 1, m) if not chosen[x]]
        if below:
            B[below, j] = rng.elements((len(below),), p)
    C = rng.elements((r, n), p)
    C[:, cols] = np.eye(r, dtype=np.int64)
    if r == 0:
        return Mat(F, np.zeros((m, n), dtype=np.int64))
    return Mat(F, matmul_mod(B, C, p))


def random_matrix(m: int, n: int, seed: int, field) -> Mat:
    """Uniform ``m x n`` matrix from the same generator."""
    F = field if isinstance(field, PrimeField) else PrimeField(field)
    return Mat(F, SplitMix64(seed).elements((m, n), F.p))
