"""Level-3 kernels: MM, TRSM and TRMM over GF(p).

TRSM and TRMM halve the triangular dimension at ``k = n // 2`` and push all
off-diagonal work into :func:`mm`; they touch no storage other than their
operands. ``threshold`` switches to a one-row/column-at-a-time split for
small blocks, which changes only lower-order operation counts.

Operation charges for ``mm`` (m x l times l x n):

* ``m*n*l`` multiplications and ``m*n*(l-1)`` additions for the product,
* ``m*n`` additions to fold in ``beta*C`` when ``beta != 0``,
* ``m*n`` multiplications per scaling by ``alpha`` or ``beta`` outside ``{0, 1, -1}``,
* ``m*n`` negations when ``alpha = -1`` and ``beta = 0``.
"""
from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DimensionMismatch, SingularDiagonal
from .field import OpCounter, neg_mod, matmul_mod
from .matrix import Mat, check_disjoint


class Side(str, Enum):
    LEFT = "Left"
    RIGHT = "Right"


class Uplo(str, Enum):
    UPPER = "Upper"
    LOWER = "Lower"


class Diag(str, Enum):
    UNIT = "Unit"
    NONUNIT = "NonUnit"


Left, Right = Side.LEFT, Side.RIGHT
Upper, Lower = Uplo.UPPER, Uplo.LOWER
Unit, NonUnit = Diag.UNIT, Diag.NONUNIT


def _counter(ctr):
    return OpCounter() if ctr is None else ctr


def mm(A: Mat, B: Mat, C: Mat, alpha: int = 1, beta: int = 0, ctr: OpCounter | None = None) -> None:
    """``C <- alpha*A*B + beta*C`` with ``C`` disjoint from ``A`` and ``B``."""
    ctr = _counter(ctr)
    m, ell = A.shape
    if B.m != ell or C.shape != (m, B.n):
        raise DimensionMismatch(
            f"mm: {A.m}x{A.n} times {B.m}x{B.n} into {C.m}x{C.n}")
    check_disjoint(A, C)
    check_disjoint(B, C)
    n = B.n
    p = C.p
    alpha %= p
    beta %= p
    mn = m * n
    if mn == 0:
        return
    c = C.data
    if alpha == 0 or ell == 0:
        if beta == 0:
            c.fill(0)
        elif beta != 1:
            ctr.n_mul += mn
            np.multiply(c, beta, out=c)
            np.remainder(c, p, out=c)
        return
    prod = matmul_mod(A.data, B.data, p)
    ctr.n_mul += mn * ell
    ctr.n_addsub += mn * (ell - 1)
    if alpha == p - 1:
        if beta == 0:
            ctr.n_addsub += mn
            neg_mod(prod, p)
            c[...] = prod
            return
        if beta != 1:
            ctr.n_mul += mn
            c *= beta
            c %= p
        ctr.n_addsub += mn
        np.subtract(c, prod, out=c)
        np.remainder(c, p, out=c)
        return
    if alpha != 1:
        ctr.n_mul += mn
        prod *= alpha
        prod %= p
    if beta == 0:
        c[...] = prod
        return
    if beta != 1:
        ctr.n_mul += mn
        c *= beta
        c %= p
    ctr.n_addsub += mn
    np.add(c, prod, out=c)
    np.remainder(c, p, out=c)


def _scale(x: np.ndarray, s: int, p: int) -> None:
    np.multiply(x, s, out=x)
    np.remainder(x, p, out=x)


def _norm_flags(side, uplo, diag):
    return Side(side), Uplo(uplo), Diag(diag)


def _split(k: int, threshold: int) -> int:
    return 1 if k <= threshold else k // 2


def trsm(side, uplo, diag, T: Mat, B: Mat, ctr: OpCounter | None = None,
         threshold: int = 1) -> None:
    """Overwrite ``B`` with ``X`` solving ``T X = B`` (Left) or ``X T = B`` (Right).

    With ``diag=Unit`` the stored diagonal of ``T`` is never read.
    """
    side, uplo, diag = _norm_flags(side, uplo, diag)
    ctr = _counter(ctr)
    k = T.m
    if T.n != k:
        raise DimensionMismatch(f"triangular operand must be square, got {T.m}x{T.n}")
    if (B.m if side is Left else B.n) != k:
        raise DimensionMismatch(f"trsm {side.value}: T is {k}x{k}, B is {B.m}x{B.n}")
    check_disjoint(T, B)
    _trsm(side is Left, uplo is Upper, diag is Unit, T, B, ctr, max(1, threshold))


def _trsm(left, upper, unit, T, B, ctr, thr):
    k = T.m
    if k == 0 or B.m == 0 or B.n == 0:
        if not unit and k:
            _check_diag(T)
        return
    p = T.p
    if k == 1:
        if unit:
            return
        t = int(T.data[0, 0])
        if t == 0:
            raise SingularDiagonal("zero diagonal entry in NonUnit triangular solve")
        inv = T.field.inv(t, ctr)
        ctr.n_mul += B.data.size
        _scale(B.data, inv, p)
        return
    h = _split(k, thr)
    T1 = T.view(0, h, 0, h)
    T2 = T.view(h, k, h, k)
    if left:
        B1 = B.view(0, h, 0, B.n)
        B2 = B.view(h, k, 0, B.n)
        if upper:
            # T1 X1 + V X2 = B1, T2 X2 = B2
            _trsm(left, upper, unit, T2, B2, ctr, thr)
            mm(T.view(0, h, h, k), B2, B1, -1, 1, ctr)
            _trsm(left, upper, unit, T1, B1, ctr, thr)
        else:
            # T1 X1 = B1, W X1 + T2 X2 = B2
            _trsm(left, upper, unit, T1, B1, ctr, thr)
            mm(T.view(h, k, 0, h), B1, B2, -1, 1, ctr)
            _trsm(left, upper, unit, T2, B2, ctr, thr)
    else:
        B1 = B.view(0, B.m, 0, h)
        B2 = B.view(0, B.m, h, k)
        if upper:
            # X1 T1 = B1, X1 V + X2 T2 = B2
            _trsm(left, upper, unit, T1, B1, ctr, thr)
            mm(B1, T.view(0, h, h, k), B2, -1, 1, ctr)
            _trsm(left, upper, unit, T2, B2, ctr, thr)
        else:
            # X1 T1 + X2 W = B1, X2 T2 = B2
            _trsm(left, upper, unit, T2, B2, ctr, thr)
            mm(B2, T.view(h, k, 0, h), B1, -1, 1, ctr)
            _trsm(left, upper, unit, T1, B1, ctr, thr)


def _check_diag(T):
    if np.any(np.diagonal(T.data) == 0):
        raise SingularDiagonal("zero diagonal entry in NonUnit triangular solve")


def trmm(side, uplo, diag, T: Mat, B: Mat, ctr: OpCounter | None = None,
         threshold: int = 1) -> None:
    """Overwrite ``B`` with ``T B`` (Left) or ``B T`` (Right) for triangular ``T``."""
    side, uplo, diag = _norm_flags(side, uplo, diag)
    ctr = _counter(ctr)
    k = T.m
    if T.n != k:
        raise DimensionMismatch(f"triangular operand must be square, got {T.m}x{T.n}")
    if (B.m if side is Left else B.n) != k:
        raise DimensionMismatch(f"trmm {side.value}: T is {k}x{k}, B is {B.m}x{B.n}")
    check_disjoint(T, B)
    _trmm(side is Left, uplo is Upper, diag is Unit, T, B, ctr, max(1, threshold))


def _trmm(left, upper, unit, T, B, ctr, thr):
    k = T.m
    if k == 0 or B.m == 0 or B.n == 0:
        return
    if k == 1:
        if not unit:
            ctr.n_mul += B.data.size
            _scale(B.data, int(T.data[0, 0]), T.p)
        return
    h = _split(k, thr)
    T1 = T.view(0, h, 0, h)
    T2 = T.view(h, k, h, k)
    if left:
        B1 = B.view(0, h, 0, B.n)
        B2 = B.view(h, k, 0, B.n)
        if upper:
            # [T1 B1 + V B2; T2 B2]
            _trmm(left, upper, unit, T1, B1, ctr, thr)
            mm(T.view(0, h, h, k), B2, B1, 1, 1, ctr)
            _trmm(left, upper, unit, T2, B2, ctr, thr)
        else:
            # [T1 B1; W B1 + T2 B2]
            _trmm(left, upper, unit, T2, B2, ctr, thr)
            mm(T.view(h, k, 0, h), B1, B2, 1, 1, ctr)
            _trmm(left, upper, unit, T1, B1, ctr, thr)
    else:
        B1 = B.view(0, B.m, 0, h)
        B2 = B.view(0, B.m, h, k)
        if upper:
            # [B1 T1, B1 V + B2 T2]
            _trmm(left, upper, unit, T2, B2, ctr, thr)
            mm(B1, T.view(0, h, h, k), B2, 1, 1, ctr)
            _trmm(left, upper, unit, T1, B1, ctr, thr)
        else:
            # [B1 T1 + B2 W, B2 T2]
            _trmm(left, upper, unit, T1, B1, ctr, thr)
            mm(B2, T.view(h, k, 0, h), B1, 1, 1, ctr)
            _trmm(left, upper, unit, T2, B2, ctr, thr)
