"""Triangular inversion and products of packed triangular pairs.

A packed pair stores a lower factor ``L`` below the diagonal and an upper
factor ``U`` above it in one square block. The diagonal belongs to exactly
one of them (``diag_owner``); the other factor has an implicit unit diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, SingularDiagonal
from .field import OpCounter, neg_mod
from .kernels import Diag, Left, Lower, NonUnit, Right, Unit, Upper, Uplo, mm, trmm, trsm
from .matrix import Mat


class DiagOwner(str, Enum):
    UPPER = "UpperOwnsDiag"
    LOWER = "LowerOwnsDiag"


UpperOwnsDiag = DiagOwner.UPPER
LowerOwnsDiag = DiagOwner.LOWER


@dataclass
class PackedTriPair:
    body: Mat
    diag_owner: DiagOwner = UpperOwnsDiag

    def __post_init__(self):
        if self.body.m != self.body.n:
            raise DimensionMismatch("packed triangular pair must be square")
        self.diag_owner = DiagOwner(self.diag_owner)

    def unpack(self):
        """Return explicit ``(L, U)`` as fresh int64 arrays."""
        a = self.body.data
        k = a.shape[0]
        L = np.tril(a, -1)
        U = np.triu(a, 1)
        d = np.diagonal(a).copy()
        if self.diag_owner is UpperOwnsDiag:
            U[np.arange(k), np.arange(k)] = d
            L[np.arange(k), np.arange(k)] = 1
        else:
            L[np.arange(k), np.arange(k)] = d
            U[np.arange(k), np.arange(k)] = 1
        return L, U


def _counter(ctr):
    return OpCounter() if ctr is None else ctr


def trtri(uplo, diag, T: Mat, ctr: OpCounter | None = None, threshold: int = 1) -> None:
    """``T <- T^-1`` for triangular ``T``; with ``Unit`` only the strict triangle is touched."""
    uplo, diag = Uplo(uplo), Diag(diag)
    ctr = _counter(ctr)
    if T.m != T.n:
        raise DimensionMismatch(f"trtri needs a square block, got {T.m}x{T.n}")
    if diag is NonUnit and T.m and np.any(np.diagonal(T.data) == 0):
        raise SingularDiagonal("zero diagonal entry in NonUnit triangular inverse")
    _trtri(uplo is Upper, diag, T, ctr, threshold)


def _trtri(upper, diag, T, ctr, thr):
    n = T.m
    if n == 0:
        return
    p = T.p
    if n == 1:
        if diag is NonUnit:
            T.data[0, 0] = T.field.inv(int(T.data[0, 0]), ctr)
        return
    k = n // 2
    T1 = T.view(0, k, 0, k)
    T2 = T.view(k, n, k, n)
    if upper:
        V = T.view(0, k, k, n)
        trsm(Right, Upper, diag, T2, V, ctr, thr)   # V <- V U2^-1
        trsm(Left, Upper, diag, T1, V, ctr, thr)    # V <- U1^-1 V
    else:
        V = T.view(k, n, 0, k)
        trsm(Left, Lower, diag, T2, V, ctr, thr)    # W <- L2^-1 W
        trsm(Right, Lower, diag, T1, V, ctr, thr)   # W <- W L1^-1
    v = V.data
    ctr.n_addsub += v.size
    neg_mod(v, p)
    _trtri(upper, diag, T1, ctr, thr)
    _trtri(upper, diag, T2, ctr, thr)


def _diag_modes(owner: DiagOwner):
    # (diag mode of L, diag mode of U)
    return (Unit, NonUnit) if owner is UpperOwnsDiag else (NonUnit, Unit)


def trulm(P: PackedTriPair, ctr: OpCounter | None = None) -> None:
    """Overwrite the packed pair with the full product ``U L``."""
    _trulm(P.body, *_diag_modes(P.diag_owner), _counter(ctr))


def _trulm(A, ldiag, udiag, ctr):
    n = A.m
    if n <= 1:
        return
    k = n // 2
    A11 = A.view(0, k, 0, k)
    A12 = A.view(0, k, k, n)
    A21 = A.view(k, n, 0, k)
    A22 = A.view(k, n, k, n)
    _trulm(A11, ldiag, udiag, ctr)              # X1 <- U1 L1
    mm(A12, A21, A11, 1, 1, ctr)                # X1 <- X1 + U2 L2
    trmm(Right, Lower, ldiag, A22, A12, ctr)    # X2 <- U2 L3
    trmm(Left, Upper, udiag, A22, A21, ctr)     # X3 <- U3 L2
    _trulm(A22, ldiag, udiag, ctr)              # X4 <- U3 L3


def trlum(P: PackedTriPair, ctr: OpCounter | None = None) -> None:
    """Overwrite the packed pair with the full product ``L U``."""
    _trlum(P.body, *_diag_modes(P.diag_owner), _counter(ctr))


def _trlum(A, ldiag, udiag, ctr):
    n = A.m
    if n <= 1:
        return
    k = n // 2
    A11 = A.view(0, k, 0, k)
    A12 = A.view(0, k, k, n)
    A21 = A.view(k, n, 0, k)
    A22 = A.view(k, n, k, n)
    _trlum(A22, ldiag, udiag, ctr)              # X4 <- L3 U3
    mm(A21, A12, A22, 1, 1, ctr)                # X4 <- X4 + L2 U2
    trmm(Left, Lower, ldiag, A11, A12, ctr)     # X2 <- L1 U2
    trmm(Right, Upper, udiag, A11, A21, ctr)    # X3 <- L2 U1
    _trlum(A11, ldiag, udiag, ctr)              # X1 <- L1 U1
