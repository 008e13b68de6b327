"""Echelon transforms built on CUP, in-place ``B <- A B``, and decomposition bundles.

After :func:`col_ech_trans` the body holds ``[C\\X]``: ``C`` as in CUP and
``X = U^-1`` (strictly upper part stored, rows ``0..r-1``), with
``A P^T X = C``.

After :func:`red_col_ech_trans` the body holds ``[[X1, X2], [R2, 0]]`` with
rows in the compressed order ``Q.T A`` (pivot rows first, see
:meth:`ReducedEchelonTransform.row_order`), so that ``A P^T X = R`` where
``X = [[X1, X2], [0, I]]`` and ``R`` is the reduced column echelon form.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, MalformedPacked, SingularMatrix
from .factor import PackedCup, cup, expand_cup, validate_cup
from .field import OpCounter, neg_mod
from .kernels import Left, Lower, NonUnit, Right, Unit, Upper, trmm, trsm
from .matrix import Mat, Perm, perm_apply_cols, perm_apply_rows, swap_arrays
from .tri import LowerOwnsDiag, PackedTriPair, trlum, trtri, trulm


@dataclass
class EchelonTransform:
    body: Mat
    r: int
    rrp: list
    P: Perm

    def expand(self):
        """Fresh explicit ``(C, X)``: ``C`` m x n echelon, ``X`` n x n unit upper."""
        a = self.body.data
        m, n = a.shape
        r = self.r
        C = np.zeros((m, n), dtype=np.int64)
        for j in range(r):
            C[j:, j] = a[j:, j]
        X = np.eye(n, dtype=np.int64)
        X[:r, :] += np.triu(a[:r, :], 1)
        F = self.body.field
        return Mat(F, C), Mat(F, X)


@dataclass
class ReducedEchelonTransform:
    body: Mat
    r: int
    rrp: list
    P: Perm

    def row_order(self) -> list:
        """``order[t]`` is the original row stored at body row ``t``."""
        order = list(range(self.body.m))
        for j, i in enumerate(self.rrp):
            order[j], order[i] = order[i], order[j]
        return order

    @property
    def Q(self) -> Perm:
        """``Q`` with ``Q.T`` bringing the pivot rows to the top: ``(Q.T A)[t] = A[order[t]]``."""
        return Perm(self.row_order()).inverse()

    def expand(self):
        """Fresh explicit ``(R, X)`` with ``A P^T X = R``."""
        a = self.body.data
        m, n = a.shape
        r = self.r
        X = np.eye(n, dtype=np.int64)
        X[:r, :] = a[:r, :]
        compressed = np.zeros((m, n), dtype=np.int64)
        compressed[:r, :r] = np.eye(r, dtype=np.int64)
        compressed[r:, :r] = a[r:, :r]
        R = np.zeros_like(compressed)
        R[self.row_order()] = compressed
        F = self.body.field
        return Mat(F, R), Mat(F, X)


def _counter(ctr):
    return OpCounter() if ctr is None else ctr


def _negate(block: Mat, ctr: OpCounter) -> None:
    v = block.data
    ctr.n_addsub += v.size
    neg_mod(v, block.p)


def col_ech_trans(A: Mat, ctr: OpCounter | None = None) -> EchelonTransform:
    ctr = _counter(ctr)
    pc = cup(A, ctr)
    _cup_to_colech(pc, ctr)
    return EchelonTransform(A, pc.r, pc.rrp, pc.P)


def _cup_to_colech(pc: PackedCup, ctr: OpCounter) -> None:
    A, r = pc.body, pc.r
    n = A.n
    U1 = A.view(0, r, 0, r)
    top_right = A.view(0, r, r, n)
    trsm(Left, Upper, Unit, U1, top_right, ctr)   # M <- U1^-1 U2
    _negate(top_right, ctr)                        # N <- -M
    trtri(Upper, Unit, U1, ctr)                    # U1 <- U1^-1, C diagonal kept


def red_col_ech_trans(A: Mat, ctr: OpCounter | None = None, *,
                      literal_swap_range: bool = False) -> ReducedEchelonTransform:
    """Transform to reduced column echelon form, in place.

    ``literal_swap_range`` compresses pivot rows over columns ``[0, j)`` instead
    of ``[0, j]``; it exists only so the self-test can show that bound is wrong.
    """
    ctr = _counter(ctr)
    et = col_ech_trans(A, ctr)
    r, rrp = et.r, et.rrp
    m = A.m
    a = A.data
    for j, i in enumerate(rrp):
        if i != j:
            hi = j if literal_swap_range else j + 1
            swap_arrays(a[j, :hi], a[i, :hi])
    L1 = A.view(0, r, 0, r)
    trsm(Right, Lower, NonUnit, L1, A.view(r, m, 0, r), ctr)   # R2 <- L2 L1^-1
    trtri(Lower, NonUnit, L1, ctr)                              # N <- L1^-1
    trulm(PackedTriPair(L1, LowerOwnsDiag), ctr)                # X1 <- T1 N
    return ReducedEchelonTransform(A, r, rrp, et.P)


def in_place_mm(A: Mat, B: Mat, ctr: OpCounter | None = None) -> None:
    """``B <- A B`` for square nonsingular ``A`` without a copy of ``B``; ``A`` is restored."""
    ctr = _counter(ctr)
    n = A.m
    if A.n != n or B.m != n:
        raise DimensionMismatch(f"in_place_mm: A is {A.m}x{A.n}, B is {B.m}x{B.n}")
    pc = cup(A, ctr)
    if pc.r < n:
        _restore(A, pc.P, ctr)
        raise SingularMatrix(f"matrix has rank {pc.r} < {n}")
    perm_apply_rows(B, pc.P)                 # B <- P B
    trmm(Left, Upper, Unit, A, B, ctr)       # B <- U B
    trmm(Left, Lower, NonUnit, A, B, ctr)    # B <- C B
    _restore(A, pc.P, ctr)


def _restore(A: Mat, P: Perm, ctr: OpCounter) -> None:
    trlum(PackedTriPair(A, LowerOwnsDiag), ctr)   # A <- C U
    perm_apply_cols(A, P, inverse=True)           # A <- A P


# ---------------------------------------------------------------------------
# Explicit decomposition bundles derived from a CUP decomposition.

BUNDLE_KINDS = ("LSP", "LQUP", "QLUP", "Turing")


@dataclass
class DecompBundle:
    kind: str
    factors: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.factors[name]

    def reconstruct(self) -> np.ndarray:
        """Left-hand side of the bundle's defining equation, evaluated exactly.

        LSP and LQUP give ``A``; QLUP and Turing give ``A P^T``.
        """
        f = self.factors
        p = _bundle_p(f)
        if self.kind == "LSP":
            return _prod(p, f["L"].data, f["S"].data, f["P"].matrix())
        if self.kind == "LQUP":
            return _prod(p, f["L"].data, f["Q"].matrix(), f["U"].data, f["P"].matrix())
        if self.kind == "QLUP":
            return _prod(p, f["Q"].matrix(), f["L"].data, f["U"].data)
        if self.kind == "Turing":
            return _prod(p, f["R"].data, f["L"].data, f["D"].data, f["U"].data)
        raise ValueError(self.kind)


def _bundle_p(f):
    for v in f.values():
        if isinstance(v, Mat):
            return v.p
    raise MalformedPacked("bundle has no matrices")


def _prod(p, *mats):
    out = mats[0].astype(object)
    for m in mats[1:]:
        out = out.dot(m.astype(object)) % p
    return (out % p).astype(np.int64)


def convert(pc: PackedCup, kind: str, ctr: OpCounter | None = None) -> DecompBundle:
    """Explicit LSP / LQUP / QLUP / Turing factors from a packed CUP result.

    LSP, LQUP and QLUP need only permutation placement and pivot scaling.
    Turing also needs ``R``, which costs one unit-lower triangular solve.
    """
    ctr = _counter(ctr)
    if kind not in BUNDLE_KINDS:
        raise ValueError(f"unknown bundle kind {kind!r}; expected one of {BUNDLE_KINDS}")
    validate_cup(pc)
    F = pc.body.field
    p = F.p
    m, n = pc.body.shape
    r, rrp = pc.r, list(pc.rrp)
    Cm, Um, P = expand_cup(pc)
    C, U = Cm.data, Um.data            # m x r, r x n
    piv = [int(C[i, j]) for j, i in enumerate(rrp)]
    pinv = [F.inv(v, ctr) for v in piv]
    # CD: pivots scaled to one;  DbarUbar: rows of U scaled by pivots
    CD = C.copy()
    DU = U.copy()
    for j in range(r):
        ctr.n_mul += m - rrp[j] - 1 + (n - j - 1) + 1
        CD[:, j] = CD[:, j] * pinv[j] % p
        DU[j, :] = DU[j, :] * piv[j] % p
    # Q.T brings rows rrp to the top, remaining rows keep their order
    rest = [i for i in range(m) if i not in set(rrp)]
    order = rrp + rest
    Q = Perm(order).inverse()

    if kind in ("LSP", "LQUP"):
        Lp = np.eye(m, dtype=np.int64)
        for j, i in enumerate(rrp):
            Lp[:, i] = CD[:, j]
        if kind == "LSP":
            S = np.zeros((m, n), dtype=np.int64)
            S[rrp, :] = DU
            return DecompBundle("LSP", {"L": Mat(F, Lp), "S": Mat(F, S), "P": P})
        Up = np.zeros((m, n), dtype=np.int64)
        Up[:r, :] = DU
        return DecompBundle("LQUP", {"L": Mat(F, Lp), "Q": Q, "U": Mat(F, Up), "P": P})
    if kind == "QLUP":
        Lpp = CD[order, :]
        return DecompBundle("QLUP", {"Q": Q, "L": Mat(F, Lpp), "U": Mat(F, DU), "P": P})

    # Turing: A P^T = R Lbar Dbar Ubar
    Lbar = np.eye(n, dtype=np.int64)
    Lbar[:r, :r] = CD[rrp, :]
    R = np.zeros((m, n), dtype=np.int64)
    R[:, :r] = CD
    Rm = Mat(F, R)
    trsm(Right, Lower, Unit, Mat(F, Lbar[:r, :r].copy()), Rm.view(0, m, 0, r), ctr)
    Dbar = np.eye(n, dtype=np.int64)
    Dbar[np.arange(r), np.arange(r)] = piv
    Ubar = np.eye(n, dtype=np.int64)
    Ubar[:r, :] = U
    return DecompBundle("Turing", {"R": Rm, "L": Mat(F, Lbar), "D": Mat(F, Dbar),
                                   "U": Mat(F, Ubar), "P": P})
