"""Self-verification suite behind ``ranklab selftest``.

Sweeps run from the smallest shapes upward, so the first failure reported is
also a smallest one. Each failure carries the offending matrix and the CLI
command that reproduces it.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .bench import DEFAULT_TOLERANCE, run_bench
from .echelon import BUNDLE_KINDS, col_ech_trans, convert, in_place_mm, red_col_ech_trans
from .factor import cup, expand_cup, expand_ple, ple
from .field import OpCounter, PrimeField
from .kernels import Left, NonUnit, Upper, trmm, trsm
from .matrix import Mat
from .reference import naive_gauss, random_matrix, random_rank_matrix
from .tri import PackedTriPair, UpperOwnsDiag, trlum, trtri, trulm

EXHAUSTIVE_LIMIT = 4096   # enumerate a shape only if p**(m*n) stays below this
SAMPLES_PER_SHAPE = 200
ALLOC_BOUND = 64


@dataclass
class Failure:
    check: str
    detail: str
    matrix: Mat | None = None
    repro: str = ""


@dataclass
class Outcome:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _mul(p, *arrays):
    out = arrays[0].astype(object)
    for a in arrays[1:]:
        out = out.dot(a.astype(object)) % p
    return (out % p).astype(np.int64)


def check_matrix(A: Mat, *, literal_swap_range: bool = False) -> list:
    """All factorization and echelon identities for one input; returns failure notes."""
    p = A.p
    m, n = A.shape
    A0 = A.data.copy()
    r, rrp, _, R = naive_gauss(A)
    notes = []

    def factor_stage():
        pc = cup(A.copy())
        if (pc.r, list(pc.rrp)) != (r, rrp):
            notes.append(f"cup rank/profile {(pc.r, pc.rrp)} != {(r, rrp)}")
        C, U, P = expand_cup(pc)
        if not np.array_equal(_mul(p, C.data, U.data, P.matrix()), A0):
            notes.append("C U P != A")
        for kind in BUNDLE_KINDS:
            lhs = A0 if kind in ("LSP", "LQUP") else _mul(p, A0, pc.P.matrix().T)
            if not np.array_equal(convert(pc, kind).reconstruct(), lhs):
                notes.append(f"{kind} bundle does not reconstruct")
        Pm, L, E = expand_ple(ple(A.copy()))
        if not np.array_equal(_mul(p, Pm.matrix(), L.data, E.data), A0):
            notes.append("P L E != A")

    def echelon_stage():
        et = col_ech_trans(A.copy())
        Ce, X = et.expand()
        if not np.array_equal(_mul(p, A0, et.P.matrix().T, X.data), Ce.data):
            notes.append("A P^T X != C")

    def reduced_stage():
        rt = red_col_ech_trans(A.copy(), literal_swap_range=literal_swap_range)
        Rr, Xr = rt.expand()
        if any(Rr.data[i, j] != 1 for j, i in enumerate(rt.rrp)):
            notes.append("reduced pivot != 1")
        if not np.array_equal(Rr.data, np.array(R, dtype=np.int64).reshape(m, n)):
            notes.append("R differs from the naive reduced form")
        if not np.array_equal(_mul(p, A0, rt.P.matrix().T, Xr.data), Rr.data):
            notes.append("A P^T X != R")

    for label, stage in (("factor", factor_stage), ("echelon", echelon_stage),
                         ("reduced pivot", reduced_stage)):
        try:
            stage()
        except Exception as exc:  # noqa: BLE001 - any crash is a verification failure
            notes.append(f"{label} check raised {type(exc).__name__}: {exc}")
    return notes


def _repro(notes) -> str:
    if any("reduced" in x or "!= R" in x for x in notes):
        return "echelon --reduced"
    return "factor --algo cup --expand"


def _shapes(max_dim):
    return sorted(itertools.product(range(1, max_dim + 1), repeat=2), key=lambda s: (s[0] * s[1], s))


def sweep(fields, max_dim, seed, *, literal_swap_range=False) -> Outcome:
    """Every small matrix where affordable, seeded samples otherwise."""
    out = Outcome("small-field sweep")
    rnd = random.Random(seed)
    for p in fields:
        F = PrimeField(p)
        for m, n in _shapes(max_dim):
            if p ** (m * n) <= EXHAUSTIVE_LIMIT:
                cases = (np.array(v, dtype=np.int64).reshape(m, n)
                         for v in itertools.product(range(p), repeat=m * n))
            else:
                cases = (np.array([rnd.randrange(p) for _ in range(m * n)], dtype=np.int64).reshape(m, n)
                         for _ in range(SAMPLES_PER_SHAPE))
            for a in cases:
                out.cases += 1
                A = Mat(F, a)
                notes = check_matrix(A, literal_swap_range=literal_swap_range)
                if notes:
                    out.failures.append(Failure(out.name, "; ".join(notes), A, _repro(notes)))
                    return out
    return out


def reconstruction(fields, trials, seed, max_dim=16) -> Outcome:
    out = Outcome("random reconstruction")
    rnd = random.Random(seed)
    for _ in range(trials):
        p = rnd.choice(list(fields) + [65521])
        m, n = rnd.randint(1, max_dim), rnd.randint(1, max_dim)
        r = rnd.randint(0, min(m, n))
        A = random_rank_matrix(m, n, r, rnd.getrandbits(32), PrimeField(p))
        out.cases += 1
        notes = check_matrix(A)
        if notes:
            out.failures.append(Failure(out.name, "; ".join(notes), A, _repro(notes)))
            return out
    return out


def _alloc_runs(n, F, seed):
    A = random_rank_matrix(n, n, n, seed, F)

    def fresh_tri():
        T = random_matrix(n, n, seed + 1, F)
        T.data[np.arange(n), np.arange(n)] = 1
        return T

    return {
        "cup": lambda c: cup(A.copy(), c),
        "ple": lambda c: ple(A.copy(), c),
        "col_ech_trans": lambda c: col_ech_trans(A.copy(), c),
        "red_col_ech_trans": lambda c: red_col_ech_trans(A.copy(), c),
        "trsm": lambda c: trsm(Left, Upper, NonUnit, fresh_tri(), random_matrix(n, n, seed, F), c),
        "trmm": lambda c: trmm(Left, Upper, NonUnit, fresh_tri(), random_matrix(n, n, seed, F), c),
        "trtri": lambda c: trtri(Upper, NonUnit, fresh_tri(), c),
        "trulm": lambda c: trulm(PackedTriPair(fresh_tri(), UpperOwnsDiag), c),
        "trlum": lambda c: trlum(PackedTriPair(fresh_tri(), UpperOwnsDiag), c),
        "in_place_mm": lambda c: in_place_mm(A.copy(), random_matrix(n, n, seed, F), c),
    }


def allocation_audit(sizes=(16, 64), seed=1) -> Outcome:
    out = Outcome("in-place allocation audit")
    F = PrimeField(65521)
    for n in sizes:
        for name, run in _alloc_runs(n, F, seed).items():
            ctr = OpCounter()
            run(ctr)
            out.cases += 1
            if ctr.n_alloc > ALLOC_BOUND:
                out.failures.append(Failure(out.name, f"{name} n={n} allocated {ctr.n_alloc} elements"))
    return out


CONSTANT_ALGOS = ("mm", "trsm", "trtri", "trulm", "trlum", "cup", "colech", "redcolech", "gaussjordan")


def constants(n=256, seed=1, tol=None) -> Outcome:
    out = Outcome("leading constants")
    tol = DEFAULT_TOLERANCE["constant"] if tol is None else tol
    for algo in CONSTANT_ALGOS:
        rep = run_bench(algo, n, n, n, 65521, seed, timing=False)
        out.cases += 1
        if not rep.within(tol):
            out.failures.append(Failure(out.name, f"{algo}: ratio {rep.ratio:.4f} outside ±{tol:.0%}",
                                        repro=f"bench --algo {algo} --n {n} --seed {seed}"))
    return out


def run_all(fields=(2, 3), max_dim=3, seed=1, *, const_n=256, trials=200,
            literal_swap_range=False) -> list:
    return [
        sweep(fields, max_dim, seed, literal_swap_range=literal_swap_range),
        reconstruction(fields, trials, seed),
        allocation_audit(seed=seed),
        constants(const_n, seed),
    ]
