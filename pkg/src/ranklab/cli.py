"""Command-line interface: ``ranklab {factor,echelon,solve,inverse,bench,selftest}``.

Exit codes: 0 success, 1 usage/IO/singular input, 2 self-test verification
failure, 3 inconsistent linear system. ``RANKLAB_SEED`` sets the default seed.

Result files start with ``key value`` header lines followed by one or more
named matrices, each introduced by ``matrix NAME`` and written in the plain
matrix text format (``m n p`` then ``m`` rows).
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile

from . import selftest as st
from .bench import ALGOS, DEFAULT_TOLERANCE, RANK_SENSITIVE, run_bench
from .echelon import col_ech_trans, red_col_ech_trans
from .errors import DimensionMismatch, MatrixParseError, RanklabError, SingularMatrix
from .factor import cup, expand_cup, expand_ple, ple
from .field import OpCounter
from .matrix import Mat, format_matrix, read_matrix
from .solvers import inverse, solve

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INCONSISTENT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


class _Fail(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _default_seed() -> int:
    env = os.environ.get("RANKLAB_SEED")
    if env is None:
        return 1
    try:
        return int(env)
    except ValueError:
        raise _Fail(f"RANKLAB_SEED must be an integer, got {env!r}") from None


def _load(path) -> Mat:
    try:
        return read_matrix(path)
    except MatrixParseError as exc:
        raise _Fail(f"{path}: {exc}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise _Fail(f"{path}: {exc}") from None


def _emit(text: str, out_path) -> None:
    if out_path:
        try:
            with open(out_path, "w", encoding="ascii", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise _Fail(f"{out_path}: {exc}") from None
    else:
        sys.stdout.write(text)


def _section(name: str, A: Mat) -> str:
    return f"matrix {name}\n{format_matrix(A)}"


def _ops_line(ctr: OpCounter) -> str:
    return (f"ops mul={ctr.n_mul} addsub={ctr.n_addsub} divinv={ctr.n_divinv} "
            f"ztest={ctr.n_ztest} arith={ctr.arith_total}\n")


def _header(key, values) -> str:
    return " ".join([key] + [str(int(v)) for v in values]) + "\n"


# ---------------------------------------------------------------------------


def cmd_factor(args) -> int:
    A = _load(args.inp)
    ctr = OpCounter()
    if args.algo == "cup":
        res = cup(A, ctr)
        profile_key, profile = "row_profile", res.rrp
    else:
        res = ple(A, ctr)
        profile_key, profile = "col_profile", res.crp
    text = [f"algo {args.algo}\n", f"rank {res.r}\n",
            _header(profile_key, profile), _header("perm", res.P.sigma)]
    if args.expand:
        if args.algo == "cup":
            C, U, _ = expand_cup(res)
            text += [_section("C", C), _section("U", U)]
        else:
            _, L, E = expand_ple(res)
            text += [_section("L", L), _section("E", E)]
    else:
        text.append(_section("packed", res.body))
    _emit("".join(text), args.out)
    if args.count_ops:
        sys.stdout.write(_ops_line(ctr))
    return EXIT_OK


def cmd_echelon(args) -> int:
    A = _load(args.inp)
    if args.reduced:
        res = red_col_ech_trans(A, literal_swap_range=args.mutate_swap_range)
        R, X = res.expand()
        names = ("R", "X")
    else:
        res = col_ech_trans(A)
        R, X = res.expand()
        names = ("C", "X")
    text = [f"rank {res.r}\n", _header("row_profile", res.rrp), _header("perm", res.P.sigma),
            _section(names[0], R), _section(names[1], X)]
    _emit("".join(text), args.out)
    return EXIT_OK


def cmd_inverse(args) -> int:
    A = _load(args.inp)
    try:
        inv = inverse(A)
    except DimensionMismatch as exc:
        raise _Fail(str(exc)) from None
    except SingularMatrix:
        sys.stdout.write("SINGULAR\n")
        return EXIT_USAGE
    _emit(format_matrix(inv), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    A = _load(args.inp)
    b = _load(args.rhs)
    if b.p != A.p:
        raise _Fail(f"field mismatch: matrix over GF({A.p}), right-hand side over GF({b.p})")
    try:
        res = solve(A, b, with_nullspace=args.nullspace)
    except DimensionMismatch as exc:
        raise _Fail(str(exc)) from None
    if not res.consistent:
        sys.stdout.write(f"INCONSISTENT\nwitness_row {res.witness}\n")
        return EXIT_INCONSISTENT
    text = format_matrix(res.x)
    if args.nullspace:
        text = f"rank {res.rank}\n" + _section("x", res.x) + _section("nullspace", res.nullspace)
    _emit(text, args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    n = args.n
    m = n if args.m is None else args.m
    r = min(m, n) if args.r is None else args.r
    if args.algo in RANK_SENSITIVE and not 0 <= r <= min(m, n):
        raise _Fail(f"--r must lie in [0, {min(m, n)}]")
    if args.algo not in RANK_SENSITIVE:
        m = r = n
    tol = args.tol
    if tol is None:
        tol = DEFAULT_TOLERANCE["rank" if args.algo in RANK_SENSITIVE else "constant"]
    fmt = "json" if args.json else args.format
    try:
        for t in range(args.trials):
            rep = run_bench(args.algo, m, n, r, args.field, seed + t, profile=args.profile,
                            timing=not args.no_timing)
            if fmt == "json":
                sys.stdout.write(rep.to_json() + "\n")
            elif fmt == "kv":
                sys.stdout.write(rep.to_kv() + "\n")
            else:
                verdict = "yes" if rep.within(tol) else "no"
                sys.stdout.write(
                    f"{rep.algo}: m={rep.m} n={rep.n} r={rep.r} p={rep.p} seed={rep.seed}\n"
                    f"  ops_arith  {rep.ops_arith}  (zero tests {rep.ops_ztest})\n"
                    f"  predicted  {rep.predicted:.4f}\n"
                    f"  ratio      {rep.ratio:.4f}  within ±{tol:.0%}: {verdict}\n"
                    f"  wall_ms    {rep.wall_ms:.3f}\n")
    except (ValueError, RanklabError) as exc:
        raise _Fail(str(exc)) from None
    return EXIT_OK


def cmd_selftest(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    try:
        fields = tuple(int(x) for x in args.fields.split(","))
    except ValueError:
        raise _Fail(f"--fields must be a comma-separated list of primes, got {args.fields!r}") from None
    try:
        outcomes = st.run_all(fields, args.max_dim, seed, const_n=args.const_n,
                              trials=args.trials, literal_swap_range=args.mutate_swap_range)
    except RanklabError as exc:
        raise _Fail(str(exc)) from None
    failed = False
    for o in outcomes:
        sys.stdout.write(f"{'PASS' if o.ok else 'FAIL'} {o.name} ({o.cases} cases)\n")
        for f in o.failures:
            failed = True
            sys.stdout.write(f"  {f.detail}\n")
            if f.matrix is not None:
                path = os.path.join(args.dump_dir or tempfile.gettempdir(),
                                    f"ranklab-counterexample-{seed}.mat")
                with open(path, "w", encoding="ascii", newline="\n") as fh:
                    fh.write(format_matrix(f.matrix))
                sys.stdout.write("  counterexample:\n")
                for line in format_matrix(f.matrix).splitlines():
                    sys.stdout.write(f"    {line}\n")
                sys.stdout.write(f"  written to {path}\n")
                mutate = " --mutate-swap-range" if args.mutate_swap_range and f.repro.startswith("echelon") else ""
                sys.stdout.write(f"  repro: python3 -m ranklab {f.repro} --in {path}{mutate}\n")
            elif f.repro:
                sys.stdout.write(f"  repro: python3 -m ranklab {f.repro}\n")
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ranklab", description="Rank-profile revealing elimination over GF(p).")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    f = sub.add_parser("factor", help="CUP or PLE decomposition of a matrix file")
    f.add_argument("--in", dest="inp", required=True)
    f.add_argument("--algo", choices=("cup", "ple"), default="cup")
    f.add_argument("--expand", action="store_true", help="write explicit factors instead of the packed body")
    f.add_argument("--count-ops", action="store_true")
    f.add_argument("--out")
    f.set_defaults(func=cmd_factor)

    e = sub.add_parser("echelon", help="column echelon (or reduced) transform")
    e.add_argument("--in", dest="inp", required=True)
    e.add_argument("--reduced", action="store_true")
    e.add_argument("--out")
    e.add_argument("--mutate-swap-range", action="store_true", help=argparse.SUPPRESS)
    e.set_defaults(func=cmd_echelon)

    s = sub.add_parser("solve", help="solve A x = b")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--nullspace", action="store_true", help="also write a nullspace basis")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    i = sub.add_parser("inverse", help="inverse of a square matrix")
    i.add_argument("--in", dest="inp", required=True)
    i.add_argument("--out")
    i.set_defaults(func=cmd_inverse)

    b = sub.add_parser("bench", help="count field operations and compare with the cost model")
    b.add_argument("--algo", choices=ALGOS, required=True)
    b.add_argument("--m", type=int)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--r", type=int)
    b.add_argument("--field", type=int, default=65521)
    b.add_argument("--seed", type=int)
    b.add_argument("--trials", type=int, default=1)
    b.add_argument("--profile", choices=("generic", "random"), default="generic",
                   help="where the independent rows of the rank-r input sit")
    b.add_argument("--tol", type=float, help="relative tolerance for the within-model verdict")
    b.add_argument("--format", choices=("human", "kv", "json"), default="human")
    b.add_argument("--json", action="store_true", help="same as --format json")
    b.add_argument("--no-timing", action="store_true", help="report wall_ms=0 for byte-identical output")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("selftest", help="run the verification suites")
    t.add_argument("--max-dim", type=int, default=3)
    t.add_argument("--fields", default="2,3")
    t.add_argument("--seed", type=int)
    t.add_argument("--trials", type=int, default=200)
    t.add_argument("--const-n", type=int, default=256)
    t.add_argument("--dump-dir")
    t.add_argument("--mutate-swap-range", action="store_true", help=argparse.SUPPRESS)
    t.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Fail as exc:
        sys.stderr.write(f"ranklab: {exc}\n")
        return exc.code
    except RanklabError as exc:
        sys.stderr.write(f"ranklab: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
