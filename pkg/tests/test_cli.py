import json
import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import mul
from ranklab import Mat, PrimeField, naive_gauss, parse_matrix, random_matrix, random_rank_matrix, write_matrix
from ranklab.cli import main


def run(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "ranklab", *argv], capture_output=True, text=True,
                          env=env)


def sections(text):
    """Header dict and named matrices from a result file."""
    lines = text.splitlines()
    head, mats, i = {}, {}, 0
    while i < len(lines):
        key, _, rest = lines[i].partition(" ")
        if key == "matrix":
            m = int(lines[i + 1].split()[0])
            mats[rest] = parse_matrix("\n".join(lines[i + 1:i + 2 + m]) + "\n")
            i += 2 + m
        else:
            head[key] = rest
            i += 1
    return head, mats


@pytest.fixture
def mat_file(tmp_path):
    def make(A, name="a.mat"):
        path = tmp_path / name
        write_matrix(path, A)
        return str(path)
    return make


def test_factor_identity(mat_file, capsys):
    assert main(["factor", "--in", mat_file(Mat(PrimeField(7), np.eye(4, dtype=np.int64)))]) == 0
    head, mats = sections(capsys.readouterr().out)
    assert head["rank"] == "4" and head["row_profile"] == "0 1 2 3"
    assert mats["packed"].tolist() == np.eye(4, dtype=int).tolist()


@pytest.mark.parametrize("algo", ["cup", "ple"])
def test_factor_expand_round_trip(mat_file, tmp_path, algo):
    p = 65521
    A = random_rank_matrix(7, 9, 4, 11, PrimeField(p))
    out = tmp_path / "f.txt"
    assert main(["factor", "--in", mat_file(A), "--algo", algo, "--expand", "--out", str(out)]) == 0
    head, mats = sections(out.read_text())
    sigma = [int(x) for x in head["perm"].split()]
    if algo == "cup":
        P = np.zeros((9, 9), dtype=np.int64)
        P[np.arange(9), sigma] = 1
        back = mul(p, mats["C"].data, mats["U"].data, P)
        assert [int(i) for i in head["row_profile"].split()] == naive_gauss(A)[1]
    else:
        P = np.zeros((7, 7), dtype=np.int64)
        P[np.arange(7), sigma] = 1
        back = mul(p, P, mats["L"].data, mats["E"].data)
    assert np.array_equal(back, A.data)


def test_factor_count_ops(mat_file, capsys):
    assert main(["factor", "--in", mat_file(random_matrix(5, 5, 1, PrimeField(7))), "--count-ops"]) == 0
    last = capsys.readouterr().out.strip().splitlines()[-1]
    assert last.startswith("ops mul=")
    vals = dict(kv.split("=") for kv in last.split()[1:])
    assert int(vals["arith"]) == int(vals["mul"]) + int(vals["addsub"]) + int(vals["divinv"])


def test_malformed_header_names_line_1(tmp_path, capsys):
    bad = tmp_path / "bad.mat"
    bad.write_text("2 2\n1 2\n3 4\n")
    assert main(["factor", "--in", str(bad)]) == 1
    assert "line 1" in capsys.readouterr().err


def test_missing_file_and_usage(tmp_path, capsys):
    assert main(["factor", "--in", str(tmp_path / "nope.mat")]) == 1
    assert main(["factor"]) == 1
    assert main(["frobnicate"]) == 1
    assert main(["--help"]) == 0


def test_echelon_reduced_nonsingular_gives_identity(mat_file, capsys):
    A = random_rank_matrix(5, 5, 5, 2, PrimeField(7))
    assert main(["echelon", "--in", mat_file(A), "--reduced"]) == 0
    _, mats = sections(capsys.readouterr().out)
    assert mats["R"].tolist() == np.eye(5, dtype=int).tolist()


def test_echelon_transform(mat_file, capsys):
    p = 7
    A = random_rank_matrix(4, 6, 3, 5, PrimeField(p))
    assert main(["echelon", "--in", mat_file(A)]) == 0
    head, mats = sections(capsys.readouterr().out)
    sigma = [int(x) for x in head["perm"].split()]
    assert np.array_equal(mul(p, A.data[:, sigma], mats["X"].data), mats["C"].data)


def test_inverse(mat_file, capsys):
    assert main(["inverse", "--in", mat_file(Mat(PrimeField(7), [[2, 1], [0, 3]]))]) == 0
    assert parse_matrix(capsys.readouterr().out).tolist() == [[4, 1], [0, 5]]
    assert main(["inverse", "--in", mat_file(Mat(PrimeField(7), [[1, 2], [2, 4]]))]) == 1
    assert capsys.readouterr().out == "SINGULAR\n"


def test_solve_consistent(mat_file, capsys):
    p = 65521
    F = PrimeField(p)
    A = random_rank_matrix(6, 8, 5, 3, F)
    b = Mat(F, mul(p, A.data, random_matrix(8, 1, 4, F).data))
    assert main(["solve", "--in", mat_file(A), "--rhs", mat_file(b, "b.mat")]) == 0
    x = parse_matrix(capsys.readouterr().out)
    assert np.array_equal(mul(p, A.data, x.data), b.data)
    assert main(["solve", "--in", mat_file(A), "--rhs", mat_file(b, "b.mat"), "--nullspace"]) == 0
    head, mats = sections(capsys.readouterr().out)
    assert head["rank"] == "5" and mats["nullspace"].shape == (8, 3)
    assert not np.any(mul(p, A.data, mats["nullspace"].data))


def test_solve_inconsistent_exits_3(mat_file, capsys):
    F = PrimeField(5)
    assert main(["solve", "--in", mat_file(Mat(F, [[2, 4], [1, 2]])), "--rhs", mat_file(Mat(F, [[1], [2]]), "b.mat")]) == 3
    assert capsys.readouterr().out == "INCONSISTENT\nwitness_row 1\n"


def test_solve_field_mismatch(mat_file):
    assert main(["solve", "--in", mat_file(Mat(PrimeField(5), [[1]])),
                 "--rhs", mat_file(Mat(PrimeField(7), [[1]]), "b.mat")]) == 1


def test_bench_is_byte_identical(capsys):
    argv = ["bench", "--algo", "cup", "--m", "40", "--n", "60", "--r", "20", "--seed", "9",
            "--trials", "2", "--no-timing"]
    outs = []
    for fmt in ("human", "kv", "json"):
        assert main(argv + ["--format", fmt]) == 0
        first = capsys.readouterr().out
        assert main(argv + ["--format", fmt]) == 0
        assert capsys.readouterr().out == first
        outs.append(first)
    rows = [json.loads(line) for line in outs[2].splitlines()]
    assert [r["seed"] for r in rows] == [9, 10] and rows[0]["wall_ms"] == 0


def test_bench_seed_from_environment():
    out = run("bench", "--algo", "mm", "--n", "16", "--json", "--no-timing",
              env={**os.environ, "RANKLAB_SEED": "12"})
    assert out.returncode == 0 and json.loads(out.stdout)["seed"] == 12


def test_bench_gaussjordan_constant(capsys):
    assert main(["bench", "--algo", "gaussjordan", "--n", "64", "--format", "kv", "--no-timing"]) == 0
    kv = dict(x.split("=") for x in capsys.readouterr().out.split())
    assert abs(float(kv["ratio"]) - 1) < 0.1


def test_bench_bad_rank():
    assert main(["bench", "--algo", "cup", "--n", "8", "--r", "9"]) == 1


def test_selftest_passes_small(tmp_path):
    out = run("selftest", "--max-dim", "2", "--fields", "2,3", "--trials", "20", "--const-n", "64",
              "--dump-dir", str(tmp_path))
    assert out.returncode == 0, out.stdout
    assert out.stdout.count("PASS") == 4


def test_selftest_mutation_fails_with_counterexample(tmp_path):
    out = run("selftest", "--max-dim", "2", "--fields", "2", "--trials", "5", "--const-n", "32",
              "--seed", "4", "--dump-dir", str(tmp_path), "--mutate-swap-range")
    assert out.returncode == 2
    assert "FAIL small-field sweep" in out.stdout and "reduced pivot" in out.stdout
    dump = tmp_path / "ranklab-counterexample-4.mat"
    assert dump.read_text() == "2 1 2\n0\n1\n"
    repro = [ln for ln in out.stdout.splitlines() if "repro:" in ln][0].split("repro: ")[1].split()
    again = subprocess.run(repro[:1] + repro[1:], capture_output=True, text=True)
    assert again.returncode == 1 and "SingularDiagonal" in again.stderr


def test_selftest_bad_fields():
    assert main(["selftest", "--fields", "2,x"]) == 1
    assert main(["selftest", "--fields", "4", "--max-dim", "1"]) == 1
