"""
Counting field operations
=========================

Each routine charges its multiplications, additions, inversions and zero
tests to an OpCounter. Comparing the totals with the cubic cost models shows
the leading constants and how the work of CUP shrinks with the rank.
"""

from ranklab import OpCounter, PrimeField, cup, random_rank_matrix
from ranklab.bench import cup_model, run_bench

# Square algorithms against K * n^3.
for algo in ("mm", "trsm", "trtri", "cup", "redcolech", "gaussjordan"):
    rep = run_bench(algo, 128, 128, 128, 65521, seed=1, timing=False)
    print(f"{algo:12s} ops/n^3 = {rep.ops_arith / 128 ** 3:.3f}   ratio to model {rep.ratio:.3f}")

# CUP on a 256 x 256 matrix of varying rank. With the first r rows
# independent the count follows 2mnr - (m+n)r^2 + (2/3)r^3 closely.
F = PrimeField(65521)
for r in (8, 32, 128, 256):
    A = random_rank_matrix(256, 256, r, seed=3, field=F, generic=True)
    ctr = OpCounter()
    cup(A, ctr)
    print(f"r = {r:3d}: arith {ctr.arith_total:>10d}   model {cup_model(256, 256, r):>12.0f}"
          f"   zero tests {ctr.n_ztest}")

# The same from the command line:
#   python3 -m ranklab bench --algo cup --m 256 --n 256 --r 32 --no-timing
