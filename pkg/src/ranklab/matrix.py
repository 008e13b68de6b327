"""Dense row-major matrices, rectangular windows, and permutations.

A :class:`Mat` owns an ``m x n`` int64 array. ``A.view(r0, r1, c0, c1)``
returns a :class:`MatView` over the half-open window ``[r0, r1) x [c0, c1)``
that shares storage with ``A``; views of views compose.
"""
from __future__ import annotations

import io
from typing import Iterable

import numpy as np

from .errors import BoundsError, DimensionMismatch, MatrixParseError, OverlapError
from .field import PrimeField


class Mat:
    __slots__ = ("field", "data", "_root", "_r0", "_c0")

    def __init__(self, field: PrimeField, data):
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {arr.shape}")
        if isinstance(field, int):
            field = PrimeField(field)
        self.field = field
        self.data = arr % field.p if arr.size and (arr.min() < 0 or arr.max() >= field.p) else arr
        self._root = self
        self._r0 = 0
        self._c0 = 0

    # constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, field, m, n):
        return cls(field, np.zeros((m, n), dtype=np.int64))

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field, rows):
        rows = list(rows)
        if not rows:
            return cls.zeros(field, 0, 0)
        return cls(field, np.array(rows, dtype=np.int64).reshape(len(rows), -1))

    # shape and access ---------------------------------------------------

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @property
    def p(self) -> int:
        return self.field.p

    def __getitem__(self, ij):
        return int(self.data[ij]) if isinstance(ij, tuple) and all(
            isinstance(k, (int, np.integer)) for k in ij) else self.data[ij]

    def __setitem__(self, ij, value):
        self.data[ij] = np.asarray(value, dtype=np.int64) % self.field.p

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.array_equal(self.data, other.data)))

    def __repr__(self):
        return f"{type(self).__name__}(GF({self.p}), {self.m}x{self.n}, {self.data.tolist()})"

    def tolist(self):
        return self.data.tolist()

    def copy(self) -> "Mat":
        """A fresh owning matrix with the same entries."""
        return Mat(self.field, self.data.copy())

    def transpose(self) -> "Mat":
        return Mat(self.field, np.ascontiguousarray(self.data.T))

    # views --------------------------------------------------------------

    def view(self, r0: int, r1: int, c0: int, c1: int) -> "MatView":
        if not (0 <= r0 <= r1 <= self.m and 0 <= c0 <= c1 <= self.n):
            raise BoundsError(
                f"window [{r0}:{r1}, {c0}:{c1}] outside {self.m}x{self.n} matrix")
        return MatView(self, r0, r1, c0, c1)

    def rect(self):
        """Absolute ``(root, r0, r1, c0, c1)`` of this window."""
        return self._root, self._r0, self._r0 + self.m, self._c0, self._c0 + self.n


class MatView(Mat):
    """Zero-copy rectangular window; writes go through to the base matrix."""

    __slots__ = ("r0", "r1", "c0", "c1")

    def __init__(self, base: Mat, r0: int, r1: int, c0: int, c1: int):
        self.field = base.field
        self.data = base.data[r0:r1, c0:c1]
        self._root = base._root
        self._r0 = base._r0 + r0
        self._c0 = base._c0 + c0
        self.r0, self.r1, self.c0, self.c1 = r0, r1, c0, c1


def view(A: Mat, r0, r1, c0, c1) -> MatView:
    return A.view(r0, r1, c0, c1)


def overlaps(A: Mat, B: Mat) -> bool:
    ra, a0, a1, a2, a3 = A.rect()
    rb, b0, b1, b2, b3 = B.rect()
    if ra is not rb:
        return False
    if a0 == a1 or a2 == a3 or b0 == b1 or b2 == b3:
        return False
    return a0 < b1 and b0 < a1 and a2 < b3 and b2 < a3


def check_disjoint(*mats: Mat) -> None:
    if not __debug__:
        return
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if overlaps(mats[i], mats[j]):
                raise OverlapError("kernel operands overlap")


# ---------------------------------------------------------------------------
# Swaps without scratch storage: x, y <- y, x via x+y, (x+y)-y, (x+y)-x.
# Values stay below 2**32 so int64 never overflows.

def swap_arrays(x: np.ndarray, y: np.ndarray) -> None:
    np.add(x, y, out=x)
    np.subtract(x, y, out=y)
    np.subtract(x, y, out=x)


def swap_rows(a: np.ndarray, i: int, j: int) -> None:
    if i != j:
        swap_arrays(a[i], a[j])


def swap_cols(a: np.ndarray, i: int, j: int) -> None:
    if i != j:
        swap_arrays(a[:, i], a[:, j])


class Perm:
    """One-line permutation ``sigma`` of ``{0..k-1}``.

    Its matrix ``P`` has ``P[i, sigma[i]] = 1``; left-multiplying by ``P``
    makes row ``i`` of the result equal row ``sigma[i]`` of the operand, and
    right-multiplying by ``P.T`` makes column ``j`` equal old column ``sigma[j]``.
    """

    __slots__ = ("sigma",)

    def __init__(self, sigma: Iterable[int], check: bool = True):
        self.sigma = np.asarray(list(sigma) if not isinstance(sigma, np.ndarray) else sigma,
                                dtype=np.int64)
        if check:
            k = len(self.sigma)
            if self.sigma.ndim != 1 or not np.array_equal(
                    np.sort(self.sigma), np.arange(k)):
                raise ValueError(f"not a permutation: {self.sigma.tolist()}")

    @classmethod
    def identity(cls, k: int) -> "Perm":
        return cls(np.arange(k, dtype=np.int64), check=False)

    @classmethod
    def transposition(cls, i: int, j: int, k: int) -> "Perm":
        s = np.arange(k, dtype=np.int64)
        s[i], s[j] = j, i
        return cls(s, check=False)

    @property
    def k(self) -> int:
        return len(self.sigma)

    def __len__(self):
        return len(self.sigma)

    def __eq__(self, other):
        return isinstance(other, Perm) and np.array_equal(self.sigma, other.sigma)

    def __repr__(self):
        return f"Perm({self.sigma.tolist()})"

    def tolist(self):
        return self.sigma.tolist()

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.sigma, np.arange(self.k)))

    def inverse(self) -> "Perm":
        inv = np.empty_like(self.sigma)
        inv[self.sigma] = np.arange(self.k, dtype=np.int64)
        return Perm(inv, check=False)

    def compose(self, other: "Perm") -> "Perm":
        """Permutation whose matrix is ``self.matrix() @ other.matrix()``."""
        if self.k != other.k:
            raise DimensionMismatch(f"cannot compose orders {self.k} and {other.k}")
        return Perm(other.sigma[self.sigma], check=False)

    def embed(self, offset: int, total: int | None = None) -> "Perm":
        """``Diag(I_offset, self, I_rest)`` of order ``total``."""
        total = offset + self.k if total is None else total
        if total < offset + self.k:
            raise DimensionMismatch("embedding does not fit")
        s = np.arange(total, dtype=np.int64)
        s[offset:offset + self.k] = self.sigma + offset
        return Perm(s, check=False)

    def sign(self) -> int:
        seen = np.zeros(self.k, dtype=bool)
        parity = 0
        for start in range(self.k):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = int(self.sigma[j])
                length += 1
            parity ^= (length - 1) & 1
        return -1 if parity else 1

    def matrix(self) -> np.ndarray:
        P = np.zeros((self.k, self.k), dtype=np.int64)
        P[np.arange(self.k), self.sigma] = 1
        return P


def perm_compose(P: Perm, Q: Perm) -> Perm:
    return P.compose(Q)


def perm_sign(P: Perm) -> int:
    return P.sign()


def perm_from_transposition(i: int, j: int, k: int) -> Perm:
    return Perm.transposition(i, j, k)


def _apply_cycles(sigma: np.ndarray, swap) -> None:
    # new[j] = old[sigma[j]] via one pass of swaps along each cycle.
    moved = np.flatnonzero(sigma != np.arange(len(sigma)))
    if moved.size == 0:
        return
    seen = np.zeros(len(sigma), dtype=bool)
    for start in moved.tolist():
        if seen[start]:
            continue
        seen[start] = True
        j = start
        nxt = int(sigma[j])
        while nxt != start:
            swap(j, nxt)
            seen[nxt] = True
            j = nxt
            nxt = int(sigma[j])


def perm_apply_rows(A: Mat, P: Perm, inverse: bool = False) -> None:
    """``A <- P A`` (or ``P.T A`` with ``inverse=True``), in place."""
    if P.k != A.m:
        raise DimensionMismatch(f"permutation of order {P.k} on {A.m} rows")
    if A.n == 0:
        return
    sigma = P.inverse().sigma if inverse else P.sigma
    a = A.data
    _apply_cycles(sigma, lambda i, j: swap_arrays(a[i], a[j]))


def perm_apply_cols(A: Mat, P: Perm, inverse: bool = False) -> None:
    """``A <- A P.T`` (or ``A P`` with ``inverse=True``), in place."""
    if P.k != A.n:
        raise DimensionMismatch(f"permutation of order {P.k} on {A.n} columns")
    if A.m == 0:
        return
    sigma = P.inverse().sigma if inverse else P.sigma
    a = A.data
    _apply_cycles(sigma, lambda i, j: swap_arrays(a[:, i], a[:, j]))


# ---------------------------------------------------------------------------
# Text format: "m n p" then m lines of n space-separated entries in [0, p).

def format_matrix(A: Mat) -> str:
    out = io.StringIO()
    out.write(f"{A.m} {A.n} {A.p}\n")
    for row in A.data.tolist():
        out.write(" ".join(str(v) for v in row))
        out.write("\n")
    return out.getvalue()


def _parse_int(tok: str, line: int, col: int) -> int:
    if not tok or not (tok.isdigit() or (tok[0] == "-" and tok[1:].isdigit())):
        raise MatrixParseError(f"not an integer: {tok!r}", line, col)
    return int(tok)


def parse_matrix_lines(lines: list[str], first_line: int = 1) -> Mat:
    """Parse one matrix from ``lines``; line numbers in errors start at ``first_line``."""
    if not lines:
        raise MatrixParseError("missing header 'm n p'", first_line)
    header = lines[0].rstrip("\n")
    toks = header.split(" ")
    if len(toks) != 3:
        raise MatrixParseError(f"header must be 'm n p', got {header!r}", first_line)
    m, n, p = (_parse_int(t, first_line, k + 1) for k, t in enumerate(toks))
    if m < 0 or n < 0:
        raise MatrixParseError("negative dimension", first_line)
    try:
        field = PrimeField(p)
    except ValueError as exc:
        raise MatrixParseError(str(exc), first_line, 3) from None
    if len(lines) - 1 < m:
        raise MatrixParseError(f"expected {m} rows, found {len(lines) - 1}",
                               first_line + len(lines))
    data = np.zeros((m, n), dtype=np.int64)
    for i in range(m):
        lineno = first_line + 1 + i
        text = lines[1 + i].rstrip("\n")
        toks = text.split(" ") if text else []
        if len(toks) != n:
            raise MatrixParseError(f"expected {n} entries, found {len(toks)}", lineno)
        for j, tok in enumerate(toks):
            v = _parse_int(tok, lineno, j + 1)
            if not 0 <= v < p:
                raise MatrixParseError(f"entry {v} outside [0, {p})", lineno, j + 1)
            data[i, j] = v
    return Mat(field, data)


def parse_matrix(text: str) -> Mat:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    A = parse_matrix_lines(lines)
    if len(lines) > A.m + 1:
        raise MatrixParseError("trailing content after matrix", A.m + 2)
    return A


def read_matrix(path) -> Mat:
    with open(path, "r", encoding="ascii", newline="") as fh:
        return parse_matrix(fh.read())


def write_matrix(path, A: Mat) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_matrix(A))
