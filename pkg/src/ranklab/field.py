"""Word-size prime fields and the field-operation counter.

Elements are plain Python ints (scalars) or int64 numpy arrays (matrix
storage), always holding canonical representatives in ``[0, p)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZero, ModulusOutOfRange, NotPrime

MAX_MODULUS = 2**31

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit integers."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass
class OpCounter:
    """Tally of field operations, threaded explicitly through every kernel.

    ``n_alloc`` is not a field operation: it counts field elements of
    scratch storage requested through :meth:`scratch`, which is how the
    in-place claims are audited.
    """

    n_mul: int = 0
    n_addsub: int = 0
    n_divinv: int = 0
    n_ztest: int = 0
    n_alloc: int = 0

    @property
    def arith_total(self) -> int:
        return self.n_mul + self.n_addsub + self.n_divinv

    @property
    def full_total(self) -> int:
        return self.arith_total + self.n_ztest

    def scratch(self, shape) -> np.ndarray:
        """Allocate zeroed scratch storage for field elements and record its size."""
        buf = np.zeros(shape, dtype=np.int64)
        self.n_alloc += buf.size
        return buf

    def reset(self) -> None:
        self.n_mul = self.n_addsub = self.n_divinv = self.n_ztest = 0
        self.n_alloc = 0

    def snapshot(self) -> dict:
        return {
            "n_mul": self.n_mul,
            "n_addsub": self.n_addsub,
            "n_divinv": self.n_divinv,
            "n_ztest": self.n_ztest,
            "arith_total": self.arith_total,
            "full_total": self.full_total,
        }


def _inv_euclid(a: int, p: int) -> int:
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % p


class PrimeField:
    """GF(p) for a prime ``2 <= p < 2**31``.

    Every scalar operation takes an optional :class:`OpCounter` and charges
    exactly one unit to one bucket: ``neg`` counts as an addition, ``is_zero``
    as a zero test, ``inv`` and ``div`` as one division each.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        p = int(p)
        if not 2 <= p < MAX_MODULUS:
            raise ModulusOutOfRange(f"modulus {p} outside [2, 2**31)")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        self.p = p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __call__(self, value: int) -> int:
        return int(value) % self.p

    def add(self, a, b, ctr=None):
        if ctr is not None:
            ctr.n_addsub += 1
        return (a + b) % self.p

    def sub(self, a, b, ctr=None):
        if ctr is not None:
            ctr.n_addsub += 1
        return (a - b) % self.p

    def neg(self, a, ctr=None):
        if ctr is not None:
            ctr.n_addsub += 1
        return (-a) % self.p

    def mul(self, a, b, ctr=None):
        if ctr is not None:
            ctr.n_mul += 1
        return a * b % self.p

    def inv(self, a, ctr=None):
        a = int(a)
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in GF({self.p})")
        if ctr is not None:
            ctr.n_divinv += 1
        return _inv_euclid(a % self.p, self.p)

    def div(self, a, b, ctr=None):
        b = int(b)
        if b % self.p == 0:
            raise DivisionByZero(f"division by 0 in GF({self.p})")
        if ctr is not None:
            ctr.n_divinv += 1
        return int(a) * _inv_euclid(b % self.p, self.p) % self.p

    def is_zero(self, a, ctr=None) -> bool:
        if ctr is not None:
            ctr.n_ztest += 1
        return a % self.p == 0

    def arith(self, op: str, a, b=None, ctr=None):
        """Dispatch one of ``add sub mul neg inv div is_zero`` by name."""
        if op in ("neg", "inv", "is_zero"):
            return getattr(self, op)(a, ctr)
        if op in ("add", "sub", "mul", "div"):
            if b is None:
                raise TypeError(f"{op} needs two operands")
            return getattr(self, op)(a, b, ctr)
        raise ValueError(f"unknown field operation {op!r}")


def ff_new(p: int) -> PrimeField:
    return PrimeField(p)


def neg_mod(v: np.ndarray, p: int) -> None:
    """``v <- -v mod p`` in place for canonical entries.

    Computed as ``p - v`` because ``np.negative`` with ``out=`` returns wrong
    values on some strided int64 views (numpy 2.2, 64-byte row stride).
    """
    np.subtract(p, v, out=v)
    np.remainder(v, p, out=v)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``(a @ b) mod p`` for canonical int64 operands.

    Uses float64 BLAS when every dot product stays below 2**53, plain int64
    when it stays below 2**63, and otherwise splits ``b`` into 16-bit halves.
    """
    m, ell = a.shape
    n = b.shape[1]
    if ell == 0 or m == 0 or n == 0:
        return np.zeros((m, n), dtype=np.int64)
    bound = ell * (p - 1) ** 2
    if bound < 2**53:
        c = np.matmul(a.astype(np.float64), b.astype(np.float64))
        np.fmod(c, p, out=c)
        return c.astype(np.int64)
    if bound < 2**63:
        c = np.matmul(a, b)
        np.remainder(c, p, out=c)
        return c
    lo = b & 0xFFFF
    hi = b >> 16
    chunk = 2**15
    acc = np.zeros((m, n), dtype=np.int64)
    for s in range(0, ell, chunk):
        part_hi = np.matmul(a[:, s:s + chunk], hi[s:s + chunk]) % p
        part_lo = np.matmul(a[:, s:s + chunk], lo[s:s + chunk]) % p
        acc += (part_hi * 65536 + part_lo) % p
        acc %= p
    return acc
