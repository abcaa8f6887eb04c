"""Exact arithmetic in GF(p^k) with a reproducible defining polynomial.

Elements are residues modulo the canonical polynomial.  Everywhere an element
must be hashed, ordered or used as an array index it is encoded as the integer
``sum(c_i * p**i)`` of its little-endian coefficient vector.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np
from sympy import isprime

from .config import check_cap


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    """Remainder of ``a`` modulo the monic polynomial ``m`` over Z_p."""
    a = _trim(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a = _trim(a)
    return a


def _monic_polys(p, deg):
    # increasing base-p code sum(c_i p^i): c_0 varies fastest, leading 1 appended
    for high_first in itertools.product(range(p), repeat=deg):
        yield high_first[::-1] + (1,)


def is_irreducible(poly, p) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg <= 1:
        return deg == 1
    for d in range(1, deg // 2 + 1):
        for q in _monic_polys(p, d):
            if not _poly_mod(poly, q, p):
                return False
    return True


def canonical_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k with the smallest base-p code.

    Coefficients are listed constant term first and read as base-p digits
    with the constant term least significant, the same convention as field
    element codes; over GF(2) this picks x^3 + x + 1 for k = 3.
    """
    for poly in _monic_polys(p, k):
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    poly: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def name(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __repr__(self):
        return f"FieldSpec({self.name}, poly={list(self.poly)})"

    # -- integer-encoded arithmetic -------------------------------------
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def encode(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + int(c) % self.p
        return v

    def _mul_slow(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.encode(_poly_mod(prod, self.poly, self.p))

    @cached_property
    def generator(self) -> int:
        """Smallest encoded element of multiplicative order q - 1."""
        n = self.q - 1
        if n == 1:
            return 1
        from sympy import primefactors

        for g in range(2, self.q):
            if all(self._pow_slow(g, n // r) != 1 for r in primefactors(n)):
                return g
        raise AssertionError("no generator")  # pragma: no cover

    def _pow_slow(self, a: int, e: int) -> int:
        r, base = 1, a
        while e:
            if e & 1:
                r = self._mul_slow(r, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return r

    @cached_property
    def _tables(self):
        n = self.q - 1
        exp = np.zeros(n, dtype=np.int64)
        log = np.full(self.q, -1, dtype=np.int64)
        x, g = 1, self.generator
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, g)
        return exp, log

    @cached_property
    def digit_matrix(self) -> np.ndarray:
        """Row ``a`` holds the k base-p digits of element ``a``."""
        a = np.arange(self.q, dtype=np.int64)
        return np.stack([(a // self.p**i) % self.p for i in range(self.k)], axis=1)

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.k, dtype=np.int64)

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        return self.encode(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.encode(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables
        return int(exp[(log[a] + log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.name}")
        exp, log = self._tables
        return int(exp[(-log[a]) % (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError(f"0 has no inverse in {self.name}")
            return 1 if e == 0 else 0
        exp, log = self._tables
        return int(exp[(log[a] * e) % (self.q - 1)])

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        from math import gcd

        _, log = self._tables
        n = self.q - 1
        return n // gcd(int(log[a]), n)

    def frobenius(self, j: int = 1) -> Callable[[int], int]:
        e = self.p**j
        return lambda a: self.pow(a, e)

    def element(self, value) -> "FieldElement":
        if isinstance(value, int):
            if not 0 <= value < self.q:
                raise ValueError(f"element index {value} out of range for {self.name}")
            coeffs = tuple(self.digits(value))
        else:
            coeffs = tuple(int(c) % self.p for c in value)
            if len(coeffs) != self.k:
                raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def elements(self):
        return [self.element(a) for a in range(self.q)]

    def scalar_matrix(self, a: int) -> np.ndarray:
        """k x k matrix over Z_p of ``x -> x * a`` on coefficient row vectors."""
        rows = [self.digits(self.mul(self.p**i, a)) for i in range(self.k)]
        return np.array(rows, dtype=np.int64).reshape(self.k, self.k)

    def frobenius_matrix(self, j: int = 1) -> np.ndarray:
        """k x k matrix over Z_p of ``x -> x^(p^j)`` in the basis 1, x, ..., x^(k-1)."""
        f = self.frobenius(j)
        rows = [self.digits(f(self.p**i)) for i in range(self.k)]
        return np.array(rows, dtype=np.int64).reshape(self.k, self.k)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.k or any(not 0 <= c < self.field.p for c in self.coeffs):
            raise ValueError(f"bad coefficients {self.coeffs} for {self.field.name}")

    @property
    def index(self) -> int:
        return self.field.encode(self.coeffs)

    def _other(self, b) -> int:
        if isinstance(b, int):
            return b % self.field.p
        if b.field != self.field:
            raise ValueError(f"mixed fields: {self.field.name} and {b.field.name}")
        return b.index

    def __add__(self, b):
        return self.field.element(self.field.add(self.index, self._other(b)))

    def __sub__(self, b):
        return self.field.element(self.field.sub(self.index, self._other(b)))

    def __neg__(self):
        return self.field.element(self.field.neg(self.index))

    def __mul__(self, b):
        return self.field.element(self.field.mul(self.index, self._other(b)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, b):
        return self * self.field.element(self.field.inv(self._other(b)))

    def __pow__(self, e: int):
        return self.field.element(self.field.pow(self.index, e))

    def inverse(self):
        return self.field.element(self.field.inv(self.index))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"{self.field.name}[{self.index}]"


@lru_cache(maxsize=None)
def _make_field(p: int, k: int) -> FieldSpec:
    return FieldSpec(p, k, canonical_polynomial(p, k))


def make_field(p: int, k: int = 1) -> FieldSpec:
    """Canonical GF(p^k); equal (p, k) always give the identical object."""
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise ValueError(f"characteristic must be prime, got {p}")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    check_cap("field_size", p**k)
    return _make_field(p, k)


_FIELD_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+))?\s*\)\s*$")


def parse_field(text: str) -> FieldSpec:
    """Parse ``"GF(3)"`` or ``"GF(2^3)"``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse field {text!r}")
    return make_field(int(m.group(1)), int(m.group(2) or 1))


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch ``op`` in {add, mul, inv, pow}; for pow, ``b`` is an int exponent."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")


def frobenius_and_generator(F: FieldSpec):
    """Return ``(sigma, g)``: sigma(j) is x -> x^(p^j), g generates the unit group."""
    return F.frobenius, F.element(F.generator)
