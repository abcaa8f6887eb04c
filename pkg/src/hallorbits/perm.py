"""Permutations of {0, ..., n-1}.

A permutation is a tuple of images with a right action: ``i ** g == g[i]``
and ``g * h`` applies ``g`` first, then ``h``.  Hot loops in the group engine
operate on plain tuples through the module-level helpers; :class:`Permutation`
is the same tuple with operators and printing attached.
"""
from __future__ import annotations

import re
from functools import lru_cache
from math import lcm


def mul(a: tuple, b: tuple) -> tuple:
    """Apply ``a`` then ``b``."""
    return tuple(map(b.__getitem__, a))


def inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


@lru_cache(maxsize=64)
def identity(n: int) -> tuple:
    return tuple(range(n))


def is_identity(a: tuple) -> bool:
    return tuple.__eq__(a, identity(len(a)))


def cycles_of(a) -> list[list[int]]:
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if seen[i] or a[i] == i:
            continue
        cyc = [i]
        seen[i] = True
        j = a[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = a[j]
        out.append(cyc)
    return out


def perm_order(a) -> int:
    return lcm(1, *(len(c) for c in cycles_of(a)))


def power(a: tuple, e: int) -> tuple:
    if e < 0:
        a, e = inv(a), -e
    result = identity(len(a))
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


class Permutation(tuple):
    """Immutable permutation stored as its image array."""

    __slots__ = ()

    def __new__(cls, images=()):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on {{0..{len(images) - 1}}}: {images}")
        return super().__new__(cls, images)

    @classmethod
    def _trusted(cls, images) -> "Permutation":
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(range(n))

    @classmethod
    def from_cycles(cls, text: str, n: int | None = None) -> "Permutation":
        return parse_cycles(text, n)

    @property
    def degree(self) -> int:
        return len(self)

    @property
    def images(self) -> tuple:
        return tuple(self)

    def __mul__(self, other):
        if len(other) != len(self):
            raise ValueError("degree mismatch")
        return Permutation._trusted(map(other.__getitem__, self))

    def __rmul__(self, other):
        return Permutation._trusted(map(self.__getitem__, other))

    def __invert__(self):
        return Permutation._trusted(inv(self))

    def inverse(self) -> "Permutation":
        return ~self

    def __pow__(self, e: int):
        return Permutation._trusted(power(self, e))

    def __rpow__(self, point: int) -> int:
        return self[point]

    def __xor__(self, other):
        """Conjugate: ``g ^ h == h^-1 * g * h``."""
        return ~other * self * other

    def is_identity(self) -> bool:
        return is_identity(self)

    def order(self) -> int:
        return perm_order(self)

    def cycles(self) -> list[list[int]]:
        return cycles_of(self)

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self) if i != x]

    def __str__(self):
        cyc = cycles_of(self)
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self):
        return f"Permutation({self}, n={len(self)})"

    def __reduce__(self):
        return (Permutation._trusted, (tuple(self),))


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse a product of disjoint cycles such as ``"(0 1 2)(3 4)"``."""
    stripped = text.strip()
    if _CYCLE.sub("", stripped).strip():
        raise ValueError(f"cannot parse cycles {text!r}")
    cyc = []
    for body in _CYCLE.findall(stripped):
        pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        if pts:
            cyc.append(pts)
    flat = [x for c in cyc for x in c]
    if len(flat) != len(set(flat)):
        raise ValueError(f"cycles are not disjoint: {text!r}")
    top = max(flat, default=-1) + 1
    if n is None:
        n = top
    elif top > n:
        raise ValueError(f"point {top - 1} out of range for degree {n}")
    images = list(range(n))
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            images[a] = b
    return Permutation._trusted(images)


def as_permutation(obj, n: int | None = None) -> Permutation:
    """Accept a cycle string, an image list, or a Permutation."""
    if isinstance(obj, Permutation):
        p = obj
    elif isinstance(obj, str):
        p = parse_cycles(obj, n)
    else:
        p = Permutation(obj)
    if n is not None and len(p) != n:
        raise ValueError(f"degree mismatch: expected {n}, got {len(p)}")
    return p
