"""Finite sets of primes and pi-parts of integers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from sympy import factorint, isprime, primefactors


@dataclass(frozen=True, order=True)
class PiSet:
    primes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        if any(not isprime(p) for p in ps):
            raise ValueError(f"not all primes: {ps}")
        if list(ps) != sorted(set(ps)):
            raise ValueError(f"primes must be strictly increasing: {ps}")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def of(cls, primes: Iterable[int] | int | str) -> "PiSet":
        if isinstance(primes, PiSet):
            return primes
        if isinstance(primes, str):
            return parse_pi(primes)
        if isinstance(primes, int):
            primes = [primes]
        return cls(tuple(sorted(set(int(p) for p in primes))))

    def __contains__(self, p) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __str__(self):
        return ",".join(map(str, self.primes))

    def is_pi_number(self, n: int) -> bool:
        return all(p in self.primes for p in primefactors(n))

    def is_pi_prime_number(self, n: int) -> bool:
        return not any(p in self.primes for p in primefactors(n))

    def complement(self, n: int) -> "PiSet":
        """pi' restricted to the primes dividing n."""
        return PiSet(tuple(p for p in primefactors(n) if p not in self.primes))

    def part(self, n: int) -> int:
        return pi_part(n, self)


def pi_part(n: int, pi) -> int:
    """Largest divisor of n built only from primes in pi."""
    if n < 1:
        raise ValueError(f"pi_part needs a positive integer, got {n}")
    pi = PiSet.of(pi)
    out = 1
    for p, e in factorint(n).items():
        if p in pi.primes:
            out *= p**e
    return out


def parse_pi(text: str) -> PiSet:
    """``"2,3"`` -> PiSet((2, 3))."""
    items = [t.strip() for t in text.replace("{", "").replace("}", "").split(",") if t.strip()]
    if not items:
        raise ValueError("empty prime set")
    return PiSet.of(int(t) for t in items)


def nonempty_subsets(primes) -> list[PiSet]:
    from itertools import combinations

    primes = sorted(primes)
    return [PiSet(c) for r in range(1, len(primes) + 1) for c in combinations(primes, r)]
