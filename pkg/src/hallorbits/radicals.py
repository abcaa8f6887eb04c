"""pi-cores, the O_{pi'pi} series term, and Hall pi-subgroups."""
from __future__ import annotations

import itertools
import random

from .config import caps
from .perm import Permutation
from .permgroup import PermGroup
from .pisets import PiSet, nonempty_subsets, parse_pi, pi_part

__all__ = [
    "HallSearchExhausted",
    "NotPiSeparable",
    "PiSet",
    "hall_subgroup",
    "nonempty_subsets",
    "o_pi",
    "o_pi_prime",
    "o_pi_prime_pi",
    "parse_pi",
    "pi_part",
]


class NotPiSeparable(ValueError):
    pass


class HallSearchExhausted(RuntimeError):
    pass


def o_pi(G: PermGroup, pi) -> PermGroup:
    """Largest normal pi-subgroup: join of the normal closures of class
    representatives that happen to be pi-groups."""
    pi = PiSet.of(pi)
    cd = G.classes
    core = PermGroup([], n=G.n)
    for rep, order in zip(cd.reps[1:], cd.orders[1:]):
        if not pi.is_pi_number(order) or rep in core:
            continue
        N = G.normal_closure([rep])
        if pi.is_pi_number(N.order):
            core = core.join(N)
    return core


def o_pi_prime(G: PermGroup, pi) -> PermGroup:
    pi = PiSet.of(pi)
    rest = pi.complement(G.order)
    if not rest.primes:
        return PermGroup([], n=G.n)
    return o_pi(G, rest)


def o_pi_prime_pi(G: PermGroup, pi) -> PermGroup:
    """Preimage of O_pi(G / O_pi'(G)) under the coset action."""
    pi = PiSet.of(pi)
    N = o_pi_prime(G, pi)
    if N.order == G.order:
        return G
    Q = G.quotient_map(N)
    K = o_pi(Q.group, pi)
    if K.order == 1:
        return N
    return Q.preimage(K)


def _rng(seed, name, pi) -> random.Random:
    return random.Random(f"{seed}|{name}|{pi}")


def hall_subgroup(G: PermGroup, pi, seed: int = 0, name: str | None = None, budget: int | None = None) -> PermGroup:
    """A Hall pi-subgroup of a pi-separable group.

    Random pi-elements are added one at a time; an element is kept only if the
    enlarged group is still a pi-group.  Deterministic for a given
    ``(seed, name, pi)``.
    """
    pi = PiSet.of(pi)
    if not G.is_pi_separable(pi):
        raise NotPiSeparable(f"group of order {G.order} is not {pi}-separable; no Hall search attempted")
    target = pi_part(G.order, pi)
    if target == G.order:
        return G
    H = PermGroup([], n=G.n)
    if target == 1:
        return H
    budget = caps().hall_budget if budget is None else budget
    rng = _rng(seed, name or G.name, pi)
    for _ in range(budget):
        x = G.random_element(rng)
        if x in H or not pi.is_pi_number(x.order()):
            continue
        bigger = H.join(PermGroup([x], n=G.n))
        if pi.is_pi_number(bigger.order):
            H = bigger
            if H.order == target:
                return H
    return _hall_fallback(G, pi, target, budget)


def _hall_fallback(G: PermGroup, pi: PiSet, target: int, budget: int) -> PermGroup:
    cd = G.classes
    reps = [r for r, o in zip(cd.reps, cd.orders) if o > 1 and pi.is_pi_number(o)]
    for r in range(1, 4):
        for combo in itertools.combinations(reps, r):
            H = PermGroup(combo, n=G.n)
            if H.order == target:
                return H
    raise HallSearchExhausted(
        f"no Hall {pi}-subgroup of order {target} found within a budget of {budget} random steps"
    )


def conjugate_in(G: PermGroup, A: PermGroup, B: PermGroup) -> Permutation | None:
    """An element g of G with A^g = B, or None."""
    if A.order != B.order:
        return None
    for g in G.elements:
        if all((a ^ g) in B for a in A.generators):
            return g
    return None
