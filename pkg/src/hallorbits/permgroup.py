"""Permutation groups backed by a deterministic Schreier-Sims stabilizer chain.

Subgroups live on the parent's point set; nothing is re-based.  Everything that
needs the full element list (classes, centralizers, quotients) enumerates the
group and is bounded by the ``enumeration`` cap.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import lcm, prod

from .config import CapExceeded, caps, check_cap
from .perm import Permutation, as_permutation, identity, inv, is_identity, mul, perm_order
from .pisets import PiSet


class _Level:
    __slots__ = ("point", "gens", "orbit", "trans", "tinv", "checked")

    def __init__(self, point):
        self.point = point
        self.gens = []
        self.orbit = [point]
        self.trans = {}
        self.tinv = {}
        self.checked = set()

    def close_orbit(self):
        orbit, trans, gens = self.orbit, self.trans, self.gens
        i = 0
        while i < len(orbit):
            b = orbit[i]
            ub = trans[b]
            for s in gens:
                c = s[b]
                if c not in trans:
                    trans[c] = mul(ub, s)
                    orbit.append(c)
            i += 1

    def inverse(self, c):
        u = self.tinv.get(c)
        if u is None:
            u = self.tinv[c] = inv(self.trans[c])
        return u


class StabChain:
    """Base and strong generating set, built incrementally.

    Generators are added with :meth:`extend`; after every call the chain is a
    valid BSGS for the group generated so far (Sims' criterion is re-checked
    only on Schreier generators not yet tested).
    """

    def __init__(self, n: int):
        self.n = n
        self.levels: list[_Level] = []

    @property
    def base(self) -> list[int]:
        return [lev.point for lev in self.levels]

    @property
    def order(self) -> int:
        return prod(len(lev.orbit) for lev in self.levels)

    @property
    def strong_gens(self) -> list[tuple]:
        seen, out = set(), []
        for lev in self.levels:
            for s in lev.gens:
                if s not in seen:
                    seen.add(s)
                    out.append(s)
        return out

    def copy(self) -> "StabChain":
        new = StabChain(self.n)
        for lev in self.levels:
            nl = _Level(lev.point)
            nl.gens = list(lev.gens)
            nl.orbit = list(lev.orbit)
            nl.trans = dict(lev.trans)
            nl.tinv = dict(lev.tinv)
            nl.checked = set(lev.checked)
            new.levels.append(nl)
        return new

    def strip(self, h, start=0):
        levels = self.levels
        for l in range(start, len(levels)):
            lev = levels[l]
            c = h[lev.point]
            if c not in lev.trans:
                return h, l
            if c != lev.point:
                h = mul(h, lev.inverse(c))
        return h, len(levels)

    def contains(self, g) -> bool:
        h, _ = self.strip(tuple(g))
        return is_identity(h)

    def _new_level(self, g):
        point = next(i for i, x in enumerate(g) if i != x)
        lev = _Level(point)
        lev.trans[point] = identity(self.n)
        self.levels.append(lev)

    def _add_strong(self, y, lo, hi):
        if hi == len(self.levels):
            self._new_level(y)
        for l in range(lo, hi + 1):
            lev = self.levels[l]
            lev.gens.append(y)
            lev.close_orbit()

    def extend(self, g) -> bool:
        """Add ``g`` as a generator; returns False if it was already a member."""
        g = tuple(g)
        h, j = self.strip(g)
        if is_identity(h):
            return False
        # g fixes base[:m] and moves base[m] (or fixes the whole base)
        m = next((l for l, lev in enumerate(self.levels) if g[lev.point] != lev.point), len(self.levels))
        self._add_strong(g, 0, m)
        self._complete()
        return True

    def _complete(self):
        i = len(self.levels) - 1
        while i >= 0:
            j = self._check_level(i)
            i = i - 1 if j is None else j

    def _check_level(self, i):
        lev = self.levels[i]
        checked = lev.checked
        k = 0
        while k < len(lev.orbit):
            b = lev.orbit[k]
            k += 1
            ub = lev.trans[b]
            for gi, s in enumerate(lev.gens):
                if (b, gi) in checked:
                    continue
                checked.add((b, gi))
                c = s[b]
                h = mul(mul(ub, s), lev.inverse(c))
                if is_identity(h):
                    continue
                y, j = self.strip(h, i + 1)
                if not is_identity(y):
                    self._add_strong(y, i + 1, j)
                    return j
        return None

    def transversals(self) -> list[list[tuple]]:
        return [[lev.trans[b] for b in lev.orbit] for lev in self.levels]


@dataclass
class ClassData:
    reps: list[Permutation]
    sizes: list[int]
    orders: list[int]
    inverse: list[int]
    exponent: int
    class_of: dict = field(repr=False)
    members: list[list[tuple]] = field(repr=False)

    def __len__(self):
        return len(self.reps)


@dataclass
class ChiefFactor:
    lower: int
    upper: int

    @property
    def order(self) -> int:
        return self.upper // self.lower


class PermGroup:
    """A permutation group on ``n`` points with an exact order."""

    def __init__(self, generators=(), n: int | None = None, name: str | None = None, _chain=None):
        gens = [as_permutation(g, n if isinstance(g, str) else None) for g in generators]
        if n is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise ValueError(f"degree mismatch: generators must all act on {n} points")
        check_cap("degree", n)
        self.n = n
        self.name = name
        self.generators = tuple(g for g in gens if not g.is_identity())
        if _chain is None:
            _chain = StabChain(n)
            for g in self.generators:
                _chain.extend(g)
        self._chain = _chain

    # -- basics ------------------------------------------------------------
    def __repr__(self):
        label = self.name or "PermGroup"
        return f"<{label}: degree {self.n}, order {self.order}>"

    @property
    def order(self) -> int:
        return self._chain.order

    def __len__(self):
        return self.order

    @property
    def base(self) -> list[int]:
        return self._chain.base

    @property
    def strong_gens(self) -> list[Permutation]:
        return [Permutation._trusted(s) for s in self._chain.strong_gens]

    @cached_property
    def identity(self) -> Permutation:
        return Permutation.identity(self.n)

    def contains(self, g) -> bool:
        g = as_permutation(g)
        if len(g) != self.n:
            return False
        return self._chain.contains(g)

    __contains__ = contains

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.n == other.n and all(g in other for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.n == other.n and self.order == other.order and self.is_subgroup_of(other)

    def __hash__(self):
        return hash((self.n, self.order))

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(mul(a, b) == mul(b, a) for a, b in itertools.combinations(gs, 2))

    def subgroup(self, gens, name=None) -> "PermGroup":
        gens = [as_permutation(g, self.n) for g in gens]
        for g in gens:
            if g not in self:
                raise ValueError(f"{g} is not an element of the group")
        return PermGroup(gens, n=self.n, name=name)

    def _grow(self, chain: StabChain, gens, name=None) -> "PermGroup":
        return PermGroup(gens, n=self.n, name=name, _chain=chain)

    def join(self, other: "PermGroup") -> "PermGroup":
        chain = self._chain.copy()
        gens = list(self.generators)
        for g in other.generators:
            if chain.extend(g):
                gens.append(g)
        return self._grow(chain, gens)

    def conjugate(self, g) -> "PermGroup":
        g = as_permutation(g, self.n)
        return PermGroup([s ^ g for s in self.generators], n=self.n)

    def random_element(self, rng) -> Permutation:
        g = identity(self.n)
        for lev in reversed(self._chain.levels):
            b = lev.orbit[rng.randrange(len(lev.orbit))]
            g = mul(g, lev.trans[b])
        return Permutation._trusted(g)

    # -- elements ----------------------------------------------------------
    def iter_elements(self):
        """Yield every element exactly once, identity first."""
        check_cap("enumeration", self.order)
        trans = [[lev.trans[b] for b in lev.orbit] for lev in reversed(self._chain.levels)]
        if not trans:
            yield self.identity
            return
        for combo in itertools.product(*trans):
            yield Permutation._trusted(reduce(mul, combo))

    @cached_property
    def elements(self) -> list[Permutation]:
        return list(self.iter_elements())

    @cached_property
    def element_index(self) -> dict:
        return {g: i for i, g in enumerate(self.elements)}

    @cached_property
    def classes(self) -> ClassData:
        elements = self.elements
        gens = [(tuple(s), inv(s)) for s in self.generators]
        class_of: dict = {}
        members: list[list[tuple]] = []
        for x in elements:
            if x in class_of:
                continue
            c = len(members)
            cls = [x]
            class_of[x] = c
            i = 0
            while i < len(cls):
                y = cls[i]
                i += 1
                for s, si in gens:
                    z = Permutation._trusted(mul(mul(si, y), s))
                    if z not in class_of:
                        class_of[z] = c
                        cls.append(z)
            members.append(cls)
        reps = [m[0] for m in members]
        orders = [perm_order(r) for r in reps]
        inverse = [class_of[Permutation._trusted(inv(r))] for r in reps]
        return ClassData(
            reps=reps,
            sizes=[len(m) for m in members],
            orders=orders,
            inverse=inverse,
            exponent=lcm(1, *orders),
            class_of=class_of,
            members=members,
        )

    @property
    def exponent(self) -> int:
        return self.classes.exponent

    # -- subgroups ---------------------------------------------------------
    def _subgroup_from_candidates(self, candidates, name=None) -> "PermGroup":
        chain = StabChain(self.n)
        gens = []
        for g in candidates:
            if chain.extend(g):
                gens.append(g)
        return self._grow(chain, [Permutation._trusted(g) for g in gens], name=name)

    def stabilizer(self, point: int) -> "PermGroup":
        """Point stabilizer from Schreier generators of the orbit of ``point``."""
        trans = {point: identity(self.n)}
        orbit = [point]
        gens = [tuple(s) for s in self.generators]
        i = 0
        while i < len(orbit):
            b = orbit[i]
            i += 1
            for s in gens:
                c = s[b]
                if c not in trans:
                    trans[c] = mul(trans[b], s)
                    orbit.append(c)

        def schreier():
            for b in orbit:
                for s in gens:
                    c = s[b]
                    yield mul(mul(trans[b], s), inv(trans[c]))

        return self._subgroup_from_candidates(schreier())

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        out = [point]
        for b in out:
            for s in self.generators:
                c = s[b]
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        return out

    def centralizer(self, target) -> "PermGroup":
        """Centralizer of an element or of a subgroup (by its generators)."""
        if isinstance(target, PermGroup):
            ts = [tuple(t) for t in target.generators]
        else:
            ts = [tuple(as_permutation(target, self.n))]
        return self._subgroup_from_candidates(
            g for g in self.elements if all(mul(g, t) == mul(t, g) for t in ts)
        )

    def normal_closure(self, S) -> "PermGroup":
        """Smallest normal subgroup containing ``S`` (elements or a group)."""
        if isinstance(S, PermGroup):
            S = S.generators
        S = [as_permutation(s, self.n) for s in S]
        for s in S:
            if s not in self:
                raise ValueError(f"{s} is not an element of the group")
        chain = StabChain(self.n)
        gens: list[tuple] = []
        for s in S:
            if chain.extend(s):
                gens.append(tuple(s))
        G = [(tuple(g), inv(g)) for g in self.generators]
        i = 0
        while i < len(gens):
            x = gens[i]
            i += 1
            for g, gi in G:
                c = mul(mul(gi, x), g)
                if chain.extend(c):
                    gens.append(c)
        return self._grow(chain, [Permutation._trusted(g) for g in gens])

    def is_normal_subgroup(self, N: "PermGroup") -> bool:
        if not N.is_subgroup_of(self):
            return False
        return all((n ^ g) in N for n in N.generators for g in self.generators)

    def derived_subgroup(self) -> "PermGroup":
        gens = self.generators
        comms = [~a * ~b * a * b for a, b in itertools.combinations(gens, 2)]
        return self.normal_closure(comms)

    @cached_property
    def derived_series(self) -> list["PermGroup"]:
        series = [self]
        while True:
            D = series[-1].derived_subgroup()
            if D.order == series[-1].order:
                return series
            series.append(D)

    def is_solvable(self) -> bool:
        return self.derived_series[-1].order == 1

    # -- quotients ---------------------------------------------------------
    def quotient_map(self, N: "PermGroup") -> "QuotientMap":
        if not self.is_normal_subgroup(N):
            raise ValueError("quotient requires a normal subgroup")
        index = self.order // N.order
        check_cap("degree", max(index, 1))
        n_elems = [tuple(x) for x in N.elements]
        coset_of: dict = {}
        reps: list[tuple] = []
        for g in self.elements:
            if g in coset_of:
                continue
            c = len(reps)
            reps.append(tuple(g))
            for x in n_elems:
                coset_of[mul(x, g)] = c
        return QuotientMap(self, N, reps, coset_of)

    def quotient(self, N: "PermGroup") -> "PermGroup":
        return self.quotient_map(N).group

    # -- normal structure ----------------------------------------------------
    def _class_set(self, H: "PermGroup") -> frozenset:
        """Classes contained in a normal subgroup ``H``."""
        return frozenset(i for i, r in enumerate(self.classes.reps) if r in H)

    @cached_property
    def _normal_lattice(self) -> dict:
        cd = self.classes
        lattice: dict = {}

        def add(H):
            key = self._class_set(H)
            if key not in lattice:
                lattice[key] = H
            return key

        trivial = PermGroup([], n=self.n)
        add(trivial)
        for r in cd.reps[1:]:
            add(self.normal_closure([r]))
        frontier = list(lattice)
        while frontier:
            fresh = []
            keys = list(lattice)
            for a in frontier:
                for b in keys:
                    if a <= b or b <= a:
                        continue
                    joined = self.normal_closure(list(lattice[a].generators) + list(lattice[b].generators))
                    key = self._class_set(joined)
                    if key not in lattice:
                        lattice[key] = joined
                        fresh.append(key)
            frontier = fresh
        return lattice

    def normal_subgroups(self) -> list["PermGroup"]:
        """All normal subgroups, ordered by (order, class indices)."""
        items = sorted(self._normal_lattice.items(), key=lambda kv: (kv[1].order, sorted(kv[0])))
        return [H for _, H in items]

    def minimal_normal_subgroups(self) -> list["PermGroup"]:
        keys = [k for k, H in self._normal_lattice.items() if H.order > 1]
        mins = [k for k in keys if not any(o < k for o in keys)]
        mins.sort(key=lambda k: (self._normal_lattice[k].order, sorted(k)))
        return [self._normal_lattice[k] for k in mins]

    @cached_property
    def chief_series(self) -> list["PermGroup"]:
        lattice = self._normal_lattice
        keys = list(lattice)
        cur = min(keys, key=len)
        series = [lattice[cur]]
        top = frozenset(range(len(self.classes)))
        while cur != top:
            above = [k for k in keys if cur < k]
            cover = [k for k in above if not any(cur < o < k for o in above)]
            cur = min(cover, key=lambda k: (lattice[k].order, sorted(k)))
            series.append(lattice[cur])
        return series

    def chief_factors(self) -> list[ChiefFactor]:
        s = self.chief_series
        return [ChiefFactor(a.order, b.order) for a, b in zip(s, s[1:])]

    def is_pi_separable(self, pi) -> bool:
        pi = PiSet.of(pi)
        return all(_factor_ok(f.order, pi) for f in self.chief_factors())

    def is_pi_group(self, pi) -> bool:
        return PiSet.of(pi).is_pi_number(self.order)


def _factor_ok(order: int, pi: PiSet) -> bool:
    from sympy import primefactors

    ps = primefactors(order)
    if not any(p in pi for p in ps):
        return True
    return len(ps) == 1 and ps[0] in pi


class QuotientMap:
    """The action of G on the right cosets of a normal subgroup N."""

    def __init__(self, G: PermGroup, N: PermGroup, reps, coset_of):
        self.source = G
        self.kernel = N
        self.reps = reps
        self._coset_of = coset_of
        index = len(reps)
        self.group = PermGroup([self.image(g) for g in G.generators], n=max(index, 1))

    def image(self, g) -> Permutation:
        g = tuple(g)
        if len(self.reps) == 0:
            return Permutation.identity(1)
        return Permutation._trusted(self._coset_of[mul(r, g)] for r in self.reps)

    def preimage(self, K: PermGroup) -> PermGroup:
        """Full preimage of a subgroup of the quotient."""
        G = self.source
        chain = self.kernel._chain.copy()
        gens = list(self.kernel.generators)
        for g in G.elements:
            if self.image(g) in K and chain.extend(g):
                gens.append(g)
        return PermGroup(gens, n=G.n, _chain=chain)


# -- functional surface ------------------------------------------------------

def build_group(gens, n: int | None = None, name: str | None = None) -> PermGroup:
    return PermGroup(gens, n=n, name=name)


def enumerate_elements(G: PermGroup):
    return G.iter_elements()


def conjugacy_classes(G: PermGroup) -> ClassData:
    return G.classes


def stabilizer_and_centralizer(G: PermGroup, target) -> PermGroup:
    if isinstance(target, int):
        return G.stabilizer(target)
    return G.centralizer(target)


def normal_closure(G: PermGroup, S) -> PermGroup:
    return G.normal_closure(S)


def derived_series_and_solvability(G: PermGroup):
    series = G.derived_series
    return series, series[-1].order == 1


def quotient_rep(G: PermGroup, N: PermGroup) -> PermGroup:
    return G.quotient(N)


def minimal_normals_and_pi_separability(G: PermGroup, pi):
    pi = PiSet.of(pi)
    log = [
        {"order": f.order, "pi_prime": pi.is_pi_prime_number(f.order), "ok": _factor_ok(f.order, pi)}
        for f in G.chief_factors()
    ]
    return G.minimal_normal_subgroups(), all(e["ok"] for e in log), log


def direct_product(*groups: PermGroup) -> PermGroup:
    """External direct product acting on the disjoint union of point sets."""
    n = sum(G.n for G in groups)
    gens = []
    offset = 0
    for G in groups:
        for g in G.generators:
            images = list(range(n))
            for i, x in enumerate(g):
                images[offset + i] = offset + x
            gens.append(Permutation._trusted(images))
        offset += G.n
    return PermGroup(gens, n=n)


__all__ = [
    "CapExceeded",
    "ClassData",
    "PermGroup",
    "QuotientMap",
    "StabChain",
    "build_group",
    "caps",
    "conjugacy_classes",
    "derived_series_and_solvability",
    "direct_product",
    "enumerate_elements",
    "minimal_normals_and_pi_separability",
    "normal_closure",
    "quotient_rep",
    "stabilizer_and_centralizer",
]
