"""Orbit censuses on V + V and the counting checks for semilinear groups.

A pair (v1, v2) is encoded as ``v1 * N + v2`` where N = |V|.  A pair
*qualifies* when the joint centralizer C_H(v1) & C_H(v2) lies in O_pi(G).
That condition is constant on H-orbits, so it is evaluated once per H-orbit;
a G-orbit qualifies when one of the H-orbits it contains does.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import check_cap
from .linear import HypothesisReport, MatrixGroup, ModuleSpace, check_hypotheses, Gamma
from .perm import Permutation
from .permgroup import PermGroup
from .pisets import PiSet
from .radicals import o_pi

_CHUNK = 1 << 22


def threshold_for(pi: PiSet) -> int:
    return 5 if 3 in pi else 3


# -- orbit partitions -------------------------------------------------------------

def pair_images(gen_images, N: int) -> list[np.ndarray]:
    codes = np.arange(N * N, dtype=np.int64)
    v1, v2 = np.divmod(codes, N)
    return [g[v1] * N + g[v2] for g in gen_images]


def orbit_labels(images, npoints: int) -> np.ndarray:
    """Orbit id of every point; orbits are numbered by their smallest point."""
    if not images:
        return np.arange(npoints, dtype=np.int64)
    src = np.concatenate([np.arange(npoints, dtype=np.int64)] * len(images))
    dst = np.concatenate(images)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(npoints, npoints))
    _, raw = connected_components(graph, directed=True, connection="weak")
    first = np.full(raw.max() + 1, npoints, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(npoints, dtype=np.int64))
    rank = np.empty_like(first)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[raw]


def _perm_arrays(G: PermGroup) -> list[np.ndarray]:
    return [np.asarray(g, dtype=np.int64) for g in G.generators]


def _element_array(G: PermGroup) -> np.ndarray:
    return np.asarray(G.elements, dtype=np.int64).reshape(G.order, G.n)


# -- reports ---------------------------------------------------------------------

@dataclass
class OrbitReport:
    unit: str
    pi: PiSet
    total_orbits: int
    qualifying: int
    witnesses: list[tuple[int, int]]
    joint_centralizer_orders: list[int]
    orbit_sizes: list[int]
    qualifying_flags: list[bool]
    hypothesis: HypothesisReport
    threshold: int
    h_order: int
    o_pi_order: int
    npoints: int
    space: ModuleSpace | None = field(default=None, repr=False)

    @property
    def threshold_met(self) -> bool:
        return self.qualifying >= self.threshold

    def to_dict(self) -> dict:
        wit = []
        for v1, v2 in self.witnesses:
            item = {"v1": v1, "v2": v2}
            if self.space is not None:
                item["v1_coords"] = self.space.decode(v1)
                item["v2_coords"] = self.space.decode(v2)
            wit.append(item)
        return {
            "unit": self.unit,
            "pi": list(self.pi.primes),
            "total_orbits": self.total_orbits,
            "qualifying": self.qualifying,
            "threshold": self.threshold,
            "threshold_met": self.threshold_met,
            "h_order": self.h_order,
            "o_pi_order": self.o_pi_order,
            "witnesses": wit,
            "joint_centralizer_orders": [
                o for o, q in zip(self.joint_centralizer_orders, self.qualifying_flags) if q
            ],
            "hypothesis": self.hypothesis.to_dict(),
        }


class _Census:
    """Shared state for one (M, H, pi) instance."""

    def __init__(self, M: MatrixGroup, H: PermGroup, pi: PiSet):
        self.M = M
        self.P = M.perm_group
        self.N = M.space.npoints
        check_cap("orbit_points", self.N * self.N)
        if not H.is_subgroup_of(self.P):
            raise ValueError("H is not a subgroup of the matrix group")
        self.H = H
        self.pi = pi
        self.O = o_pi(self.P, pi)
        self.Harr = _element_array(H)
        self.in_O = np.array([g in self.O for g in H.elements], dtype=bool)
        # fixes[h, v]: element h fixes point v
        self.fixes = self.Harr == np.arange(self.N, dtype=np.int64)

    def joint(self, v1: np.ndarray, v2: np.ndarray):
        """(joint centralizer order, qualifies) for arrays of pairs."""
        orders = np.empty(len(v1), dtype=np.int64)
        ok = np.empty(len(v1), dtype=bool)
        step = max(1, _CHUNK // max(1, self.H.order))
        bad = ~self.in_O
        for s in range(0, len(v1), step):
            a, b = v1[s:s + step], v2[s:s + step]
            mask = self.fixes[:, a] & self.fixes[:, b]
            orders[s:s + step] = mask.sum(axis=0)
            ok[s:s + step] = ~(mask & bad[:, None]).any(axis=0)
        return orders, ok


def qualifying_orbits(M: MatrixGroup, H: PermGroup, pi, unit: str = "H", mode: str = "strict",
                      hypothesis: HypothesisReport | None = None) -> OrbitReport:
    """Partition V + V into H- or G-orbits and count the qualifying ones."""
    if unit not in ("H", "G"):
        raise ValueError(f"unit must be 'H' or 'G', got {unit!r}")
    pi = PiSet.of(pi)
    cen = _Census(M, H, pi)
    N = cen.N
    if hypothesis is None:
        hypothesis = check_hypotheses(M, pi, mode)
    h_imgs = pair_images(_perm_arrays(H), N)
    h_lab = orbit_labels(h_imgs, N * N)
    n_h = int(h_lab.max()) + 1
    reps = np.full(n_h, N * N, dtype=np.int64)
    np.minimum.at(reps, h_lab, np.arange(N * N, dtype=np.int64))
    h_sizes = np.bincount(h_lab, minlength=n_h)
    r1, r2 = np.divmod(reps, N)
    h_joint, h_ok = cen.joint(r1, r2)

    if unit == "H":
        sizes, joint, ok, wit_codes = h_sizes, h_joint, h_ok, reps
    else:
        g_imgs = pair_images(M.generator_images, N)
        g_lab = orbit_labels(g_imgs, N * N)
        n_g = int(g_lab.max()) + 1
        sizes = np.bincount(g_lab, minlength=n_g)
        parent = g_lab[reps]  # G-orbit of each H-orbit
        joint = np.full(n_g, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(joint, parent, h_joint)
        ok = np.zeros(n_g, dtype=bool)
        np.logical_or.at(ok, parent, h_ok)
        wit_codes = np.full(n_g, N * N, dtype=np.int64)
        np.minimum.at(wit_codes, parent[h_ok], reps[h_ok])

    witnesses = [divmod(int(c), N) for c, q in zip(wit_codes, ok) if q]
    return OrbitReport(
        unit=unit,
        pi=pi,
        total_orbits=len(sizes),
        qualifying=int(ok.sum()),
        witnesses=witnesses,
        joint_centralizer_orders=[int(x) for x in joint],
        orbit_sizes=[int(x) for x in sizes],
        qualifying_flags=[bool(x) for x in ok],
        hypothesis=hypothesis,
        threshold=threshold_for(pi),
        h_order=H.order,
        o_pi_order=cen.O.order,
        npoints=N,
        space=M.space,
    )


def joint_centralizer(H: PermGroup, v1: int, v2: int) -> PermGroup:
    """C_H(v1) & C_H(v2) through two point stabilizers."""
    return H.stabilizer(v1).stabilizer(v2)


def verify_witness(M: MatrixGroup, H: PermGroup, pi, v1: int, v2: int, O: PermGroup | None = None) -> bool:
    """Independent re-check of one pair via stabilizer chains."""
    if O is None:
        O = o_pi(M.perm_group, PiSet.of(pi))
    return joint_centralizer(H, v1, v2).is_subgroup_of(O)


@dataclass
class PairResult:
    witness: tuple[int, int] | None
    hypothesis: HypothesisReport | None

    @property
    def found(self) -> bool:
        return self.witness is not None


def pair_exists(M: MatrixGroup, H: PermGroup, pi, mode: str = "strict",
                hypothesis: HypothesisReport | None = None, check: bool = True) -> PairResult:
    """First qualifying pair in encoding order, or no witness."""
    pi = PiSet.of(pi)
    cen = _Census(M, H, pi)
    if hypothesis is None and check:
        hypothesis = check_hypotheses(M, pi, mode)
    bad_rows = ~cen.in_O
    for v1 in range(cen.N):
        culprits = cen.fixes[:, v1] & bad_rows
        if not culprits.any():
            return PairResult((v1, 0), hypothesis)
        good = ~cen.fixes[culprits].any(axis=0)
        hits = np.flatnonzero(good)
        if len(hits):
            return PairResult((v1, int(hits[0])), hypothesis)
    return PairResult(None, hypothesis)


@dataclass
class LemmaResult:
    regular_orbit_exists: bool
    regular_pair: tuple[int, int] | None
    witness: int | None
    centralizer_order: int | None
    group_order: int

    @property
    def implication_holds(self) -> bool:
        if not self.regular_orbit_exists:
            return True
        return self.witness is not None and self.centralizer_order**2 <= self.group_order


def regular_orbit_small_centralizer(M: MatrixGroup) -> LemmaResult:
    """Look for a regular G-orbit on V + V and then for v with |C_G(v)|^2 <= |G|."""
    G = M.perm_group
    N = M.space.npoints
    check_cap("orbit_points", N * N)
    arr = _element_array(G)
    fixes = arr == np.arange(N, dtype=np.int64)
    cent = fixes.sum(axis=0)
    order = G.order
    pair = None
    for v1 in range(N):
        col = fixes[:, v1]
        if cent[v1] == 1:
            pair = (v1, 0)
            break
        joint = fixes[col].sum(axis=0)
        hits = np.flatnonzero(joint == 1)
        if len(hits):
            pair = (v1, int(hits[0]))
            break
    if pair is None:
        return LemmaResult(False, None, None, None, order)
    witness = None
    for v in pair:
        if int(cent[v]) ** 2 <= order:
            witness = v
            break
    if witness is None:
        small = np.flatnonzero(cent.astype(np.int64) ** 2 <= order)
        witness = int(small[0]) if len(small) else None
    c = int(cent[witness]) if witness is not None else None
    return LemmaResult(True, pair, witness, c, order)


# -- counting function ------------------------------------------------------------

@dataclass
class FdRow:
    p: int
    d: int
    value: float
    sign: str
    lower: Fraction
    upper: Fraction


def _log2_bounds(d: int, k: int) -> tuple[Fraction, Fraction]:
    if d == 1:
        return Fraction(0), Fraction(0)
    n = d ** (1 << k)
    lo = n.bit_length() - 1
    hi = (n - 1).bit_length()
    return Fraction(lo, 1 << k), Fraction(hi, 1 << k)


def _sqrt_bounds(x: int, k: int) -> tuple[Fraction, Fraction]:
    r = math.isqrt(x << (2 * k))
    exact = r * r == x << (2 * k)
    return Fraction(r, 1 << k), Fraction(r if exact else r + 1, 1 << k)


def f_value(p: int, d: int) -> float:
    return (p**d - 1) - math.log2(d) * (p ** (d / 2) - 1) - 4 * d


def f_bounds(p: int, d: int, k: int) -> tuple[Fraction, Fraction]:
    """Rational interval containing (p^d - 1) - log2(d) (p^(d/2) - 1) - 4d."""
    llo, lhi = _log2_bounds(d, k)
    slo, shi = _sqrt_bounds(p**d, k)
    base = p**d - 1 - 4 * d
    return base - lhi * (shi - 1), base - llo * (slo - 1)


def fd_scan(p: int, d_range) -> list[FdRow]:
    """Evaluate f(d) with a sign certified by exact rational bounds."""
    rows = []
    for d in d_range:
        if d < 1:
            raise ValueError("d must be >= 1")
        sign, lo, hi = "uncertified", None, None
        for k in (10, 14, 18):
            lo, hi = f_bounds(p, d, k)
            if lo > 0:
                sign = "positive"
                break
            if hi <= 0:
                sign = "non-positive"
                break
        rows.append(FdRow(p, d, f_value(p, d), sign, lo, hi))
    return rows


def fd_csv(rows: list[FdRow]) -> str:
    lines = ["d,value,sign"]
    lines += [f"{r.d},{r.value:.6f},{r.sign}" for r in rows]
    return "\n".join(lines) + "\n"


def points_outside_subfields(p: int, d: int) -> int:
    """|GF(p^d)| minus the size of the union of its maximal proper subfields."""
    from itertools import combinations
    from math import gcd
    from sympy import primefactors

    maximal = [d // r for r in primefactors(d)]
    union = 0
    for s in range(1, len(maximal) + 1):
        for combo in combinations(maximal, s):
            g = 0
            for m in combo:
                g = gcd(g, m)
            union += (-1) ** (s + 1) * p**g
    return p**d - union


# -- semilinear direct checks -----------------------------------------------------

LEFTOVER_CASES = {(2, 2), (2, 3), (2, 4), (3, 1), (3, 2)}


def all_subgroups(G: PermGroup) -> list[PermGroup]:
    """Every subgroup of a small group up to conjugacy, by closing cyclic joins."""
    check_cap("enumeration", G.order)
    elems = G.elements
    index = G.element_index
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[a * b]
    inverse = np.argmin(table, axis=1)  # identity has index 0

    def close(seed):
        members = set(seed) | {0}
        frontier = list(members)
        while frontier:
            new = set(table[np.ix_(frontier, list(members))].ravel()) | set(table[np.ix_(list(members), frontier)].ravel())
            new -= members
            members |= new
            frontier = list(new)
        return frozenset(int(x) for x in members)

    subs = {close([i]) for i in range(n)}
    frontier = list(subs)
    while frontier:
        fresh = []
        current = list(subs)
        for A in frontier:
            for B in current:
                if A <= B or B <= A:
                    continue
                C = close(A | B)
                if C not in subs:
                    subs.add(C)
                    fresh.append(C)
        frontier = fresh

    def conj(S, g):
        gi = inverse[g]
        return frozenset(int(table[table[gi, s], g]) for s in S)

    seen = set()
    reps = []
    for S in sorted(subs, key=lambda s: (len(s), sorted(s))):
        if S in seen:
            continue
        for g in range(n):
            seen.add(conj(S, g))
        reps.append(S)
    out = []
    for S in reps:
        gens = [elems[i] for i in sorted(S) if i]
        out.append(G._subgroup_from_candidates(gens))
    return out


@dataclass
class GammaCheck:
    p: int
    d: int
    pi: PiSet
    reports: list[OrbitReport]

    @property
    def eligible_reports(self) -> list[OrbitReport]:
        return [r for r in self.reports if r.hypothesis.eligible]

    @property
    def all_pass(self) -> bool:
        return all(r.threshold_met for r in self.eligible_reports)


def gamma_direct_check(p: int, d: int, pi, mode: str = "strict", unit: str = "H") -> GammaCheck:
    """Run the census for every pi-subgroup (up to conjugacy) of Gamma(p^d)."""
    if (p, d) not in LEFTOVER_CASES:
        raise ValueError(f"(p, d) = ({p}, {d}) is not one of the leftover cases {sorted(LEFTOVER_CASES)}")
    pi = PiSet.of(pi)
    M = Gamma(p, d)
    G = M.perm_group
    hyp = check_hypotheses(M, pi, mode)
    reports = []
    for H in all_subgroups(G):
        if pi.is_pi_number(H.order):
            reports.append(qualifying_orbits(M, H, pi, unit=unit, mode=mode, hypothesis=hyp))
    return GammaCheck(p, d, pi, reports)


# -- direct sums -------------------------------------------------------------------

def component_group(M: MatrixGroup, c: int) -> MatrixGroup:
    """The image of M acting on component ``c`` alone."""
    F, d = M.space.components[c]
    return MatrixGroup(ModuleSpace.of((F, d)), [(g[c],) for g in M.generators], name=f"{M.name}|{c}")


def direct_sum_witness(M: MatrixGroup, H: PermGroup, pi) -> tuple[int, int] | None:
    """Glue per-component witnesses (for H K_i / K_i and O_pi(G / K_i)) into a pair on V."""
    pi = PiSet.of(pi)
    v1 = v2 = 0
    strides = M.space.strides
    for c in range(len(M.space.components)):
        Mc = component_group(M, c)
        Hc = PermGroup([M.component_action(c, h) for h in H.generators], n=M.space.sizes[c])
        res = pair_exists(Mc, Hc, pi, check=False)
        if res.witness is None:
            return None
        v1 += res.witness[0] * strides[c]
        v2 += res.witness[1] * strides[c]
    return v1, v2
