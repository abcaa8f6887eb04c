"""Matrix groups over finite fields acting on V and their permutation images.

A module space is a list of blocks ``(field, dim)``; a group element is a tuple
of invertible matrices, one per block, acting on row vectors from the right.
All group theory is done on the faithful permutation action on the points of
V, encoded as integers:

* a block vector ``(x_0, ..., x_{dim-1})`` with field codes ``x_i`` has code
  ``sum(x_i * q**i)``, i.e. the base-p number of its flattened digits;
* a point of V is ``sum(code_c * stride_c)`` with block 0 least significant.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import prod

import numpy as np

from .config import check_cap
from .finite_field import FieldSpec, make_field
from .perm import Permutation, as_permutation
from .permgroup import PermGroup
from .pisets import PiSet


# -- spaces and vectors ---------------------------------------------------------

@dataclass(frozen=True)
class ModuleSpace:
    components: tuple[tuple[FieldSpec, int], ...]

    def __post_init__(self):
        comps = tuple((F, int(d)) for F, d in self.components)
        if not comps:
            raise ValueError("a module space needs at least one component")
        if any(d < 1 for _, d in comps):
            raise ValueError("component dimensions must be >= 1")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *components) -> "ModuleSpace":
        return cls(tuple(components))

    @property
    def sizes(self) -> list[int]:
        return [F.q**d for F, d in self.components]

    @property
    def strides(self) -> list[int]:
        out, s = [], 1
        for size in self.sizes:
            out.append(s)
            s *= size
        return out

    @property
    def npoints(self) -> int:
        return prod(self.sizes)

    @property
    def characteristics(self) -> list[int]:
        return [F.p for F, _ in self.components]

    def describe(self) -> str:
        return " + ".join(f"{F.name}^{d}" for F, d in self.components)

    def split(self, point: int) -> list[int]:
        out = []
        for size in self.sizes:
            point, r = divmod(point, size)
            out.append(r)
        return out

    def join(self, codes) -> int:
        return sum(c * s for c, s in zip(codes, self.strides))

    def decode(self, point: int) -> list[list[int]]:
        """Point index -> per-component coordinate lists of field codes."""
        out = []
        for (F, d), code in zip(self.components, self.split(point)):
            coords = []
            for _ in range(d):
                code, x = divmod(code, F.q)
                coords.append(x)
            out.append(coords)
        return out

    def encode(self, parts) -> int:
        codes = []
        for (F, d), coords in zip(self.components, parts):
            if len(coords) != d:
                raise ValueError(f"expected {d} coordinates, got {len(coords)}")
            codes.append(sum(int(x) * F.q**i for i, x in enumerate(coords)))
        return self.join(codes)

    def vector(self, *parts) -> "Vector":
        return Vector(self, tuple(tuple(int(x) for x in p) for p in parts))


@dataclass(frozen=True)
class Vector:
    space: ModuleSpace
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.parts) != len(self.space.components):
            raise ValueError("vector shape does not match the module space")
        for (F, d), coords in zip(self.space.components, self.parts):
            if len(coords) != d or any(not 0 <= x < F.q for x in coords):
                raise ValueError(f"bad coordinates {coords} for {F.name}^{d}")

    @property
    def index(self) -> int:
        return self.space.encode(self.parts)

    @classmethod
    def from_index(cls, space: ModuleSpace, point: int) -> "Vector":
        return cls(space, tuple(tuple(c) for c in space.decode(point)))


def _prime_matrix(F: FieldSpec, M: np.ndarray) -> np.ndarray:
    """GF(p^k) matrix -> the GF(p)-linear map on flattened coefficient digits."""
    d = M.shape[0]
    k = F.k
    out = np.zeros((d * k, d * k), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            out[i * k:(i + 1) * k, j * k:(j + 1) * k] = F.scalar_matrix(int(M[i, j]))
    return out


def _det_mod_p(A: np.ndarray, p: int) -> int:
    A = [list(map(int, row)) for row in A]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        iv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            f = A[r][c] * iv % p
            if f:
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return det % p


def _component_points(F: FieldSpec, d: int) -> np.ndarray:
    m = F.k * d
    pts = np.arange(F.p**m, dtype=np.int64)
    return np.stack([(pts // F.p**i) % F.p for i in range(m)], axis=1) if m else pts[:, None]


# -- matrix groups --------------------------------------------------------------

class MatrixGroup:
    """Generated by tuples of invertible blocks, one block per space component."""

    def __init__(self, space: ModuleSpace, generators, name: str | None = None):
        self.space = space
        self.name = name
        gens = []
        for g in generators:
            if len(space.components) == 1 and isinstance(g, np.ndarray | list) and np.ndim(g) == 2:
                g = (g,)
            if len(g) != len(space.components):
                raise ValueError("each generator needs one block per component")
            blocks = []
            for (F, d), B in zip(space.components, g):
                B = np.asarray(B, dtype=np.int64).reshape(d, d)
                if B.min(initial=0) < 0 or B.max(initial=0) >= F.q:
                    raise ValueError(f"matrix entries must be field codes in [0, {F.q})")
                if _det_mod_p(_prime_matrix(F, B), F.p) == 0:
                    raise ValueError(f"singular generator block over {F.name}:\n{B}")
                blocks.append(B)
            gens.append(tuple(blocks))
        self.generators = gens
        self.source: PermGroup | None = None
        self._source_gens: list[Permutation] | None = None

    def __repr__(self):
        return f"<MatrixGroup {self.name or ''} on {self.space.describe()}, {len(self.generators)} gens>"

    def with_source(self, source_gens, n: int) -> "MatrixGroup":
        """Attach an abstract group given by generators matching ours one-to-one."""
        if len(source_gens) != len(self.generators):
            raise ValueError("source group generators must correspond to matrix generators")
        M = MatrixGroup(self.space, self.generators, name=self.name)
        M._source_gens = [as_permutation(g, n) for g in source_gens]
        M.source = PermGroup(M._source_gens, n=n)
        return M

    def _block_perm(self, c: int, B: np.ndarray) -> np.ndarray:
        F, d = self.space.components[c]
        pts = self._points(c)
        Mp = _prime_matrix(F, B)
        img = pts @ Mp % F.p
        return img @ (F.p ** np.arange(img.shape[1], dtype=np.int64))

    def _points(self, c: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_pts_cache", {})
        if c not in cache:
            F, d = self.space.components[c]
            cache[c] = _component_points(F, d)
        return cache[c]

    @cached_property
    def generator_images(self) -> list[np.ndarray]:
        """Image arrays of the generators on all points of V."""
        check_cap("orbit_points", self.space.npoints)
        sizes, strides = self.space.sizes, self.space.strides
        pts = np.arange(self.space.npoints, dtype=np.int64)
        codes = [(pts // s) % n for s, n in zip(strides, sizes)]
        out = []
        for g in self.generators:
            img = np.zeros_like(pts)
            for c, B in enumerate(g):
                img += self._block_perm(c, B)[codes[c]] * strides[c]
            out.append(img)
        return out

    @cached_property
    def perm_group(self) -> PermGroup:
        check_cap("degree", self.space.npoints)
        perms = [Permutation._trusted(img.tolist()) for img in self.generator_images]
        return PermGroup(perms, n=self.space.npoints, name=self.name)

    @property
    def order(self) -> int:
        return self.perm_group.order

    @cached_property
    def faithful(self) -> bool:
        if self.source is None:
            return True
        P = self.perm_group
        S = self.source
        images = [img.tolist() for img in self.generator_images]
        diag = PermGroup(
            [Permutation._trusted(tuple(s) + tuple(x + S.n for x in img)) for s, img in zip(self._source_gens, images)],
            n=S.n + P.n,
        )
        if diag.order != S.order:
            raise ValueError("matrix generators do not define a homomorphism from the source group")
        return diag.order == P.order

    def component_action(self, c: int, g) -> Permutation:
        """Action of a V-point permutation on the points of component ``c``."""
        stride = self.space.strides[c]
        size = self.space.sizes[c]
        return Permutation._trusted(g[x * stride] // stride for x in range(size))


def perm_image(M: MatrixGroup):
    """(permutation group on all points of V, faithful flag, index maps)."""
    space = M.space
    return M.perm_group, M.faithful, (lambda v: v.index, lambda i: Vector.from_index(space, i))


def vector_stabilizer(M: MatrixGroup, v) -> PermGroup:
    point = v.index if isinstance(v, Vector) else int(v)
    return M.perm_group.stabilizer(point)


# -- constructors ---------------------------------------------------------------

def _identity(d):
    return np.eye(d, dtype=np.int64)


def _field_basis(F: FieldSpec):
    return [F.p**t for t in range(F.k)]


def sl_generators(d: int, F: FieldSpec):
    gens = []
    for i, j in itertools.permutations(range(d), 2):
        for a in _field_basis(F):
            T = _identity(d)
            T[i, j] = a
            gens.append(T)
    return gens


def GL(d: int, q: int) -> MatrixGroup:
    F = _field_for(q)
    D = _identity(d)
    D[0, 0] = F.generator
    gens = [D] + sl_generators(d, F)
    return MatrixGroup(ModuleSpace.of((F, d)), [(g,) for g in gens], name=f"GL({d},{q})")


def SL(d: int, q: int) -> MatrixGroup:
    F = _field_for(q)
    return MatrixGroup(ModuleSpace.of((F, d)), [(g,) for g in sl_generators(d, F)], name=f"SL({d},{q})")


def Gamma(p: int, d: int) -> MatrixGroup:
    """Semilinear group of GF(p^d) as d x d matrices over GF(p).

    Generated by multiplication by a primitive element and the Frobenius map,
    both written in the basis 1, x, ..., x^(d-1), so a vector's code equals the
    code of the corresponding element of GF(p^d).
    """
    E = make_field(p, d)
    Fp = make_field(p, 1)
    gens = [E.scalar_matrix(E.generator)]
    if d > 1:
        gens.append(E.frobenius_matrix(1))
    return MatrixGroup(ModuleSpace.of((Fp, d)), [(g,) for g in gens], name=f"Gamma({p}^{d})")


def Gamma_subgroup(p: int, d: int, a: int, j: int = 0) -> np.ndarray:
    """Matrix of x -> a * x^(p^j) on GF(p^d) in the polynomial basis."""
    E = make_field(p, d)
    return (E.frobenius_matrix(j) @ E.scalar_matrix(a)) % p


def custom(space: ModuleSpace, generators, name=None) -> MatrixGroup:
    return MatrixGroup(space, generators, name=name)


def direct_sum(*groups: MatrixGroup, name=None) -> MatrixGroup:
    """Direct product acting block-diagonally on the direct sum of the spaces."""
    comps = tuple(c for M in groups for c in M.space.components)
    space = ModuleSpace(comps)
    gens = []
    offsets = list(itertools.accumulate([len(M.space.components) for M in groups], initial=0))
    for gi, M in enumerate(groups):
        for g in M.generators:
            blocks = [_identity(d) for _, d in comps]
            for c, B in enumerate(g):
                blocks[offsets[gi] + c] = B
            gens.append(tuple(blocks))
    return MatrixGroup(space, gens, name=name)


def _field_for(q: int) -> FieldSpec:
    from sympy import factorint

    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, k), = f.items()
    return make_field(p, k)


def constructors(kind: str, *params) -> MatrixGroup:
    kinds = {"GL": GL, "SL": SL, "Gamma": Gamma, "custom": custom}
    if kind not in kinds:
        raise ValueError(f"unknown constructor {kind!r}")
    return kinds[kind](*params)


# -- submodule spinning ---------------------------------------------------------

class _ComponentSpinner:
    """GF(p)-linear spans of point sets in one component, on integer codes."""

    def __init__(self, F: FieldSpec, d: int, perms):
        self.F = F
        self.p = F.p
        self.m = F.k * d
        self.size = F.p**self.m
        self.digits = _component_points(F, d)
        self.weights = F.p ** np.arange(self.m, dtype=np.int64)
        perms = [np.asarray(g, dtype=np.int64) for g in perms]
        if F.k > 1:
            # multiplication by a primitive scalar makes spans GF(q)-subspaces
            perms.append(self._scalar_perm(F, d))
        self.perms = perms

    def _scalar_perm(self, F, d):
        B = _identity(d) * F.generator
        Mp = _prime_matrix(F, B)
        return (self.digits @ Mp % F.p) @ self.weights

    def span_add(self, members: np.ndarray, mask: np.ndarray, w: int) -> np.ndarray:
        p = self.p
        new = [members]
        for c in range(1, p):
            shifted = (self.digits[members] + c * self.digits[w]) % p
            new.append(shifted @ self.weights)
        out = np.concatenate(new)
        mask[out] = True
        return out

    def orbit(self, v: int) -> list[int]:
        seen = {v}
        out = [v]
        for x in out:
            for g in self.perms:
                y = int(g[x])
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return out

    def span(self, vectors) -> np.ndarray:
        mask = np.zeros(self.size, dtype=bool)
        mask[0] = True
        members = np.array([0], dtype=np.int64)
        for w in vectors:
            if not mask[w]:
                members = self.span_add(members, mask, w)
        return mask

    def spin(self, v: int) -> np.ndarray:
        return self.span(self.orbit(v))

    def dim(self, mask) -> int:
        n = int(mask.sum())
        return round(np.log(n) / np.log(self.p))

    def is_invariant(self, mask) -> bool:
        pts = np.flatnonzero(mask)
        return all(mask[g[pts]].all() for g in self.perms)


@dataclass
class SocleReport:
    dim: int
    socle_dim: int
    minimal_dims: list[int]
    completely_reducible: bool


def _spinner(M: MatrixGroup, N: PermGroup, component: int) -> _ComponentSpinner:
    F, d = M.space.components[component]
    check_cap("orbit_points", F.q**d)
    perms = [M.component_action(component, g) for g in N.generators]
    return _ComponentSpinner(F, d, perms)


def socle_and_complete_reducibility(M: MatrixGroup, N: PermGroup, component: int = 0) -> SocleReport:
    """Socle of the restriction to ``N`` on one component, by spinning every vector."""
    P = M.perm_group
    if not N.is_subgroup_of(P):
        raise ValueError("N is not a subgroup of the matrix group")
    sp = _spinner(M, N, component)
    k = sp.F.k
    spins = {}
    sizes = np.zeros(sp.size, dtype=np.int64)
    for v in range(1, sp.size):
        mask = sp.spin(v)
        spins[v] = mask
        sizes[v] = mask.sum()
    minimal = {}
    for v in range(1, sp.size):
        mask = spins[v]
        members = np.flatnonzero(mask)
        members = members[members != 0]
        if (sizes[members] == sizes[v]).all():
            minimal.setdefault(mask.tobytes(), mask)
    socle = sp.span(np.flatnonzero(np.logical_or.reduce(list(minimal.values()))) if minimal else [])
    dims = sorted(sp.dim(m) // k for m in minimal.values())
    socle_dim = sp.dim(socle) // k
    total = sp.m // k
    return SocleReport(total, socle_dim, dims, socle_dim == total)


def complete_reducibility_oracle(M: MatrixGroup, N: PermGroup, component: int = 0) -> bool:
    """Exhaustive check that every N-submodule has an N-invariant complement."""
    sp = _spinner(M, N, component)
    if sp.size > 3**4:
        raise ValueError("oracle limited to components with at most 81 points")
    subspaces = {}
    start = np.zeros(sp.size, dtype=bool)
    start[0] = True
    frontier = [start]
    subspaces[start.tobytes()] = start
    while frontier:
        nxt = []
        for S in frontier:
            for w in range(1, sp.size):
                if S[w]:
                    continue
                T = sp.span(list(np.flatnonzero(S)) + [w])
                key = T.tobytes()
                if key not in subspaces:
                    subspaces[key] = T
                    nxt.append(T)
        frontier = nxt
    invariant = [S for S in subspaces.values() if sp.is_invariant(S)]
    full = sp.size
    for S in invariant:
        ns = int(S.sum())
        if not any(int(W.sum()) * ns == full and int((S & W).sum()) == 1 for W in invariant):
            return False
    return True


# -- hypotheses -----------------------------------------------------------------

@dataclass
class HypothesisReport:
    mode: str
    faithful: bool
    characteristics: list[int]
    characteristic_ok: bool
    completely_reducible: list[bool]
    solvable: bool
    pi_separable: bool
    nontrivial: bool
    o_pi_order: int
    eligible: bool = field(init=False)

    def __post_init__(self):
        self.eligible = self.faithful and self.characteristic_ok and all(self.completely_reducible)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "faithful": self.faithful,
            "characteristics": self.characteristics,
            "characteristic_ok": self.characteristic_ok,
            "completely_reducible": self.completely_reducible,
            "solvable": self.solvable,
            "pi_separable": self.pi_separable,
            "nontrivial": self.nontrivial,
            "o_pi_order": self.o_pi_order,
            "eligible": self.eligible,
        }


def check_hypotheses(M: MatrixGroup, pi, mode: str = "strict") -> HypothesisReport:
    """Faithfulness, characteristic policy and complete reducibility over O_pi(G)."""
    from .radicals import o_pi

    if mode not in ("strict", "lenient"):
        raise ValueError(f"mode must be strict or lenient, got {mode!r}")
    pi = PiSet.of(pi)
    G = M.perm_group
    try:
        faithful = M.faithful
    except ValueError:
        faithful = False
    chars = M.space.characteristics
    char_ok = mode == "lenient" or all(p in pi for p in chars)
    O = o_pi(G, pi)
    cr = [socle_and_complete_reducibility(M, O, c).completely_reducible for c in range(len(chars))]
    return HypothesisReport(
        mode=mode,
        faithful=faithful,
        characteristics=chars,
        characteristic_ok=char_ok,
        completely_reducible=cr,
        solvable=G.is_solvable(),
        pi_separable=G.is_pi_separable(pi),
        nontrivial=G.order > 1,
        o_pi_order=O.order,
    )
