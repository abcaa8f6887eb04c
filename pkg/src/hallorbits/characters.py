"""Irreducible character degrees by Dixon's modular method.

Only degrees are recovered.  Class multiplication coefficients are reduced
modulo a prime ``ell`` that is 1 mod the exponent and exceeds ``2 sqrt|G|``;
the common eigenvectors of the class matrices over GF(ell) are the central
characters, and each degree is read off from its square modulo ``ell``.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from .config import caps, check_cap
from .perm import inv, mul
from .permgroup import PermGroup


class DixonError(RuntimeError):
    pass


@dataclass(frozen=True)
class DegreeMultiset:
    degrees: tuple[int, ...]
    ell: int = 0
    exponent: int = 1

    @property
    def b(self) -> int:
        return max(self.degrees)

    def multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degrees).items()))

    def check(self, order: int, nclasses: int, abelianization: int) -> None:
        ds = self.degrees
        problems = []
        if sum(d * d for d in ds) != order:
            problems.append(f"sum of squares {sum(d * d for d in ds)} != {order}")
        if len(ds) != nclasses:
            problems.append(f"{len(ds)} degrees for {nclasses} classes")
        if any(order % d for d in ds):
            problems.append("a degree does not divide |G|")
        if ds.count(1) != abelianization:
            problems.append(f"{ds.count(1)} linear characters, expected {abelianization}")
        if problems:
            raise DixonError("; ".join(problems))


# -- arithmetic mod a prime -----------------------------------------------------

def dixon_prime(order: int, exponent: int) -> int:
    ell = exponent + 1
    while not (ell * ell > 4 * order and isprime(ell)):
        ell += exponent
    return ell


def sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks square root of a quadratic residue a mod an odd prime p."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise DixonError(f"{a} is not a square mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _rref(rows, p, ncols):
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        iv = pow(rows[r][c], -1, p)
        rows[r] = [x * iv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def nullspace(A, p):
    """Basis of {x : A x = 0} over GF(p); A is a list of rows."""
    if not A:
        return []
    n = len(A[0])
    rows = [list(r) for r in A]
    pivots = _rref(rows, p, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for i, c in enumerate(pivots):
            x[c] = (-rows[i][f]) % p
        basis.append(x)
    return basis


def charpoly(X, p):
    """Characteristic polynomial (low degree first, monic) via Hessenberg form."""
    n = len(X)
    H = [list(r) for r in X]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[m], H[piv] = H[piv], H[m]
            for r in H:
                r[m], r[piv] = r[piv], r[m]
        iv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            f = H[i][m - 1] * iv % p
            if f:
                H[i] = [(x - f * y) % p for x, y in zip(H[i], H[m])]
                for r in H:
                    r[m] = (r[m] + f * r[i]) % p
    # p_k(x) = (x - h_kk) p_{k-1} - sum_i h_ik * prod(h_{j+1,j}) p_{i-1}
    polys = [[1]]
    for k in range(n):
        nxt = [0] + polys[k]
        for i, c in enumerate(polys[k]):
            nxt[i] = (nxt[i] - H[k][k] * c) % p
        t = 1
        for i in range(k - 1, -1, -1):
            t = t * H[i + 1][i] % p
            coef = t * H[i][k] % p
            if coef:
                for j, c in enumerate(polys[i]):
                    nxt[j] = (nxt[j] - coef * c) % p
        polys.append(nxt)
    return polys[n]


def _roots(poly, p):
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


# -- Dixon ---------------------------------------------------------------------

def class_matrices(G: PermGroup, ell: int):
    """``A[i][j][k]`` = #{x in C_i : x^-1 g_k in C_j} mod ell."""
    cd = G.classes
    r = len(cd)
    class_of = cd.class_of
    inverses = [[inv(x) for x in m] for m in cd.members]
    A = [[[0] * r for _ in range(r)] for _ in range(r)]
    for k, gk in enumerate(cd.reps):
        gk = tuple(gk)
        for i in range(r):
            Ai = A[i]
            for xi in inverses[i]:
                Ai[class_of[mul(xi, gk)]][k] += 1
    return [[[x % ell for x in row] for row in Ai] for Ai in A]


def _split(basis, C, ell):
    """Split span(basis) into eigenspaces of C; basis vectors are columns."""
    m = len(basis)
    r = len(C)
    CB = [[sum(C[i][t] * b[t] for t in range(r)) % ell for i in range(r)] for b in basis]
    aug = [[basis[j][i] for j in range(m)] + [CB[j][i] for j in range(m)] for i in range(r)]
    _rref(aug, ell, m)
    X = [row[m:] for row in aug[:m]]
    parts = []
    for lam in _roots(charpoly(X, ell), ell):
        shifted = [[(X[i][j] - (lam if i == j else 0)) % ell for j in range(m)] for i in range(m)]
        for_lam = nullspace(shifted, ell)
        parts.append([[sum(y[j] * basis[j][i] for j in range(m)) % ell for i in range(r)] for y in for_lam])
    if sum(len(pt) for pt in parts) != m:
        raise DixonError("class matrix combination is not diagonalisable over GF(ell)")
    return parts


def character_degrees(G: PermGroup, seed: int = 0, max_rounds: int = 200) -> DegreeMultiset:
    order = G.order
    check_cap("dixon_order", order)
    cd = G.classes
    r = len(cd)
    if r == order and r > caps().dixon_classes:
        # abelian beyond the class cap: every degree is 1
        return DegreeMultiset((1,) * order, ell=0, exponent=cd.exponent)
    check_cap("dixon_classes", r)
    e = cd.exponent
    ell = dixon_prime(order, e)
    A = class_matrices(G, ell)
    rng = random.Random(seed)
    pending = [[[int(i == j) for i in range(r)] for j in range(r)]]
    done = []
    rounds = 0
    while pending:
        W = pending.pop()
        if len(W) == 1:
            done.append(W[0])
            continue
        rounds += 1
        if rounds > max_rounds:
            raise DixonError(f"eigenspace splitting did not finish in {max_rounds} rounds (seed {seed})")
        coeffs = [rng.randrange(ell) for _ in range(r)]
        C = [[sum(c * A[i][a][b] for i, c in enumerate(coeffs)) % ell for b in range(r)] for a in range(r)]
        pending.extend(_split(W, C, ell))
    degrees = []
    sizes_inv = [pow(s, -1, ell) for s in cd.sizes]
    for w in done:
        w0 = pow(w[0], -1, ell)
        w = [x * w0 % ell for x in w]
        s = sum(w[j] * w[cd.inverse[j]] * sizes_inv[j] for j in range(r)) % ell
        d2 = order * pow(s, -1, ell) % ell
        root = sqrt_mod(d2, ell)
        d = root if root * root <= order else ell - root
        if d * d > order or d < 1:
            raise DixonError(f"no degree in [1, sqrt|G|] matches {d2} mod {ell}")
        degrees.append(d)
    ms = DegreeMultiset(tuple(sorted(degrees)), ell=ell, exponent=e)
    ms.check(order, r, order // G.derived_subgroup().order)
    return ms


def b_of(G: PermGroup, seed: int = 0) -> int:
    return character_degrees(G, seed=seed).b
