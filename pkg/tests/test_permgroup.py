import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hallorbits import CapExceeded, PermGroup, Permutation, parse_cycles, set_caps
from hallorbits.permgroup import (
    build_group,
    conjugacy_classes,
    derived_series_and_solvability,
    direct_product,
    enumerate_elements,
    minimal_normals_and_pi_separability,
    normal_closure,
    quotient_rep,
    stabilizer_and_centralizer,
)
from oracles import brute_classes, closure, element_order, sympy_order


def test_permutation_basics():
    a = parse_cycles("(0 1 2)(3 4)", 6)
    assert a == (1, 2, 0, 4, 3, 5)
    assert str(a) == "(0 1 2)(3 4)"
    assert a.order() == 6
    assert (a * ~a).is_identity()
    assert str(Permutation.identity(3)) == "()"
    b = parse_cycles("(0 1)", 6)
    # right action: a * b applies a first
    assert (a * b)[0] == b[a[0]]
    assert (a ^ b) == ~b * a * b


@pytest.mark.parametrize("bad", ["(0 1)(1 2)", "(0 x)", "0 1"])
def test_bad_cycles(bad):
    with pytest.raises(ValueError):
        parse_cycles(bad, 4)


def test_non_bijection_rejected():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


def test_s4_and_trivial():
    assert build_group(["(0 1)", "(0 1 2 3)"], n=4).order == 24
    assert build_group([], n=5).order == 1
    with pytest.raises(ValueError):
        build_group(["(0 1)", [1, 0, 2]], n=2)


def test_gl23_image_order(gl23):
    P = gl23.perm_group
    assert P.order == 48
    assert len(set(P.elements)) == 48


def test_enumeration(s4):
    els = list(enumerate_elements(s4))
    assert len(els) == 24 == len(set(els))
    assert els[0].is_identity()
    T = PermGroup([], n=3)
    assert list(enumerate_elements(T)) == [Permutation.identity(3)]


def test_enumeration_cap(s4):
    set_caps(enumeration=10)
    with pytest.raises(CapExceeded):
        PermGroup(["(0 1 2 3)", "(0 1)"], n=4).elements


def test_gamma8_elements():
    from hallorbits import Gamma

    assert len(list(enumerate_elements(Gamma(2, 3).perm_group))) == 21


def test_classes_s4(s4):
    cd = conjugacy_classes(s4)
    assert sorted(cd.sizes) == [1, 3, 6, 6, 8]
    assert sum(cd.sizes) == 24
    assert all(cd.inverse[cd.inverse[i]] == i for i in range(len(cd)))
    assert cd.exponent == 12


def test_classes_c6_q8(corpus):
    assert len(PermGroup(["(0 1 2 3 4 5)"], n=6).classes) == 6
    q8 = next(e for e in corpus if e.name == "Q8_reg").perm_group()
    assert len(q8.classes) == 5


def test_stabilizer_centralizer(s4):
    assert stabilizer_and_centralizer(s4, 0).order == 6
    t = parse_cycles("(0 1)", 4)
    C = stabilizer_and_centralizer(s4, t)
    assert C.order == 4 and all(g * t == t * g for g in C.elements)
    assert stabilizer_and_centralizer(s4, Permutation.identity(4)).order == 24


def test_normal_closure(s4):
    assert normal_closure(s4, ["(0 1)"]).order == 24
    V = normal_closure(s4, ["(0 1)(2 3)"])
    assert V.order == 4 and s4.is_normal_subgroup(V)
    assert normal_closure(s4, [Permutation.identity(4)]).order == 1


def test_derived_series(s4, a5):
    series, solv = derived_series_and_solvability(s4)
    assert [H.order for H in series] == [24, 12, 4, 1] and solv
    series, solv = derived_series_and_solvability(a5)
    assert not solv and series[-1].order == 60
    series, solv = derived_series_and_solvability(PermGroup(["(0 1 2 3 4 5)"], n=6))
    assert solv and [H.order for H in series] == [6, 1]


def test_quotients(s4, gl23):
    V = normal_closure(s4, ["(0 1)(2 3)"])
    Q = s4.quotient_map(V)
    assert Q.group.order == 6
    # kernel of the coset action is exactly V
    assert all(Q.image(v).is_identity() for v in V.generators)
    assert quotient_rep(s4, s4).order == 1
    from hallorbits import o_pi

    P = gl23.perm_group
    assert quotient_rep(P, o_pi(P, [2])).order == 6
    with pytest.raises(ValueError):
        quotient_rep(s4, PermGroup(["(0 1)"], n=4))


def test_minimal_normals(s4, a5):
    mins, sep, log = minimal_normals_and_pi_separability(s4, [3])
    assert [M.order for M in mins] == [4] and sep
    a5c7 = direct_product(a5, PermGroup(["(0 1 2 3 4 5 6)"], n=7))
    _, sep, log = minimal_normals_and_pi_separability(a5c7, [7])
    assert sep and sorted(e["order"] for e in log) == [7, 60]
    _, sep, _ = minimal_normals_and_pi_separability(a5, [2])
    assert not sep


def test_membership(s4):
    A4 = PermGroup(["(0 1 2)", "(0 1)(2 3)"], n=4)
    rng = random.Random(3)
    for _ in range(100):
        g = Permutation.identity(4)
        for _ in range(rng.randrange(1, 8)):
            g = g * rng.choice(A4.generators)
        assert g in A4
    assert parse_cycles("(0 1)", 4) not in A4


@pytest.mark.parametrize("gens,n", [
    (["(0 1 2 3 4)", "(0 1)"], 5),
    (["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)"], 7),
    (["(0 1 2)(3 4 5)", "(0 3)(1 4)(2 5)", "(0 1)"], 6),
    (["(0 1 2 3 4 5 6 7)", "(1 7)(2 6)(3 5)"], 8),
])
def test_order_matches_oracles(gens, n):
    G = PermGroup(gens, n=n)
    assert G.order == len(closure(G.generators, n)) == sympy_order(G.generators, n)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.permutations(list(range(7))), min_size=1, max_size=3))
def test_random_groups_match_sympy(perms):
    G = PermGroup([tuple(p) for p in perms], n=7)
    assert G.order == sympy_order(G.generators, 7)
    assert all(g in G for g in G.generators)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.permutations(list(range(6))), min_size=1, max_size=2))
def test_classes_match_brute_force(perms):
    G = PermGroup([tuple(p) for p in perms], n=6)
    brute = brute_classes(closure(G.generators, 6))
    assert sorted(G.classes.sizes) == sorted(len(c) for c in brute)
    assert sum(s * o for s, o in zip(G.classes.sizes, G.classes.orders)) == \
        sum(len(c) * element_order(next(iter(c))) for c in brute)


def test_class_invariant_under_generator_order():
    a = PermGroup(["(0 1 2 3 4 5)", "(1 5)(2 4)", "(0 1)"], n=6)
    b = PermGroup(["(0 1)", "(1 5)(2 4)", "(0 1 2 3 4 5)"], n=6)
    key = lambda G: sum(s * o for s, o in zip(G.classes.sizes, G.classes.orders))
    assert key(a) == key(b)


def test_solvability_inherited(corpus):
    for e in corpus:
        G = e.perm_group()
        if not G.is_solvable() or G.order > 200:
            continue
        for N in G.normal_subgroups():
            assert G.quotient(N).is_solvable()
        assert G.derived_subgroup().is_solvable()


def test_degree_cap():
    set_caps(degree=10)
    with pytest.raises(CapExceeded):
        PermGroup([], n=11)
