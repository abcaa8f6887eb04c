import pytest
from hypothesis import given
from hypothesis import strategies as st

from hallorbits import NotPiSeparable, PermGroup, PiSet, hall_subgroup, o_pi, o_pi_prime, o_pi_prime_pi, pi_part
from hallorbits.pisets import nonempty_subsets, parse_pi
from hallorbits.radicals import conjugate_in
from oracles import brute_o_pi, closure


def test_pi_part_examples():
    assert pi_part(48, [2]) == 16
    assert pi_part(48, [3]) == 3
    assert pi_part(360, [2, 5]) == 40
    assert pi_part(7, [2]) == 1
    with pytest.raises(ValueError):
        pi_part(0, [2])


@given(st.integers(1, 10**6), st.sets(st.sampled_from([2, 3, 5, 7, 11]), min_size=1))
def test_pi_part_splits(n, primes):
    pi = PiSet.of(primes)
    a = pi_part(n, pi)
    assert n % a == 0
    assert pi.is_pi_number(a) and pi.is_pi_prime_number(n // a)


def test_piset_parsing():
    assert parse_pi("{2, 3}") == PiSet((2, 3))
    assert PiSet.of(5).primes == (5,)
    assert str(PiSet.of([3, 2])) == "2,3"
    with pytest.raises(ValueError):
        parse_pi("")
    with pytest.raises(ValueError):
        PiSet((2, 4))
    assert PiSet.of([2]).complement(60) == PiSet((3, 5))
    assert len(nonempty_subsets([2, 3, 5, 7])) == 15


def test_cores_gl23(gl23):
    P = gl23.perm_group
    assert o_pi(P, [2]).order == 8
    assert o_pi(P, [3]).order == 1
    assert o_pi_prime(P, [3]).order == 8
    assert o_pi_prime_pi(P, [3]).order == 24
    assert o_pi_prime_pi(P, [2]).order == 8


def test_cores_s4(s4):
    assert o_pi(s4, [3]).order == 1
    assert o_pi(s4, [2]).order == 4
    assert o_pi_prime_pi(s4, [3]).order == 12
    assert o_pi(s4, [2, 3]).order == 24


def _small_groups(corpus):
    for e in corpus:
        G = e.perm_group()
        if G.order <= 72 and G.n <= 27:
            yield e.name, G


def test_o_pi_against_brute_force(corpus):
    checked = 0
    for name, G in _small_groups(corpus):
        els = closure(G.generators, G.n)
        for p in sorted({p for p in (2, 3, 5, 7) if G.order % p == 0}):
            pi = PiSet.of([p])
            O = o_pi(G, pi)
            brute = brute_o_pi(els, G.n, pi.is_pi_number)
            assert O.order == len(brute), (name, p)
            assert all(g in O for g in brute)
            checked += 1
    assert checked >= 20


def test_o_pi_is_normal_pi_subgroup(corpus):
    for name, G in _small_groups(corpus):
        for pi in nonempty_subsets([p for p in (2, 3, 5, 7) if G.order % p == 0]):
            O = o_pi(G, pi)
            assert pi.is_pi_number(O.order)
            assert G.is_normal_subgroup(O)
            assert O.order <= o_pi_prime_pi(G, pi).order


@pytest.mark.parametrize("gens,n,pi,order", [
    (["(0 1 2 3)", "(0 1)"], 4, [2], 8),
    (["(0 1 2 3)", "(0 1)"], 4, [3], 3),
    (["(0 1 2 3)", "(0 1)"], 4, [2, 3], 24),
    (["(0 1 2)", "(3 4 5 6 7)", "(8 9)"], 10, [3, 5], 15),
    (["(0 1 2 3 4 5 6)", "(1 2 4)(3 6 5)"], 7, [3], 3),
])
def test_hall_orders(gens, n, pi, order):
    G = PermGroup(gens, n=n)
    H = hall_subgroup(G, pi)
    assert H.order == order
    assert all(h in G for h in H.generators)


def test_hall_gl23(gl23):
    P = gl23.perm_group
    assert hall_subgroup(P, [2], name="GL23").order == 16
    assert hall_subgroup(P, [3], name="GL23").order == 3


def test_hall_conjugacy_across_seeds(s4, gl23):
    for G, pi in [(s4, [2]), (s4, [3]), (gl23.perm_group, [2]), (PermGroup(["(0 1 2)(3 4 5)", "(0 3)(1 4)(2 5)", "(0 1)"], n=6), [2])]:
        hs = [hall_subgroup(G, pi, seed=s) for s in range(4)]
        for H in hs[1:]:
            assert conjugate_in(G, hs[0], H) is not None


def test_hall_deterministic(gl23):
    P = gl23.perm_group
    a = hall_subgroup(P, [2], seed=3, name="x")
    b = hall_subgroup(P, [2], seed=3, name="x")
    assert a.generators == b.generators


def test_not_separable(a5):
    with pytest.raises(NotPiSeparable):
        hall_subgroup(a5, [2])
    # a nonabelian simple pi-group is not a solvable pi-factor
    with pytest.raises(NotPiSeparable):
        hall_subgroup(a5, [2, 3, 5])


def test_conjugate_in_rejects_different_orders(s4):
    assert conjugate_in(s4, PermGroup(["(0 1)"], n=4), PermGroup(["(0 1 2)"], n=4)) is None
