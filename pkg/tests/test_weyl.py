from itertools import product

import oracles
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from btstrata.weyl import (
    DiagramKind,
    FiniteWeylGroup,
    InvalidRankError,
    IwahoriWeylElement,
    SignedPermutation,
    bruhat_leq,
    group_for_n,
    length,
    make_group,
    reduced_word,
)

GROUPS = [(k, m) for k in ("OddCBC", "EvenBC") for m in (2, 3)]


@st.composite
def signed_perms(draw, m=4):
    perm = draw(st.permutations(range(1, m + 1)))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=m, max_size=m))
    return SignedPermutation(tuple(s * p for s, p in zip(signs, perm)))


@st.composite
def elements(draw, m=3):
    lam = draw(st.lists(st.integers(-3, 3), min_size=m + 1, max_size=m + 1))
    return IwahoriWeylElement(tuple(lam), draw(signed_perms(m)))


@given(signed_perms(), signed_perms(), signed_perms())
def test_signed_permutation_group_axioms(a, b, c):
    e = SignedPermutation.identity(4)
    assert (a * b) * c == a * (b * c)
    assert a * e == e * a == a
    assert a * a.inverse() == e


def test_signed_permutation_rejects_non_permutation():
    with pytest.raises(ValueError):
        SignedPermutation((1, 1, 3))


@given(elements(), elements(), elements())
def test_semidirect_product_law(x, y, z):
    assert (x * y) * z == x * (y * z)
    # t^lambda w . t^mu v = t^{lambda + w(mu)} (w v)
    moved = x.finite_part.apply(y.lam)
    assert (x * y).lam == tuple(a + b for a, b in zip(x.lam, moved))
    assert (x * y).finite_part == x.finite_part * y.finite_part
    assert x * x.inverse() == IwahoriWeylElement.identity(3)


@pytest.mark.parametrize("kind,m", GROUPS)
def test_length_basics(kind, m):
    g = make_group(kind, m)
    assert g.length(g.identity) == 0
    assert all(g.length(s) == 1 for s in g.simple.values())
    assert g.length(g.tau) == 0


@st.composite
def group_and_element(draw):
    kind, m = draw(st.sampled_from(GROUPS))
    return make_group(kind, m), draw(elements(m))


@settings(max_examples=80, deadline=None)
@given(group_and_element())
def test_length_against_hyperplane_oracle(gx):
    g, x = gx
    assert g.length(x) == oracles.separating_hyperplanes(g.kind.value, g.m, x)
    assert g.length(x) == g.length(x.inverse())


def test_translation_length_golden():
    g = make_group("OddCBC", 3)
    t = g.translation((1, 0, 0), 1)
    assert g.length(t) == oracles.separating_hyperplanes("OddCBC", 3, t) == 6


@pytest.mark.parametrize("kind,m", GROUPS)
def test_omega_elements_preserve_length(kind, m):
    g = make_group(kind, m)
    for x in g.ball(5):
        assert g.length(g.tau * x) == g.length(x)
        assert g.length(x * g.tau) == g.length(x)


@pytest.mark.parametrize("kind,m", GROUPS)
def test_tau_conjugation_matches_tau_action(kind, m):
    g = make_group(kind, m)
    inv = g.tau.inverse()
    for i, s in g.simple.items():
        assert g.tau * s * inv == g.simple[g.tau_action[i]]


@pytest.mark.parametrize("kind,m", GROUPS)
def test_exchange_property(kind, m):
    g = make_group(kind, m)
    for x, lx in g.ball(8 if m == 2 else 6).items():
        for s in g.simple.values():
            assert abs(g.length(s * x) - lx) == 1


@pytest.mark.parametrize("kind,m", GROUPS)
def test_bruhat_matches_subword_oracle(kind, m):
    g = make_group(kind, m)
    elems = [x for x, lx in g.ball(6).items() if lx <= 6]
    elems += [x * g.tau for x in elems]
    for y in elems:
        word, omega = reduced_word(g, y)
        below = oracles.subword_interval(g, word, omega)
        assert below == set(g.lower_interval(y))
        for x in elems:
            assert bruhat_leq(g, x, y) == (x in below)


def test_bruhat_partial_order_on_interval():
    g = make_group("OddCBC", 2)
    top = g.translation((1, 0), 1)
    interval = sorted(g.lower_interval(top), key=g.length)
    leq = {(a, b): g.bruhat_leq(a, b) for a, b in product(interval, repeat=2)}
    for a in interval:
        assert leq[(a, a)]
    for a, b in product(interval, repeat=2):
        if a != b and leq[(a, b)]:
            assert not leq[(b, a)]
    for a, b, c in product(interval[:25], repeat=3):
        if leq[(a, b)] and leq[(b, c)]:
            assert leq[(a, c)]


def test_bruhat_examples():
    g = make_group("OddCBC", 2)
    s0, s1 = g.simple[0], g.simple[1]
    assert g.bruhat_leq(g.identity, s0)
    assert not g.bruhat_leq(s0 * s1, s0)
    assert not g.bruhat_leq(g.identity, g.tau)  # different Omega-components


def test_reduced_word_examples():
    g = make_group("OddCBC", 3)
    assert reduced_word(g, g.identity) == ([], g.identity)
    assert g.reduced_word(g.simple[2] * g.simple[1]) == [2, 1]
    t = make_group("OddCBC", 2).translation((1, 0), 1)
    h = make_group("OddCBC", 2)
    word, omega = h.split_word(t)
    assert h.from_word(word, tail=omega) == t
    assert len(word) == length(h, t)


def test_reduced_word_is_deterministic_smallest_descent():
    g = make_group("EvenBC", 3)
    x = g.from_word([3, 2, 0, 1, 2])
    word = g.reduced_word(x)
    assert word[0] == min(i for i in g.nodes() if g.is_left_descent(x, i))
    assert g.from_word(word) == x


def test_diagrams():
    odd = make_group(DiagramKind.ODD, 3)
    assert odd.nodes() == [0, 1, 2, 3]
    assert odd.edges == {(0, 1): 4, (1, 2): 3, (2, 3): 4}
    assert odd.special_nodes == {0, 3}
    assert odd.tau_action == {i: i for i in range(4)}
    even = make_group(DiagramKind.EVEN, 2)
    assert even.nodes() == [0, 1, 2]
    assert even.edges == {(0, 2): 4, (1, 2): 4}
    even3 = make_group(DiagramKind.EVEN, 3)
    assert even3.edges == {(0, 2): 3, (1, 2): 3, (2, 3): 4}
    assert even3.special_nodes == {0, 1}
    assert even3.tau_action == {0: 1, 1: 0, 2: 2, 3: 3}
    assert even3.sigma_action == {i: i for i in range(4)}


def test_rank_errors():
    with pytest.raises(InvalidRankError):
        make_group("OddCBC", 1)
    with pytest.raises(InvalidRankError):
        group_for_n(2)
    assert group_for_n(3).m == 1  # rank-one odd diagram is used internally for n = 3


def test_finite_weyl_group_orders():
    for d in (2, 3, 4):
        B = FiniteWeylGroup("B", d)
        D = FiniteWeylGroup("D", d)
        assert B.longest_length(B.nodes()) == d * d
        assert D.longest_length(D.nodes()) == d * (d - 1)
        assert D.delta[d] == d - 1
