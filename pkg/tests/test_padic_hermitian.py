import random
from itertools import combinations

import oracles
import pytest
from hypothesis import given
from hypothesis import strategies as st

from btstrata.padic_hermitian import (
    EisensteinRing,
    HermitianLattice,
    NoValidHeight,
    PrecisionExhausted,
    building_space,
    is_split,
    kottwitz_invariant,
    nonsplit_even_space,
    random_unitary,
    random_vertex_lattice,
    reference_lattice,
    split_space,
    standard_lattice,
    vertex_lattices_in_window,
    vertex_type,
)

R = EisensteinRing(3, 1, 16)
digits = st.integers(0, 3**8 - 1)
elems = st.builds(R.element, digits, digits)


@given(elems, elems, elems)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(elems, elems)
def test_conjugation_is_an_involutive_automorphism(x, y):
    assert x.conj().conj() == x
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x * x.conj() == R.element(x.norm())


@given(elems)
def test_units_invert(x):
    if x.is_unit():
        assert x * x.inverse() == R.element(1)
    else:
        assert x.val() >= 1


def test_pi_squared_and_valuations():
    pi = R.element(0, 1)
    assert pi * pi == R.element(3)
    assert pi.conj() == -pi
    assert pi.val() == 1 and R.element(9).val() == 4 and R.element(3, 1).val() == 1


def test_ring_parameter_checks():
    for bad in ((2, 1, 16), (9, 1, 16), (3, 3, 16), (3, 1, 7)):
        with pytest.raises(ValueError):
            EisensteinRing(*bad)


def test_norm_group_has_index_two():
    assert oracles.norm_index_mod_p2(3, 1) == 2
    assert oracles.norm_index_mod_p2(5, 2) == 2


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_standard_chain_duals(n):
    S = split_space(R, n)
    L0 = standard_lattice(S, 0)
    assert L0.dual() == L0
    for i in range(n):
        L = standard_lattice(S, i)
        D = L.dual()
        assert D <= L
        # L subset pi^{-1} L^dual needs pi^{-1} e_1..e_i inside pi^{-1} span(e_1..e_{n-i})
        assert (L <= D.scale_pi(-1)) == (2 * i <= n)
        assert L.length_over(D) == 2 * i
        assert L.dual().dual() == L
    assert standard_lattice(S, n) == L0.scale_pi(-1)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_standard_representative_is_nearly_pi_modular(n):
    S = split_space(R, n)
    m = n // 2
    for i in range(n):
        M = standard_lattice(S, i).dual()
        upper = M.scale_pi(-1)
        nearly = M <= M.dual() <= upper and upper.length_over(M.dual()) == 1
        assert nearly == (i == m)


def test_biduality_random():
    rng = random.Random(7)
    for n in (3, 4, 5):
        space = building_space(R, n)
        for _ in range(15):
            L = random_vertex_lattice(space, rng)
            s, g = random_unitary(space, rng, 2)
            M = L.transform(g, s).scale_pi(rng.randrange(-3, 4))
            assert M.dual().dual() == M


def test_is_split_examples():
    assert is_split(R, split_space(R, 4).gram)
    assert is_split(R, split_space(R, 5).gram)
    assert not is_split(R, nonsplit_even_space(R, 4).gram)
    # odd n: the form c*phi is split for a suitable unit c
    g = split_space(R, 3).gram
    scaled = [[R.mul(R.r(2), x) for x in row] for row in g]
    assert is_split(R, g) != is_split(R, scaled)


@pytest.mark.parametrize("u", [1, 2, 4, 5, 7, 8])
def test_is_split_planes_against_norm_oracle(u):
    norms = {(a * a - 3 * b * b) % 9 for a in range(9) for b in range(9)}
    for c in (1, -1):
        gram = [[(1, 0), (0, 0)], [(0, 0), (c * u, 0)]]
        assert is_split(R, gram) == ((-c * u) % 9 in norms)


def test_is_split_rejects_degenerate_gram():
    with pytest.raises(PrecisionExhausted):
        is_split(R, [[(1, 0), (0, 0)], [(0, 0), (0, 0)]])


def test_json_roundtrip():
    rng = random.Random(3)
    space = building_space(R, 4)
    L = random_vertex_lattice(space, rng)
    again = HermitianLattice.from_json(L.to_json())
    assert again == L and again.volume == L.volume


def test_precision_exhausted():
    small = EisensteinRing(3, 1, 4)
    S = split_space(small, 3)
    one, zero = small.one, small.zero
    rows = [[one, zero, zero], [zero, one, zero], [zero, zero, small.pi_pow(4)]]
    with pytest.raises(PrecisionExhausted):
        HermitianLattice.from_rows(S, rows)
    rows[2][2] = small.pi_pow(3)
    assert HermitianLattice.from_rows(S, rows).volume == 3


@pytest.mark.parametrize("n", [3, 4, 5])
def test_kottwitz_examples(n):
    S = split_space(R, n)
    ref = reference_lattice(S)
    parity = 0 if n % 2 == 0 else None
    assert kottwitz_invariant(ref) == (0, parity)
    assert kottwitz_invariant(ref.scale_pi(1))[0] == 1
    assert kottwitz_invariant(ref.scale_pi(2))[0] == 2
    assert kottwitz_invariant(ref.scale_pi(-1))[0] == -1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_kottwitz_height_matches_index_count(n):
    S = split_space(R, n)
    ref = reference_lattice(S)
    rng = random.Random(n)
    parities = set()
    for _ in range(12):
        s, g = random_unitary(S, rng, 3)
        M = ref.transform(g, s).scale_pi(rng.randrange(-2, 3))
        h, par = kottwitz_invariant(M)
        assert n * h == M.volume - ref.volume
        parities.add(par)
    if n % 2 == 0:
        assert parities == {0, 1}


def test_kottwitz_without_valid_height():
    S = split_space(R, 3)
    # Lambda_0 + pi^{-2} e_1 is not sandwiched for any h
    rows = [[R.one if a == b else R.zero for b in range(3)] for a in range(3)]
    rows[0][0] = R.pi_pow(2)
    M = HermitianLattice.from_rows(S, rows, 2)
    with pytest.raises(NoValidHeight):
        kottwitz_invariant(M)


# --- vertex lattices -----------------------------------------------------------------


def test_vertex_type_examples():
    S = split_space(R, 4)
    L0 = standard_lattice(S, 0)
    assert vertex_type(L0) == 4
    assert vertex_type(standard_lattice(S, 2).dual()) == 0  # pi-modular
    assert vertex_type(standard_lattice(S, 1)) is None


def _sample_pairs(n, rng, count):
    space = building_space(R, n)
    window = vertex_lattices_in_window(space)
    pairs = list(combinations(window, 2))
    rng.shuffle(pairs)
    pairs = pairs[:count]
    # move some pairs by a common unitary and add unrelated random vertex lattices
    for _ in range(count // 4):
        s, g = random_unitary(space, rng, 2)
        a, b = rng.sample(window, 2)
        pairs.append((a.transform(g, s), b.transform(g, s)))
        pairs.append((random_vertex_lattice(space, rng), random_vertex_lattice(space, rng)))
    return pairs


@pytest.mark.parametrize("n", [3, 4, 5])
def test_vertex_poset_properties(n):
    rng = random.Random(100 + n)
    seen_vertex_meet = seen_non_vertex_meet = 0
    for A, B in _sample_pairs(n, rng, 120):
        ta, tb = vertex_type(A), vertex_type(B)
        assert ta % 2 == n % 2 and tb % 2 == n % 2
        if A <= B:
            assert ta <= tb and ((ta == tb) == (A == B))
        if ta == tb and A != B:
            assert not (A <= B) and not (B <= A)
        meet_is_vertex = vertex_type(A.intersection(B)) is not None
        assert meet_is_vertex == (A.dual() <= B.scale_pi(-1))
        seen_vertex_meet += meet_is_vertex
        seen_non_vertex_meet += not meet_is_vertex
    assert seen_vertex_meet and seen_non_vertex_meet


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_existence_spectrum(n):
    space = building_space(R, n)
    rng = random.Random(n)
    lo = 1 if n % 2 else 2
    for t in range(lo, n + 1, 2):
        assert vertex_type(random_vertex_lattice(space, rng, t)) == t
    if n % 2 == 0:
        with pytest.raises(ValueError):
            random_vertex_lattice(space, rng, 0)
