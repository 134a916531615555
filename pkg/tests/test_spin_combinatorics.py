from collections import Counter
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from awcentralizer.scalars import chi
from awcentralizer.spin_combinatorics import (
    SpinTriple,
    all_orderings,
    build_sets,
    centralizer_dim,
    degeneracies,
    jk_set,
    m_set,
    pair_set,
    s_set,
    triple_set,
)

H = Fraction(1, 2)
half_spins = st.integers(0, 6).map(lambda n: Fraction(n, 2))


def weight_multiplicities(t) -> dict:
    """Spin multiplicities from the weight diagram of the triple product."""
    weights = Counter()
    for a in range(int(2 * t[0]) + 1):
        for b in range(int(2 * t[1]) + 1):
            for c in range(int(2 * t[2]) + 1):
                weights[sum(t) - Fraction(a + b + c)] += 1
    return {m: weights[m] - weights[m + 1] for m in weights if m >= 0 and weights[m] > weights[m + 1]}


def test_pair_and_triple_sets_for_halves():
    assert pair_set(H, H) == [0, 1]
    assert triple_set(H, H, H) == [H, Fraction(3, 2)]


def test_pair_set_with_half():
    j = Fraction(5, 2)
    assert pair_set(j, H) == [j - H, j + H]


def test_m_set_for_ones():
    expected = {chi(1) - chi(2), chi(0) - chi(1), chi(0) - chi(0), chi(1) - chi(0), chi(2) - chi(1), chi(3) - chi(2)}
    got = m_set(1, 1, 1)
    assert set(got) == expected
    assert len(got) == 6


def test_s_sets_for_halves():
    t = (H, H, H)
    assert s_set(t, Fraction(3, 2)) == [1]
    assert s_set(t, H) == [0, 1]


def test_degeneracy_of_one_in_ones():
    assert len(s_set((1, 1, 1), 1)) == 3


def test_s_set_rejects_missing_label():
    with pytest.raises(ValueError):
        s_set((H, H, H), 2)
    with pytest.raises(ValueError):
        jk_set((H, H, H), 0)


def test_jk_set_for_halves():
    assert jk_set((H, H, H), Fraction(3, 2)) == [1]


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_jk_extra_element_for_integer_spin(s):
    for ell in triple_set(s, s, s):
        extra = set(jk_set((s, s, s), ell)) - set(s_set((s, s, s), ell))
        if ell < Fraction(s, 2):
            assert extra == {ell}
        assert set(s_set((s, s, s), ell)) <= set(jk_set((s, s, s), ell))


@pytest.mark.parametrize("s", [H, Fraction(3, 2), Fraction(5, 2)])
def test_jk_equals_s_for_half_integer_spin(s):
    for ell in triple_set(s, s, s):
        assert jk_set((s, s, s), ell) == s_set((s, s, s), ell)


@pytest.mark.parametrize(
    "t, dim",
    [((H, H, H), 5), ((1, 1, 1), 15), ((Fraction(3, 2),) * 3, 34), ((1, H, H), 6), ((2, H, H), 6), ((5, H, H), 6)],
)
def test_centralizer_dims(t, dim):
    assert centralizer_dim(t) == dim


@given(half_spins, half_spins, half_spins)
@settings(max_examples=60, deadline=None)
def test_degeneracies_match_weight_diagram(a, b, c):
    assert degeneracies((a, b, c)) == weight_multiplicities((a, b, c))


@given(half_spins, half_spins, half_spins)
@settings(max_examples=60, deadline=None)
def test_dimension_count(a, b, c):
    total = sum((2 * ell + 1) * d for ell, d in degeneracies((a, b, c)).items())
    assert total == (2 * a + 1) * (2 * b + 1) * (2 * c + 1)


@given(half_spins, half_spins, half_spins)
@settings(max_examples=40, deadline=None)
def test_orderings_agree(a, b, c):
    t = SpinTriple(a, b, c)
    j123 = triple_set(a, b, c)
    for perm in permutations((a, b, c)):
        assert triple_set(*perm) == j123
    for ell in j123:
        sizes = {len(s_set(t, ell, o)) for o in all_orderings()}
        assert len(sizes) == 1
    assert set(m_set(a, b, c)) == set(m_set(b, a, c))


@given(half_spins, half_spins)
def test_pair_set_size(a, b):
    assert len(pair_set(a, b)) == 2 * min(a, b) + 1


@pytest.mark.parametrize("n", range(1, 9))
def test_identical_spin_dimension_formula(n):
    s = Fraction(n, 2)
    assert centralizer_dim((s, s, s)) == (n + 1) * ((n + 1) ** 2 + 1) // 2


def test_build_sets_fields():
    sets = build_sets((1, H, H))
    assert sets.J12 == [H, Fraction(3, 2)]
    assert sets.J23 == [0, 1]
    assert sets.J123 == [0, 1, 2]
    assert sets.degeneracies == {0: 1, 1: 2, 2: 1}
    for m in (sets.M123, sets.M231, sets.M132):
        assert len(m) == len(set(m))


def test_invalid_triple():
    with pytest.raises(ValueError):
        SpinTriple(Fraction(1, 3), 0, 0)
