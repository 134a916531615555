from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from awcentralizer.errors import PoleAtOne, PoleAtSample
from awcentralizer.scalars import (
    ONE,
    ZERO,
    SamplePoint,
    Scalar,
    chi,
    chi_tilde,
    eval_at,
    limit_q_to_1,
    q,
    qint,
    qpow,
    v,
)

H = Fraction(1, 2)
V = sympy.Symbol("v")
GAP = q - q.inverse()


def sym_qint(n):
    qq = V**2
    return sympy.cancel((qq**n - qq**-n) / (qq - 1 / qq))


def agree(s: Scalar, expr, points=(Fraction(2), Fraction(-3, 7), Fraction(5, 3))):
    for x in points:
        assert s.evaluate_v(x) == Fraction(str(sympy.nsimplify(expr.subs(V, sympy.Rational(x.numerator, x.denominator)))))


coefficient = st.fractions(min_value=-19, max_value=19, max_denominator=7)
laurent = st.dictionaries(st.integers(-6, 6), coefficient, max_size=4).map(Scalar.from_laurent)
nonzero_laurent = st.dictionaries(
    st.integers(-6, 6), coefficient.filter(bool), min_size=1, max_size=4
).map(Scalar.from_laurent)


def test_qint_two_is_q_plus_inverse():
    assert qint(2) == q + q.inverse()


def test_qint_matches_sympy():
    for n in range(-3, 7):
        agree(qint(n), sym_qint(n))


def test_half_integer_qint_matches_sympy():
    # [1/2]_q = (v - v^-1)/(q - q^-1)
    agree(qint(H), sympy.cancel((V - 1 / V) / (V**2 - V**-2)))


def test_eval_of_qint_two_squared_at_three():
    assert eval_at(qint(2) ** 2, SamplePoint(3)) == Fraction(100, 9)


def test_chi_half_is_q2_plus_qm2():
    assert chi(H) == q**2 + q ** -2


@pytest.mark.parametrize("j", [0, H, 1, Fraction(3, 2), 2, Fraction(5, 2)])
def test_chi_tilde_classical_limit(j):
    assert limit_q_to_1(chi_tilde(j)) == j * (j + 1)


@pytest.mark.parametrize("j", [0, H, 1, Fraction(3, 2), 3])
def test_chi_is_affine_image_of_chi_tilde(j):
    assert chi(j) == GAP * GAP * chi_tilde(j) + qint(2)


def test_qpow_half_integer_is_odd_power_of_v():
    assert qpow(H) == v
    assert qpow(Fraction(-3, 2)) == v ** -3


def test_zero_and_one():
    assert ZERO == 0 and ONE == 1
    assert not ZERO
    assert (q - q).is_zero()


def test_forbidden_sample_points():
    for bad in (0, 1, -1):
        with pytest.raises(PoleAtSample):
            SamplePoint(bad)


def test_pole_at_sample_for_vanishing_denominator():
    with pytest.raises(PoleAtSample):
        eval_at(ONE / (q - 2), SamplePoint(2))


def test_pole_at_one():
    with pytest.raises(PoleAtOne):
        limit_q_to_1(ONE / GAP)


def test_canonical_form_cancels_common_factors():
    x = (q**3 - q ** -3) / GAP
    assert x == q**2 + 1 + q ** -2
    assert x.is_laurent()


@given(st.integers(-8, 8))
def test_qint_three_term_recursion(n):
    assert qint(n + 1) + qint(n - 1) == qint(2) * qint(n)


@given(laurent, laurent, laurent)
@settings(max_examples=60)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == ZERO


@given(nonzero_laurent)
@settings(max_examples=40)
def test_inverse(a):
    assert a * a.inverse() == ONE
    assert (a / a) == ONE


@given(laurent, st.fractions(min_value=-5, max_value=5, max_denominator=9).filter(lambda x: x not in (0, 1, -1)))
@settings(max_examples=40)
def test_evaluation_is_a_ring_map(a, x):
    p = SamplePoint.from_v(x)
    b = a * a + qint(3)
    assert eval_at(b, p) == eval_at(a, p) ** 2 + eval_at(qint(3), p)


@given(st.fractions(min_value=-4, max_value=4, max_denominator=6).filter(lambda x: x not in (0, 1, -1)))
def test_even_scalar_reads_point_as_q(x):
    # [2]^2 only has even powers of v, so the point is q itself
    assert eval_at(qint(2), SamplePoint(x)) == x + 1 / x
