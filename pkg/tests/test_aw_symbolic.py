from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from awcentralizer.aw_symbolic import (
    GAP,
    A,
    B,
    K,
    NCPoly,
    Word,
    alphas,
    aw3_defining_relations,
    awbar_k_relations,
    awbar_relations,
    d_poly,
    d_prime_poly,
    defining_polys,
    evaluate,
    omega_poly,
    omega_value,
    permutation_check,
    phi1_images,
    qcomm,
    symmetric_presentation,
    tilde_relations,
    tilde_transform,
)
from awcentralizer.errors import PoleAtOne
from awcentralizer.matrices import ExactMatrix
from awcentralizer.quantum_rep import casimir_matrices
from awcentralizer.scalars import chi, limit_q_to_1, q, qint
from awcentralizer.word_quotient import ideal_member

H = Fraction(1, 2)
Q2 = qint(2)

words = st.text(alphabet="AB", max_size=3)
polys = st.lists(
    st.tuples(st.integers(0, 1), words, st.integers(-3, 3)), max_size=3
).map(lambda ts: sum((NCPoly({Word(k, w): c}) for k, w, c in ts), NCPoly()))


def images(c):
    return {"A": c.C12, "B": c.C23}


def classical_spin_matrices(j):
    """Standard su(2) spin-j matrices (Jx, Jy, Jz) over the rationals and i."""
    n = int(2 * j + 1)
    ms = [sympy.Rational(j) - k for k in range(n)]
    jp = sympy.zeros(n)
    for k in range(1, n):
        m = ms[k]
        jp[k - 1, k] = sympy.sqrt((j - m) * (j + m + 1))
    jm = jp.T
    return (jp + jm) / 2, (jp - jm) / (2 * sympy.I), sympy.diag(*ms)


def classical_casimirs(spins):
    mats = [classical_spin_matrices(j) for j in spins]
    eye = [sympy.eye(int(2 * j + 1)) for j in spins]

    def site(op, k):
        factors = [op if i == k else eye[i] for i in range(3)]
        return sympy.kronecker_product(*factors)

    total = [[site(mats[k][a], k) for k in range(3)] for a in range(3)]

    n = total[0][0].rows

    def cas(sites):
        out = sympy.zeros(n)
        for a in range(3):
            comp = sympy.zeros(n)
            for k in sites:
                comp += total[a][k]
            out += comp * comp
        return out

    return cas((0, 1)), cas((1, 2)), cas((0, 1, 2))


def eval_classical(p: NCPoly, a, b, k):
    n = a.rows
    out = sympy.zeros(n)
    for w, c in p.terms.items():
        m = k**w.kpow
        for x in w.letters:
            m = m * (a if x == "A" else b)
        c = c.constant_value()
        out += sympy.Rational(c.numerator, c.denominator) * m
    return sympy.simplify(out)


def q_to_one(p: NCPoly) -> NCPoly:
    """Leading q -> 1 part: divide by the largest power of q - 1/q with a finite limit."""
    last = None
    for n in range(12):
        try:
            last = NCPoly({w: limit_q_to_1(c) for w, c in p.scale((GAP**n).inverse()).terms.items()})
        except PoleAtOne:
            break
    return last


@given(polys, polys, polys)
@settings(max_examples=40, deadline=None)
def test_ncpoly_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x - x == NCPoly()


@given(polys)
@settings(max_examples=30, deadline=None)
def test_k_is_central(x):
    assert K * x == x * K


def test_word_parsing_round_trip():
    for text in ("1", "A", "K*AB", "K^3*BBA"):
        assert str(Word.parse(text)) == text


def test_defining_relations_vanish_on_casimirs():
    c = casimir_matrices(H, H, H)
    for r in aw3_defining_relations((H, H, H)):
        assert evaluate(r, images(c), c.C123).is_zero()


def test_awbar_relation_count():
    assert len(awbar_relations((1, H, H))) == 12


@pytest.mark.parametrize("t", [(H, H, H), (1, 1, 1), (Fraction(3, 2), 1, H)])
def test_awbar_relations_vanish(t):
    c = casimir_matrices(*t)
    for r in awbar_relations(t):
        assert evaluate(r, images(c), c.C123).is_zero(), r.name


def test_omega_image_identity():
    t = (1, 1, 1)
    c = casimir_matrices(*t)
    lhs = evaluate(omega_poly(alphas(t)), images(c), c.C123)
    rhs = c.C1 * c.C1 + c.C2 * c.C2 + c.C3 * c.C3 + c.C123 * c.C123 + c.C1 * c.C2 * c.C3 * c.C123
    rhs = rhs - ExactMatrix.identity(rhs.rows).scale(Q2 * Q2)
    assert lhs == rhs
    assert evaluate(omega_value(alphas(t)), images(c), c.C123) == rhs


def test_d_images_are_conjugated_c13():
    t = (1, H, H)
    c = casimir_matrices(*t)
    al = alphas(t)
    assert evaluate(d_poly(al), images(c), c.C123) == c.C13_0
    assert evaluate(d_prime_poly(al), images(c), c.C123) == c.C13_1


def test_d_minus_d_prime():
    al = alphas((H, 1, Fraction(3, 2)))
    diff = (qcomm(B, A) - qcomm(A, B)).scale((q * q - q**-2).inverse())
    assert d_poly(al) - d_prime_poly(al) == diff


def test_phi1_exchanges_defining_relations():
    t = (Fraction(3, 2), 1, H)
    swap, _ = phi1_images(alphas(t))
    r1, r2 = defining_polys(alphas(t))
    s1, s2 = defining_polys(alphas(t[::-1]))
    assert s1.substitute(swap) == r2
    assert s2.substitute(swap) == r1


def test_phi1_sends_d_to_d_prime():
    t = (1, H, H)
    swap, _ = phi1_images(alphas(t))
    assert d_poly(alphas(t[::-1])).substitute(swap) == d_prime_poly(alphas(t))


def test_tilde_of_a_letter():
    assert tilde_transform(A) == A.scale(GAP * GAP) + Q2


@given(polys)
@settings(max_examples=30, deadline=None)
def test_tilde_round_trip(p):
    assert tilde_transform(tilde_transform(p, "forward"), "backward") == p


def test_tilde_round_trip_on_defining_relation():
    r1, _ = defining_polys(alphas((H, H, H)))
    assert tilde_transform(tilde_transform(r1), "backward") == r1


def test_tilde_relations_keep_names():
    rels = awbar_relations((H, H, H))
    assert [r.name for r in tilde_relations(rels)] == [r.name for r in rels]


def test_tilde_transform_rejects_bad_direction():
    with pytest.raises(ValueError):
        tilde_transform(A, "sideways")


@pytest.mark.parametrize("t", [(H, H, H), (1, H, H)])
def test_classical_limit_is_a_racah_relation(t):
    a, b, k = classical_casimirs(t)
    for r in defining_polys(alphas(t)):
        lim = q_to_one(tilde_transform(r))
        assert lim is not None and not lim.is_zero()
        # cubic part is a double commutator
        cubic = {str(w): c.constant_value() for w, c in lim.terms.items() if len(w) == 3}
        assert sorted(cubic.values()) == [-1, -1, 2]
        assert eval_classical(lim, a, b, k) == sympy.zeros(a.rows)


def test_alternative_presentation_in_ideal():
    t = (H, H, H)
    rels = aw3_defining_relations(t).plus(awbar_relations(t).relations[2:5])
    for name, p in symmetric_presentation(alphas(t)).items():
        assert ideal_member(rels, p), name


def test_k_quotient_forces_constants():
    s = Fraction(3, 2)
    rels = awbar_k_relations((s, s, s), Fraction(9, 2))
    assert rels.by_name("ann_A").factors == (A - chi(3),)
    assert rels.by_name("ann_B").factors == (B - chi(3),)


def test_k_quotient_annihilator_degree():
    s = Fraction(3, 2)
    for k, d in ((Fraction(7, 2), 2), (Fraction(5, 2), 3), (Fraction(3, 2), 4), (H, 2)):
        rels = awbar_k_relations((s, s, s), k)
        for name in ("ann_A", "ann_B", "ann_D", "ann_Dp"):
            assert len(rels.by_name(name).factors) == d
    two = awbar_k_relations((s, s, s), Fraction(7, 2)).by_name("ann_A")
    assert two.factors == (A - chi(2), A - chi(3))


def test_k_quotient_rejects_missing_label():
    with pytest.raises(ValueError):
        awbar_k_relations((H, H, H), 1)


def test_relation_set_text_is_deterministic():
    a = awbar_relations((1, H, H)).to_text()
    assert a == awbar_relations((1, H, H)).to_text()
    assert a.count("\n") == 12


@pytest.mark.parametrize("t", [(H, H, H), (1, H, H), (H, 1, H)])
def test_permutation_check(t):
    rep = permutation_check(t, with_membership=t == (H, H, H))
    assert rep.passed, rep.details
