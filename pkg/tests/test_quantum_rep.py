from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from awcentralizer.matrices import ExactMatrix, check_annihilating, commutator, kron
from awcentralizer.quantum_rep import (
    casimir,
    casimir_matrices,
    coproduct_image,
    delta2_image,
    irrep,
    linear_relation_limit,
    rmatrix,
    tensor,
    verify_classical_limit,
    verify_r_contract,
    ybe_holds,
)
from awcentralizer.scalars import SamplePoint, chi, eval_at, q, qint, v

H = Fraction(1, 2)
spins = st.sampled_from([0, H, 1, Fraction(3, 2), 2])
P = SamplePoint.from_v(Fraction(3, 2))


def eigen_multiplicities(m: ExactMatrix) -> dict:
    ev = m.evaluate(P)
    sm = sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(str(ev[i, j])))
    return sm.eigenvals()


def test_trivial_irrep():
    r = irrep(0)
    assert r.E.is_zero() and r.F.is_zero()
    assert r.K == ExactMatrix.identity(1)


def test_spin_half_irrep():
    r = irrep(H)
    assert r.E == ExactMatrix(2, 2, [0, 1, 0, 0])
    assert r.K == ExactMatrix.diag([v, v.inverse()])


def test_spin_half_casimir():
    assert casimir(irrep(H)) == ExactMatrix.identity(2).scale(q**2 + q ** -2)


def test_invalid_spin():
    with pytest.raises(ValueError):
        irrep(Fraction(1, 3))
    with pytest.raises(ValueError):
        irrep(-1)


@given(spins)
@settings(max_examples=10, deadline=None)
def test_irrep_relations(j):
    r = irrep(j)
    n = r.dim
    assert r.K * r.E == (r.E * r.K).scale(q)
    assert r.K * r.F == (r.F * r.K).scale(q.inverse())
    # [E, F] = [2H]_q acts as [2m]_q on weight m
    ms = [j - i for i in range(n)]
    assert commutator(r.E, r.F) == ExactMatrix.diag([qint(2 * m) for m in ms])
    assert casimir(r) == ExactMatrix.identity(n).scale(chi(j))


def test_coproduct_grouplike():
    r1, r2 = irrep(H), irrep(1)
    assert coproduct_image("qH", H, 1) == kron(r1.K, r2.K)


def test_coproduct_with_trivial_left_factor():
    assert coproduct_image("E", 0, 1) == irrep(1).E


def test_coproduct_is_homomorphism_on_commutator():
    e, f = coproduct_image("E", H, H), coproduct_image("F", H, H)
    k, kinv = coproduct_image("qH", H, H), coproduct_image("qHinv", H, H)
    # [2H]_q = (K^2 - K^-2)/(q - q^-1)
    rhs = (k * k - kinv * kinv).scale((q - q.inverse()).inverse())
    assert commutator(e, f) == rhs


def test_unknown_generator():
    with pytest.raises(ValueError):
        coproduct_image("X", H, H)


def test_delta2_coassociative():
    for x in ("E", "F", "qH"):
        assert delta2_image(x, H, H, H, "left") == delta2_image(x, H, H, H, "right")
    assert delta2_image("E", H, 1, H, "left") == delta2_image("E", H, 1, H, "right")


def test_delta2_trivial_and_grouplike():
    assert delta2_image("E", 0, 0, 0).is_zero()
    assert delta2_image("qH", H, 1, H) == kron(irrep(H).K, irrep(1).K, irrep(H).K)


def test_c123_with_trivial_factors():
    c = casimir_matrices(Fraction(3, 2), 0, 0)
    assert c.C123 == ExactMatrix.identity(4).scale(chi(Fraction(3, 2)))


def test_c12_eigenvalues_for_three_halves():
    c = casimir_matrices(H, H, H)
    mult = eigen_multiplicities(c.C12)
    expected = {sympy.Rational(str(eval_at(chi(j), P))): m for j, m in ((0, 2), (1, 6))}
    assert mult == expected


def test_conjugated_c13_annihilated_over_pair_set():
    c = casimir_matrices(H, H, H)
    for m in (c.C13_0, c.C13_1):
        assert check_annihilating(m, [chi(0), chi(1)], minimal=True)


@pytest.mark.parametrize("t", [(H, H, H), (1, H, H), (H, 1, Fraction(3, 2))])
def test_casimirs_centralize(t):
    c = casimir_matrices(*t)
    for x in ("E", "F", "qH"):
        d = delta2_image(x, *t)
        for m in (c.C12, c.C23, c.C13_0, c.C13_1):
            assert commutator(m, d).is_zero()
    for m in (c.C12, c.C23, c.C13_0, c.C13_1):
        assert commutator(c.C123, m).is_zero()


def test_naive_c13_does_not_centralize():
    c = casimir_matrices(H, H, H)
    assert not commutator(c.C13, delta2_image("E", H, H, H)).is_zero()


def test_rmatrix_trivial_factor():
    assert rmatrix(0, 1).mat == ExactMatrix.identity(3)


@pytest.mark.parametrize("pair", [(H, H), (1, H), (H, 1), (1, 1), (Fraction(3, 2), H)])
def test_rmatrix_intertwines(pair):
    r = rmatrix(*pair)
    a, b = irrep(pair[0]), irrep(pair[1])
    plain = tensor(a, b)
    # opposite coproduct = flipped factors of the plain one
    for x, y in (("E", a.E), ("F", a.F)):
        opp = kron(a.Kinv, b.get(x)) + kron(y, b.K)
        assert plain.get(x) * r.mat == r.mat * opp
    assert r.mat * r.inv == ExactMatrix.identity(r.mat.rows)


def test_yang_baxter():
    assert ybe_holds(H, H, H)
    assert ybe_holds(1, H, H)


def test_cross_checks_on_casimirs():
    c = casimir_matrices(1, H, H, cross_check=True)
    assert c.consistency and all(c.consistency.values())


def test_classical_limit_of_linear_relation():
    lim = linear_relation_limit(H, H, H)
    assert all(x == 0 for row in lim for x in row)
    assert verify_classical_limit(1, H, H).passed


def test_r_contract_report():
    rep = verify_r_contract(H, H, H)
    assert rep.passed
    assert rep.details["convention_id"]
