from fractions import Fraction

import pytest
import sympy

from awcentralizer.centralizer import (
    check_centralizer_dim,
    commutant,
    in_commutant,
    naive_c13_commutes,
    sample_points,
    verify_aw_image,
    verify_minimal_polys,
    verify_surjectivity,
)
from awcentralizer.errors import ResourceLimit
from awcentralizer.matrices import ExactMatrix, Mode, check_annihilating
from awcentralizer.quantum_rep import casimir_matrices, delta2_images
from awcentralizer.scalars import SamplePoint, chi
from awcentralizer.spin_combinatorics import m_set

H = Fraction(1, 2)
P = SamplePoint.from_v(Fraction(5, 3))


def sympy_commutant_dim(spins) -> int:
    """Nullspace of [X, M] = 0 over all n^2 entries, solved by sympy at one point."""
    imgs = delta2_images(*spins)
    mats = []
    for x in (imgs.E, imgs.F, imgs.K):
        ev = x.evaluate(P)
        mats.append(sympy.Matrix(x.rows, x.cols, lambda i, j: sympy.Rational(str(ev[i, j]))))
    n = mats[0].rows
    eye = sympy.eye(n)
    system = sympy.Matrix.vstack(*[sympy.kronecker_product(x, eye) - sympy.kronecker_product(eye, x.T) for x in mats])
    return n * n - system.rank()


def test_sample_points_are_deterministic():
    assert [p.value for p in sample_points()] == [p.value for p in sample_points()]
    assert len(sample_points(count=7)) == 7


@pytest.mark.parametrize("t, dim", [((H, H, H), 5), ((1, H, H), 6), ((1, 0, 0), 1)])
def test_commutant_matches_sympy(t, dim):
    assert sympy_commutant_dim(t) == dim
    assert commutant(t).dimension == dim


def test_exact_commutant_halves():
    basis = commutant((H, H, H), Mode.EXACT)
    assert basis.dimension == 5
    for m in basis.basis:
        assert in_commutant(m, (H, H, H))


def test_commutant_is_closed_under_products():
    t = (1, H, H)
    basis = commutant(t, Mode.EXACT).basis
    for a in basis[:3]:
        for b in basis[:3]:
            assert in_commutant(a * b, t)


def test_commutant_contains_casimirs():
    t = (1, H, H)
    c = casimir_matrices(*t)
    for m in (c.C12, c.C23, c.C123, c.C13_0, c.C13_1, ExactMatrix.identity(12)):
        assert in_commutant(m, t)


def test_resource_cap():
    with pytest.raises(ResourceLimit):
        commutant((1, 1, 1), max_dim=10)


@pytest.mark.parametrize("t", [(1, 1, 1), (Fraction(3, 2), H, H)])
def test_centralizer_dim_reports(t):
    rep = check_centralizer_dim(t)
    assert rep.passed
    assert len(set(rep.details["per_sample"])) == 1


@pytest.mark.parametrize("t, dim", [((H, H, H), 5), ((1, 1, 1), 15), ((2, 0, 0), 1)])
def test_surjectivity(t, dim):
    rep = verify_surjectivity(t)
    assert rep.passed
    assert rep.details["generated"][0] == dim


def test_exact_surjectivity_halves():
    assert verify_surjectivity((H, H, H), Mode.EXACT).passed


def test_minimal_polys():
    c = casimir_matrices(H, H, H)
    assert check_annihilating(c.C123, [chi(H), chi(Fraction(3, 2))], minimal=True)
    c1 = casimir_matrices(1, 1, 1)
    roots = m_set(1, 1, 1)
    assert len(roots) == 6
    assert check_annihilating(c1.C123 - c1.C12, roots, minimal=True)
    c2 = casimir_matrices(2, 0, 0)
    assert check_annihilating(c2.C12, [chi(2)], minimal=True)


@pytest.mark.parametrize("t", [(H, H, H), (1, H, H)])
def test_minimal_poly_reports(t):
    rep = verify_minimal_polys(t)
    assert rep.passed
    assert len(rep.details["operators"]) == 9


def test_aw_image_exact():
    rep = verify_aw_image((H, H, H))
    assert rep.passed and rep.mode == "exact"
    assert all(rep.details["vanished"].values())
    assert rep.details["relations"] == 12


def test_aw_image_sampled():
    rep = verify_aw_image((Fraction(3, 2), 1, H), Mode.SAMPLED)
    assert rep.passed
    assert len(rep.samples) == 5


def test_naive_c13_fails_to_commute():
    assert not naive_c13_commutes((H, H, H))
