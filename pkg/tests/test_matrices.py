import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from awcentralizer.matrices import (
    ExactMatrix,
    Mode,
    check_annihilating,
    commutator,
    embed_sites,
    kron,
    nullspace_dim,
    permute_sites,
    qcommutator,
)
from awcentralizer.quantum_rep import casimir_matrices, coproduct_image, irrep
from awcentralizer.scalars import SamplePoint, Scalar, chi, q, qint

H = Fraction(1, 2)
P = SamplePoint.from_v(Fraction(3, 2))


def to_sympy(m: ExactMatrix, p: SamplePoint = P) -> sympy.Matrix:
    ev = m.evaluate(p)
    return sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(str(ev[i, j])))


def commutant_system(ops: list[ExactMatrix]) -> ExactMatrix:
    """Rows of vec([X, M]) = (X (x) I - I (x) X^T) vec(M), stacked over X."""
    n = ops[0].rows
    ident = ExactMatrix.identity(n)
    rows = []
    for x in ops:
        block = kron(x, ident) - kron(ident, x.transpose())
        rows.extend(block.row(i) for i in range(block.rows))
    return ExactMatrix.from_rows(rows)


small = st.lists(st.integers(-3, 3), min_size=4, max_size=4).map(lambda xs: ExactMatrix(2, 2, xs))
qmat = st.lists(st.sampled_from([0, 1, -1, 2]), min_size=4, max_size=4).map(
    lambda xs: ExactMatrix(2, 2, [Scalar(x) * q**k for k, x in enumerate(xs)])
)


def test_kron_of_e_and_f_has_one_entry():
    e, f = irrep(H).E, irrep(H).F
    k = kron(e, f)
    nz = [(r, c) for r in range(4) for c in range(4) if k[r, c]]
    # row (0,1) and column (1,0) in the two-site index
    assert nz == [(1, 2)]


def test_kron_matches_sympy():
    a = ExactMatrix(2, 2, [q, 1, 0, qint(2)])
    b = ExactMatrix(2, 3, [1, q, 2, 0, -1, q.inverse()])
    assert to_sympy(kron(a, b)) == sympy.kronecker_product(to_sympy(a), to_sympy(b))


def test_inverse_and_rank():
    a = ExactMatrix(3, 3, [q, 1, 0, 0, qint(2), 1, 1, 0, q.inverse()])
    assert a * a.inverse() == ExactMatrix.identity(3)
    assert a.rank_exact() == to_sympy(a).rank() == 3
    singular = ExactMatrix(2, 2, [q, qint(2), q * q, q * qint(2)])
    assert singular.rank_exact() == 1


def test_nullspace_dim_of_two_site_commutant_system():
    ops = [coproduct_image(x, H, H) for x in ("E", "F", "qH")]
    system = commutant_system(ops)
    assert nullspace_dim(system) == 2
    assert nullspace_dim(system, Mode.SAMPLED, rng=random.Random(5)) == 2


def test_minimal_annihilator_of_c12():
    c = casimir_matrices(H, H, H)
    assert check_annihilating(c.C12, [chi(0), chi(1)], minimal=True)


def test_non_annihilating_product_is_rejected():
    c = casimir_matrices(H, H, H)
    assert not check_annihilating(c.C123, [chi(H)], minimal=False)


def test_redundant_root_breaks_minimality():
    c = casimir_matrices(H, H, H)
    assert check_annihilating(c.C12, [chi(0), chi(1), chi(2)])
    assert not check_annihilating(c.C12, [chi(0), chi(1), chi(2)], minimal=True)


def test_qcommutator_definition():
    x = ExactMatrix(2, 2, [1, q, 0, 2])
    y = ExactMatrix(2, 2, [0, 1, q, 0])
    assert qcommutator(x, y) == (x * y).scale(q) - (y * x).scale(q.inverse())
    assert commutator(x, x).is_zero()


def test_embed_on_first_two_of_three_sites():
    c2 = coproduct_image("E", H, H)
    assert embed_sites(c2, [1, 2], (2, 2, 2)) == kron(c2, ExactMatrix.identity(2))


def test_embed_on_outer_sites_via_permutation():
    a = irrep(H).E
    b = irrep(1).F
    op = kron(a, b)
    direct = embed_sites(op, [1, 3], (2, 2, 3))
    assert direct == kron(a, ExactMatrix.identity(2), b)


def test_embed_composition():
    # embedding a site-2 operator into (1,2) and then into three sites
    x = irrep(1).E
    ident = ExactMatrix.identity(2)
    inner = embed_sites(x, [2], (2, 3))
    assert embed_sites(inner, [1, 2], (2, 3, 2)) == embed_sites(x, [2], (2, 3, 2))
    assert inner == kron(ident, x)


def test_permute_sites_swaps_kron_factors():
    a, b = irrep(H).E, irrep(1).K
    ab = kron(a, b)
    assert permute_sites(ab, [1, 0]) == kron(b, a)


@given(small, small, small, small)
@settings(max_examples=30)
def test_kron_mixed_product(a, b, c, d):
    assert kron(a, b) * kron(c, d) == kron(a * c, b * d)


@given(qmat, qmat)
@settings(max_examples=30)
def test_transpose_reverses_products(a, b):
    assert (a * b).transpose() == b.transpose() * a.transpose()


@given(qmat)
@settings(max_examples=30)
def test_evaluation_commutes_with_products(a):
    assert (a * a).evaluate(P) == a.evaluate(P) * a.evaluate(P)


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        ExactMatrix(2, 2, [1, 2, 3])
    with pytest.raises(ValueError):
        check_annihilating(ExactMatrix(2, 3), [1])
