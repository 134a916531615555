import random
from fractions import Fraction

import pytest

from awcentralizer.aw_symbolic import (
    A,
    B,
    NCPoly,
    RelationSet,
    Word,
    awbar_k_relations,
    awbar_relations,
    evaluate,
    single,
    tilde_relations,
)
from awcentralizer.errors import NotClosedAtTruncation
from awcentralizer.scalars import qint
from awcentralizer.word_quotient import (
    certify_span,
    dim_upper_bound,
    ideal_member,
    relation_in_ideal,
    truncated_ideal,
    verify_quotient_dimension,
)

H = Fraction(1, 2)
S3 = (Fraction(3, 2),) * 3


@pytest.fixture(scope="module")
def halves():
    return truncated_ideal(awbar_relations((H, H, H)))


def test_idempotent_like_rewrite():
    rels = RelationSet("quad", [single("a_sq", A * A - A.scale(qint(2)))], alphabet="A")
    ideal = truncated_ideal(rels, L=4)
    for p in range(2, 5):
        assert ideal_member(ideal, A**p - A.scale(qint(2) ** (p - 1)))
    assert not ideal_member(ideal, A * A - A)
    assert ideal.dimension_bound == 2


def test_halves_bound_five():
    assert dim_upper_bound(awbar_relations((H, H, H)), L=6) == 5


def test_ones_bound_fifteen():
    assert dim_upper_bound(awbar_relations((1, 1, 1)), L=8, kmax=3) == 15


def test_halves_certificate():
    cert = certify_span(tilde_relations(awbar_relations((H, H, H))), "1 A B AB BA".split())
    assert cert.closed and cert.dimension == 5


def test_ones_candidate_certified():
    words = "1 A B AA AB BA BB AAB ABA ABB BAA BAB AABB ABAB BABA".split()
    cert = certify_span(tilde_relations(awbar_relations((1, 1, 1))), words, exact_action_cap=0)
    assert cert.dimension == 15


def test_top_component_is_scalars():
    rels = awbar_k_relations(S3, Fraction(9, 2))
    assert dim_upper_bound(rels) == 1
    assert certify_span(rels, ["1"]).dimension == 1


def test_seven_halves_component():
    rels = tilde_relations(awbar_k_relations(S3, Fraction(7, 2)))
    assert dim_upper_bound(rels) == 4
    assert [str(w) for w in certify_span(rels, "1 A B AB".split()).basis_words] == ["1", "A", "B", "AB"]


def test_one_half_half_bound_six():
    rels = tilde_relations(awbar_relations((1, H, H)))
    assert dim_upper_bound(rels) == 6
    assert certify_span(rels, "1 A B AB BA ABA".split()).dimension == 6


def test_too_small_candidate_not_closed():
    with pytest.raises(NotClosedAtTruncation) as err:
        certify_span(awbar_relations((H, H, H)), ["1", "A"])
    assert err.value.witness


def test_candidate_must_contain_unit(halves):
    with pytest.raises(ValueError):
        certify_span(halves, ["A", "B"])


def test_zero_is_member(halves):
    assert ideal_member(halves, NCPoly())


def test_letters_are_not_members(halves):
    assert not ideal_member(halves, A)
    assert not ideal_member(halves, A * B - B * A)


def test_random_products_are_members(halves):
    rng = random.Random(11)
    rels = halves.relations.relations
    for _ in range(20):
        u = NCPoly.word(Word(0, "".join(rng.choice("AB") for _ in range(rng.randint(0, 2)))))
        v = NCPoly.word(Word(0, "".join(rng.choice("AB") for _ in range(rng.randint(0, 2)))))
        r = rng.choice(rels[:5])
        assert ideal_member(halves, u * r.expanded * v)


def test_factored_relations_are_members(halves):
    for r in halves.relations:
        assert relation_in_ideal(halves, r), r.name


def test_bound_nonincreasing_in_length():
    rels = awbar_relations((H, H, H))
    bounds = [dim_upper_bound(rels, L=n) for n in (5, 6, 7)]
    assert bounds == sorted(bounds, reverse=True)


def test_action_matrices_satisfy_relations():
    rels = awbar_relations((H, H, H))
    cert = certify_span(rels)
    assert cert.exact_action
    act = cert.action_matrices
    for r in rels:
        m = evaluate(r, {"A": act["A"], "B": act["B"]}, act.get("K"))
        assert m.is_zero(), r.name


def test_action_matrices_in_shifted_letters():
    rels = tilde_relations(awbar_relations((1, H, H)))
    cert = certify_span(rels, "1 A B AB BA ABA".split())
    act = cert.action_matrices
    for r in rels:
        assert evaluate(r, {"A": act["A"], "B": act["B"]}, act.get("K")).is_zero(), r.name


@pytest.mark.parametrize(
    "spins, k, expected",
    [((H, H, H), None, 5), (S3, Fraction(3, 2), 16), (S3, H, 4), ((2, H, H), None, 6)],
)
def test_quotient_reports(spins, k, expected):
    rep = verify_quotient_dimension(spins, k)
    assert rep.passed, rep.details
    assert rep.details["expected"] == expected


def test_wrong_candidate_report_fails():
    rep = verify_quotient_dimension((H, H, H), None, "1 A B")
    assert rep.failed
    assert rep.details["witness"]
