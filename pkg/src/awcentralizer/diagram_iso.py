"""Temperley-Lieb, BMW and one-boundary TL algebras as quotients of AW(3).

Every check works through the shifted generators X~ = (X - [2])/(q - q^-1)^2
of the Casimir matrices.  Three kinds of evidence are collected:

* matrix identities on the triple tensor product, exact over Q(v);
* ideal membership between presentations, decided by :mod:`word_quotient`;
* quotient dimensions: an upper bound certified by a spanning set, matched
  by the sampled rank of the images of that spanning set in the centralizer.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import flint

from .aw_symbolic import (
    GAP,
    Q2,
    A,
    B,
    NCPoly,
    RelationSet,
    SampledEvaluator,
    MatrixEvaluator,
    anticomm,
    awbar_relations,
    single,
    tilde_transform,
)
from .centralizer import sample_points
from .matrices import ExactMatrix
from .quantum_rep import casimir_matrices
from .report import VerificationReport, matrix_witness, timed
from .scalars import ONE, _half, chi_tilde, q, qint
from .word_quotient import (
    TruncatedIdeal,
    certify_span,
    ideal_member,
    relation_in_ideal,
    truncated_ideal,
)

HALF = Fraction(1, 2)
Q3 = qint(3)


@dataclass
class PresentedAlgebra:
    """An algebra given by generators (single letters) and relations."""

    name: str
    generators: dict[str, str]
    relations: RelationSet

    def ideal(self, **kw) -> TruncatedIdeal:
        return truncated_ideal(self.relations, **kw)


def _letter(x: str) -> NCPoly:
    return NCPoly.letter(x)


# ---------------------------------------------------------------------------
# diagram algebras
# ---------------------------------------------------------------------------


def tl3() -> PresentedAlgebra:
    """TL_3(q): S = sigma_1, T = sigma_2."""
    s, t = _letter("S"), _letter("T")
    rels = [
        single("s1_sq", s * s - s.scale(Q2)),
        single("s2_sq", t * t - t.scale(Q2)),
        single("s1s2s1", s * t * s - s),
        single("s2s1s2", t * s * t - t),
    ]
    return PresentedAlgebra("TL3", {"S": "sigma_1", "T": "sigma_2"}, RelationSet("TL3", rels, alphabet="ST"))


BMW_Q = q * q
BMW_MU = BMW_Q * BMW_Q


def bmw_e(s: NCPoly, s_inv: NCPoly) -> NCPoly:
    """e = 1 - (s - s^-1)/(Q - Q^-1)."""
    return ONE - (s - s_inv).scale((BMW_Q - BMW_Q.inverse()).inverse())


def bmw3() -> PresentedAlgebra:
    """BMW_3(q^2, q^4) on letters S, T and their inverses U, V."""
    s, t, u, w = (_letter(x) for x in "STUV")
    mu, mu_inv = BMW_MU, BMW_MU.inverse()
    e1, e2 = bmw_e(s, u), bmw_e(t, w)
    rels = [
        single("s1_inv_r", s * u - ONE),
        single("s1_inv_l", u * s - ONE),
        single("s2_inv_r", t * w - ONE),
        single("s2_inv_l", w * t - ONE),
        single("braid", s * t * s - t * s * t),
        single("e1s1", e1 * s - e1.scale(mu_inv)),
        single("s1e1", s * e1 - e1.scale(mu_inv)),
        single("e2s2", e2 * t - e2.scale(mu_inv)),
        single("s2e2", t * e2 - e2.scale(mu_inv)),
        single("e1s2e1", e1 * t * e1 - e1.scale(mu)),
        single("e1s2inv_e1", e1 * w * e1 - e1.scale(mu_inv)),
        single("e2s1e2", e2 * s * e2 - e2.scale(mu)),
        single("e2s1inv_e2", e2 * u * e2 - e2.scale(mu_inv)),
    ]
    gens = {"S": "s_1", "T": "s_2", "U": "s_1^-1", "V": "s_2^-1"}
    return PresentedAlgebra("BMW3", gens, RelationSet("BMW3", rels, alphabet="STUV"))


def with_letter_multiples(rels: RelationSet) -> RelationSet:
    """Add x*r and r*x for every letter x; same ideal, but rewriting closes."""
    extra = []
    for r in rels:
        for x in rels.alphabet:
            g = _letter(x)
            extra.append(single(f"{x}*{r.name}", g * r.expanded))
            extra.append(single(f"{r.name}*{x}", r.expanded * g))
    return rels.plus(extra)


def _check_j(j) -> Fraction:
    j = _half(j)
    if j < 1:
        raise ValueError(f"the one-boundary case needs j >= 1, got {j}")
    return j


def one_boundary_tl2(j) -> PresentedAlgebra:
    """1bTL_2(q, 2j+1): Z = sigma_0, S = sigma_1."""
    j = _check_j(j)
    z, s = _letter("Z"), _letter("S")
    omega = 2 * j + 1
    rels = [
        single("s0_sq", z * z - z.scale(qint(omega) / qint(omega - 1))),
        single("s1_sq", s * s - s.scale(Q2)),
        single("s1s0s1", s * z * s - s),
    ]
    name = f"1bTL2(omega={omega})"
    return PresentedAlgebra(name, {"Z": "sigma_0", "S": "sigma_1"}, RelationSet(name, rels, alphabet="SZ"))


# ---------------------------------------------------------------------------
# presentations of the quotients in shifted generators (letters A, B mean A~, B~)
# ---------------------------------------------------------------------------


def tl_presentation() -> RelationSet:
    q2, q3 = Q2, Q3
    ab = anticomm(A, B)
    rels = [
        single("a_sq", A * A - A.scale(q2)),
        single("b_sq", B * B - B.scale(q2)),
        single("aba", A * B * A - (ab.scale(q2) - A.scale(q3) - B.scale(q2 * q2) + q2 * q3)),
        single("bab", B * A * B - (ab.scale(q2) - B.scale(q3) - A.scale(q2 * q2) + q2 * q3)),
    ]
    return RelationSet("TL-type presentation", rels, alphabet="AB")


def tl_k_expression() -> NCPoly:
    """K~ = G~ - [1/2]^2 with G~ = -[2](A~ + B~) + {A~, B~} + [2]^2."""
    g = anticomm(A, B) - (A + B).scale(Q2) + Q2 * Q2
    return g - qint(HALF) * qint(HALF)


def one_boundary_presentation(j) -> RelationSet:
    j = _check_j(j)
    cm, cp = chi_tilde(j - HALF), chi_tilde(j + HALF)
    c = qint(j + Fraction(3, 2)) ** 2 + qint(j - HALF) ** 2 - ONE
    ab = anticomm(A, B)
    rels = [
        single("a_sq", A * A - A.scale(cm + cp) + cm * cp),
        single("b_sq", B * B - B.scale(Q2)),
        single("bab", B * A * B - (ab.scale(Q2) - A.scale(Q2 * Q2) - (B - Q2).scale(c))),
    ]
    return RelationSet(f"one-boundary presentation j={j}", rels, spins=None, alphabet="AB")


def one_boundary_k_expression(j) -> NCPoly:
    """K~ = {A~,B~} - (chi~_{j-1/2} + chi~_{j+1/2}) B~ - [2] A~ + (1+[2])([2j+3/2][1/2] + chi~_{j-1/2})."""
    j = _check_j(j)
    cm, cp = chi_tilde(j - HALF), chi_tilde(j + HALF)
    const = (ONE + Q2) * (qint(2 * j + Fraction(3, 2)) * qint(HALF) + cm)
    return anticomm(A, B) - B.scale(cm + cp) - A.scale(Q2) + const


# ---------------------------------------------------------------------------
# shared machinery
# ---------------------------------------------------------------------------


def tilde_matrix(m: ExactMatrix) -> ExactMatrix:
    return (m - Q2).scale((GAP * GAP).inverse())


@functools.lru_cache(maxsize=None)
def tilde_generators(spins: tuple) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    c = casimir_matrices(*spins)
    return tilde_matrix(c.C12), tilde_matrix(c.C23), tilde_matrix(c.C123)


def _first_nonzero(checks: dict[str, ExactMatrix]):
    """Record which matrices vanish; return (flags, witness of the first that does not)."""
    flags, witness = {}, None
    for name, m in checks.items():
        flags[name] = m.is_zero()
        if not flags[name] and witness is None:
            witness = matrix_witness(name, m)
    return flags, witness


def _relation_residues(rels: RelationSet, images: dict[str, ExactMatrix], prefix: str) -> dict[str, ExactMatrix]:
    ev = MatrixEvaluator(images)
    return {f"{prefix}:{r.name}": ev.relation(r) for r in rels}


def presentation_equivalence(aw_rels: RelationSet, presentation: RelationSet, k_expr: NCPoly) -> dict[str, bool]:
    """Two-way ideal membership between the AW quotient and a presentation in A~, B~.

    Forward: each presentation relation, rewritten in the unshifted letters,
    lies in the AW ideal.  Backward: each AW relation, shifted and with K~
    replaced by ``k_expr``, lies in the presentation ideal, and so do the
    commutators of ``k_expr`` with both generators.
    """
    aw_ideal = truncated_ideal(aw_rels)
    pres_ideal = truncated_ideal(presentation)
    out = {}
    for r in presentation:
        out[f"to_aw:{r.name}"] = ideal_member(aw_ideal, tilde_transform(r.expanded, "backward"))
    for r in aw_rels:
        shifted = r.map(lambda f: tilde_transform(f, "forward").substitute({}, k_expr))
        out[f"from_aw:{r.name}"] = relation_in_ideal(pres_ideal, shifted)
    out["from_aw:K_central_A"] = ideal_member(pres_ideal, k_expr * A - A * k_expr)
    out["from_aw:K_central_B"] = ideal_member(pres_ideal, k_expr * B - B * k_expr)
    return out


def substitution_equivalence(
    source: RelationSet, target: RelationSet, forward: dict[str, NCPoly], backward: dict[str, NCPoly]
) -> dict[str, bool]:
    """Relations mapped each way land in the other ideal, and the maps compose to the identity."""
    src_ideal, tgt_ideal = truncated_ideal(source), truncated_ideal(target)
    out = {}
    for r in source:
        out[f"forward:{r.name}"] = relation_in_ideal(tgt_ideal, r.map(lambda f: f.substitute(forward)))
    for r in target:
        out[f"backward:{r.name}"] = relation_in_ideal(src_ideal, r.map(lambda f: f.substitute(backward)))
    for x in forward:
        out[f"round_trip:{x}"] = forward[x].substitute(backward) == _letter(x)
    return out


def image_rank(words, images: dict[str, ExactMatrix], k_image: ExactMatrix | None = None, seed: int = 0xA3) -> int:
    """Rank of the matrix images of ``words`` at one rational sample.

    Specialising can only lower rank, so this is a lower bound for the
    dimension of their span over Q(v).
    """
    point = sample_points(seed, 1)[0]
    mats = {x: m.evaluate(point) for x, m in images.items()}
    kmat = None if k_image is None else k_image.evaluate(point)
    ev = SampledEvaluator(mats, point, kmat)
    rows = []
    for w in words:
        m = ev.word(w)
        rows.append([m[i, j] for i in range(m.nrows()) for j in range(m.ncols())])
    return flint.fmpq_mat(rows).rank()


def _dimension_check(rels: RelationSet, candidate, images, k_image=None) -> dict[str, int]:
    cert = certify_span(rels, candidate)
    return {"spanning_set": cert.dimension, "image_rank": image_rank(cert.basis_words, images, k_image)}


def _finish(report: VerificationReport, checks: dict, expected_dim: int) -> VerificationReport:
    dims = report.details.get("dimensions", {})
    for side, d in dims.items():
        if d["spanning_set"] != expected_dim or d["image_rank"] != expected_dim:
            return report.fail({"quantity": f"dimension:{side}", "value": d, "expected": expected_dim})
    for group in ("membership", "mapping"):
        for name, ok in report.details.get(group, {}).items():
            if not ok:
                return report.fail({"quantity": f"{group}:{name}", "value": "not in ideal"})
    if checks.get("witness") is not None:
        return report.fail(checks["witness"])
    return report


# ---------------------------------------------------------------------------
# Temperley-Lieb
# ---------------------------------------------------------------------------

TL_SPINS = (HALF, HALF, HALF)


def verify_tl_presentation() -> VerificationReport:
    report = VerificationReport("presentation-tl", TL_SPINS)
    with timed(report):
        mem = presentation_equivalence(awbar_relations(TL_SPINS), tl_presentation(), tl_k_expression())
        report.details["membership"] = mem
        _finish(report, {}, 0)
    return report


def verify_tl_iso(with_membership: bool = True) -> VerificationReport:
    report = VerificationReport("iso-tl", TL_SPINS)
    with timed(report):
        at, bt, kt = tilde_generators(TL_SPINS)
        s1, s2 = Q2 - at, Q2 - bt
        tl = tl3()
        mats = _relation_residues(tl.relations, {"S": s1, "T": s2}, "TL")
        mats.update(_relation_residues(tl_presentation(), {"A": at, "B": bt}, "presentation"))
        mats["K_elimination"] = MatrixEvaluator({"A": at, "B": bt}).poly(tl_k_expression()) - kt
        mats["round_trip:A"] = (Q2 - s1) - at
        mats["round_trip:B"] = (Q2 - s2) - bt
        flags, witness = _first_nonzero(mats)
        report.details["matrix"] = flags

        report.details["mapping"] = substitution_equivalence(
            tl_presentation(),
            tl.relations,
            {"A": Q2 - _letter("S"), "B": Q2 - _letter("T")},
            {"S": Q2 - A, "T": Q2 - B},
        )
        if with_membership:
            report.details["membership"] = presentation_equivalence(
                awbar_relations(TL_SPINS), tl_presentation(), tl_k_expression()
            )
        c = casimir_matrices(*TL_SPINS)
        report.details["dimensions"] = {
            "aw": _dimension_check(awbar_relations(TL_SPINS), ["1", "A", "B", "AB", "BA"], {"A": c.C12, "B": c.C23}, c.C123),
            "diagram": _dimension_check(tl.relations, ["1", "S", "T", "ST", "TS"], {"S": s1, "T": s2}),
        }
        _finish(report, {"witness": witness}, 5)
    return report


# ---------------------------------------------------------------------------
# Birman-Murakami-Wenzl
# ---------------------------------------------------------------------------

BMW_SPINS = (Fraction(1), Fraction(1), Fraction(1))


def bmw_s_from_tilde(x: ExactMatrix) -> ExactMatrix:
    """s = q^-2 [2]^-2 X~^2 - q^-2 [2]^-1 (2 + q^-2) X~ + q^-4."""
    qi2 = (q * q).inverse()
    return (x * x).scale(qi2 / (Q2 * Q2)) - x.scale(qi2 / Q2 * (2 + qi2)) + qi2 * qi2


def bmw_tilde_from(s: ExactMatrix, e: ExactMatrix) -> ExactMatrix:
    """X~ = [2](s - q^-2 e) + [2]^2 q^-1."""
    return (s - e.scale((q * q).inverse())).scale(Q2) + Q2 * Q2 * q.inverse()


def bmw_images() -> dict[str, ExactMatrix]:
    at, bt, _ = tilde_generators(BMW_SPINS)
    s1, s2 = bmw_s_from_tilde(at), bmw_s_from_tilde(bt)
    return {"S": s1, "T": s2, "U": s1.inverse(), "V": s2.inverse()}


def verify_bmw_iso() -> VerificationReport:
    report = VerificationReport("iso-bmw", BMW_SPINS)
    with timed(report):
        at, bt, _ = tilde_generators(BMW_SPINS)
        imgs = bmw_images()
        s1, s2, u1, u2 = imgs["S"], imgs["T"], imgs["U"], imgs["V"]
        n = s1.rows
        ident = ExactMatrix.identity(n)
        ev = MatrixEvaluator(imgs)
        e1 = ev.poly(bmw_e(_letter("S"), _letter("U")))
        e2 = ev.poly(bmw_e(_letter("T"), _letter("V")))
        alg = bmw3()
        mats = _relation_residues(alg.relations, imgs, "BMW")
        mats["invertible:s1"] = s1 * u1 - ident
        mats["invertible:s2"] = s2 * u2 - ident
        mats["round_trip:A"] = bmw_tilde_from(s1, e1) - at
        mats["round_trip:B"] = bmw_tilde_from(s2, e2) - bt
        flags, witness = _first_nonzero(mats)
        report.details["matrix"] = flags

        c = casimir_matrices(*BMW_SPINS)
        report.details["dimensions"] = {
            "aw": _dimension_check(awbar_relations(BMW_SPINS), None, {"A": c.C12, "B": c.C23}, c.C123),
            "diagram": _dimension_check(with_letter_multiples(alg.relations), None, imgs),
        }
        _finish(report, {"witness": witness}, 15)
    return report


# ---------------------------------------------------------------------------
# one-boundary Temperley-Lieb
# ---------------------------------------------------------------------------


def one_boundary_spins(j) -> tuple[Fraction, Fraction, Fraction]:
    return (_check_j(j), HALF, HALF)


def verify_1btl_presentation(j) -> VerificationReport:
    spins = one_boundary_spins(j)
    report = VerificationReport("presentation-1btl", spins)
    with timed(report):
        report.details["membership"] = presentation_equivalence(
            awbar_relations(spins), one_boundary_presentation(j), one_boundary_k_expression(j)
        )
        _finish(report, {}, 0)
    return report


def verify_1btl_iso(j, with_membership: bool = True) -> VerificationReport:
    spins = one_boundary_spins(j)
    j = spins[0]
    report = VerificationReport("iso-1btl", spins)
    with timed(report):
        at, bt, kt = tilde_generators(spins)
        top, width = chi_tilde(j + HALF), qint(2 * j)
        s0 = (top - at).scale(width.inverse())
        s1 = Q2 - bt
        alg = one_boundary_tl2(j)
        pres = one_boundary_presentation(j)
        mats = _relation_residues(alg.relations, {"Z": s0, "S": s1}, "1bTL")
        mats.update(_relation_residues(pres, {"A": at, "B": bt}, "presentation"))
        mats["K_elimination"] = MatrixEvaluator({"A": at, "B": bt}).poly(one_boundary_k_expression(j)) - kt
        mats["round_trip:A"] = (top - s0.scale(width)) - at
        mats["round_trip:B"] = (Q2 - s1) - bt
        flags, witness = _first_nonzero(mats)
        report.details["matrix"] = flags
        report.details["sigma0_coefficient"] = str(qint(2 * j + 1) / qint(2 * j))

        report.details["mapping"] = substitution_equivalence(
            pres,
            alg.relations,
            {"A": top - _letter("Z").scale(width), "B": Q2 - _letter("S")},
            {"Z": (top - A).scale(width.inverse()), "S": Q2 - B},
        )
        if with_membership:
            report.details["membership"] = presentation_equivalence(
                awbar_relations(spins), pres, one_boundary_k_expression(j)
            )
        c = casimir_matrices(*spins)
        report.details["dimensions"] = {
            "aw": _dimension_check(
                awbar_relations(spins), ["1", "A", "B", "AB", "BA", "ABA"], {"A": c.C12, "B": c.C23}, c.C123
            ),
            "diagram": _dimension_check(alg.relations, ["1", "Z", "S", "ZS", "SZ", "ZSZ"], {"Z": s0, "S": s1}),
        }
        _finish(report, {"witness": witness}, 6)
    return report
