"""Irreducible modules of the quotient algebras.

Two constructions live here:

* the tridiagonal modules on the highest-weight spaces of a fixed total
  spin l, where A = C12 is diagonal and B = C23 is tridiagonal;
* the search over parameters (n, x, y, z) of the (n+1)-dimensional modules
  V_n(a, b, c) of the universal Askey-Wilson algebra, keeping those whose
  central values match the quotient.
"""

from __future__ import annotations

import functools
from collections import Counter
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .aw_symbolic import MatrixEvaluator, awbar_k_relations
from .errors import Unsupported
from .matrices import ExactMatrix
from .quantum_rep import spin
from .scalars import ONE, ZERO, Scalar, chi, q, qint, vpow
from .spin_combinatorics import SpinTriple, s_set, triple_set

HALF = Fraction(1, 2)


def _triple(spins) -> SpinTriple:
    return spins if isinstance(spins, SpinTriple) else SpinTriple(*spins)


# ---------------------------------------------------------------------------
# tridiagonal modules
# ---------------------------------------------------------------------------


@dataclass
class TridiagonalModule:
    spins: SpinTriple
    ell: Fraction
    labels: list[Fraction]
    Amat: ExactMatrix
    Bmat: ExactMatrix
    Kval: Scalar

    @property
    def dim(self) -> int:
        return len(self.labels)


def central_constants(spins, ell) -> tuple[Scalar, Scalar, Scalar]:
    """(a, b, c) = (x1 x2 + x3 xl, x2 x3 + x1 xl, x1 x3 + x2 xl) with x = chi."""
    j1, j2, j3 = _triple(spins).as_tuple()
    c1, c2, c3, cl = chi(j1), chi(j2), chi(j3), chi(ell)
    return c1 * c2 + c3 * cl, c2 * c3 + c1 * cl, c1 * c3 + c2 * cl


def diagonal_alpha(spins, ell, j) -> Scalar:
    """alpha_{j,j} = (c chi_j - b chi_0)/(chi_j^2 - chi_0^2), and chi_{j1} chi_{j3}/chi_0 at j = 0."""
    t = _triple(spins)
    j = spin(j)
    _, b, c = central_constants(t, ell)
    c0 = chi(0)
    if j == 0:
        return chi(t.j1) * chi(t.j3) / c0
    cj = chi(j)
    return (c * cj - b * c0) / (cj * cj - c0 * c0)


def offdiagonal_numerator(spins, ell, j) -> Scalar:
    """prod_i [j - r_i][j + r_i] with r = (j1 - j2, j3 - l, j1 + j2 + 1, l + j3 + 1)."""
    t = _triple(spins)
    j, ell = spin(j), spin(ell)
    num = ONE
    for ri in (t.j1 - t.j2, t.j3 - ell, t.j1 + t.j2 + 1, ell + t.j3 + 1):
        num = num * qint(j - ri) * qint(j + ri)
    return num


def offdiagonal_product(spins, ell, j) -> Scalar:
    """alpha_{j-1,j} alpha_{j,j-1} as the closed product over r_1, ..., r_4."""
    j = spin(j)
    gap = q - q.inverse()
    den = qint(2 * j - 1) * qint(2 * j) * qint(2 * j) * qint(2 * j + 1)
    return offdiagonal_numerator(spins, ell, j) / den * gap ** 4


def tridiagonal_module(spins, ell) -> TridiagonalModule:
    """Module on the span of v_j, j in S^l, ordered by increasing j.

    B v_j = alpha_{j,j-1} v_{j-1} + alpha_{j,j} v_j + alpha_{j,j+1} v_{j+1};
    the basis is scaled so that alpha_{j,j-1} = 1.
    """
    t = _triple(spins)
    ell = spin(ell)
    if ell not in triple_set(*t.as_tuple()):
        raise ValueError(f"{ell} is not in J({t})")
    labels = s_set(t, ell)
    n = len(labels)
    a = ExactMatrix.diag([chi(j) for j in labels])
    b = ExactMatrix.zeros(n)
    for col, j in enumerate(labels):
        b._data[col][col] = diagonal_alpha(t, ell, j)
        if col > 0:
            b._data[col - 1][col] = ONE  # alpha_{j,j-1}
            b._data[col][col - 1] = offdiagonal_product(t, ell, j)  # alpha_{j-1,j}
    return TridiagonalModule(t, ell, labels, a, b, chi(ell))


def boundary_numerators(spins, ell) -> tuple[Scalar, Scalar]:
    """Numerator of the closed product at j_min and at j_max + 1.

    Both vanish, which is what makes the module close up at either end;
    the denominator can itself vanish at j_min = 1/2, hence numerators.
    """
    labels = s_set(spins, ell)
    return offdiagonal_numerator(spins, ell, labels[0]), offdiagonal_numerator(spins, ell, labels[-1] + 1)


def interior_products_nonzero(spins, ell) -> bool:
    """The closed product is nonzero for j_min < j <= j_max (irreducibility)."""
    labels = s_set(spins, ell)
    return all(offdiagonal_product(spins, ell, j) for j in labels[1:])


def recurrence_residuals(mod: TridiagonalModule) -> list[Scalar]:
    """Residual of the second-order recurrence linking diagonal and off-diagonal entries.

    [2j+3] P(j+1) - [2j-1] P(j) - ((c - chi_j alpha_jj) alpha_jj / chi_0 + chi_0 chi_j - a)
    where P(j) = alpha_{j-1,j} alpha_{j,j-1}, with P = 0 outside the module.
    """
    a_c, _, c_c = central_constants(mod.spins, mod.ell)
    c0 = chi(0)
    n = mod.dim
    prod = lambda col: ZERO if col <= 0 or col >= n else mod.Bmat[col, col - 1] * mod.Bmat[col - 1, col]
    out = []
    for col, j in enumerate(mod.labels):
        ajj = mod.Bmat[col, col]
        lhs = qint(2 * j + 3) * prod(col + 1) - qint(2 * j - 1) * prod(col)
        rhs = (c_c - chi(j) * ajj) * ajj / c0 + c0 * chi(j) - a_c
        out.append(lhs - rhs)
    return out


def module_relation_residues(mod: TridiagonalModule, include_omega: bool = True) -> dict[str, bool]:
    """Which relations of the fixed-K quotient vanish on the module."""
    rels = awbar_k_relations(mod.spins, mod.ell, include_omega=include_omega)
    ev = MatrixEvaluator({"A": mod.Amat, "B": mod.Bmat})
    return {r.name: ev.relation(r).is_zero() for r in rels}


# ---------------------------------------------------------------------------
# classification search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationSolution:
    n: int
    x: Fraction
    y: Fraction
    z: Fraction
    ell: Fraction
    family: str

    @property
    def dim(self) -> int:
        return self.n + 1


@functools.lru_cache(maxsize=None)
def chi_any(t: Fraction) -> Scalar:
    """q^(2t+1) + q^-(2t+1) for any half-integer t, negative ones included."""
    e = int(2 * t + 1)
    return vpow(2 * e) + vpow(-2 * e)


def central_equations(spins, ell, n, x, y, z, use_omega: bool = True) -> list[bool]:
    """Whether each central-value equation holds identically in q."""
    j1, j2, j3 = _triple(spins).as_tuple()
    h = Fraction(n, 2)
    cn, cx, cy, cz = chi_any(h), chi_any(x + h), chi_any(y + h), chi_any(z + h)
    c1, c2, c3, cl = chi(j1), chi(j2), chi(j3), chi(ell)
    eqs = [
        cn * cx + cy * cz == c1 * c2 + c3 * cl,
        cn * cy + cz * cx == c2 * c3 + c1 * cl,
        cn * cz + cx * cy == c1 * c3 + c2 * cl,
    ]
    if use_omega:
        lhs = cn * cn + cx * cx + cy * cy + cz * cz + cn * cx * cy * cz
        rhs = c1 * c1 + c2 * c2 + c3 * c3 + cl * cl + c1 * c2 * c3 * cl
        eqs.append(lhs == rhs)
    return eqs


def family_of(s: Fraction, ell: Fraction, n: int, xyz: tuple[Fraction, Fraction, Fraction]) -> str:
    """Closed-form family tag for identical spins s, or 'other'."""
    srt = tuple(sorted(xyz))
    if ell <= s and n == 2 * ell and srt == (s - ell,) * 3:
        return "sol1"
    if ell > s and n == 3 * s - ell and srt == (ell - s,) * 3:
        return "sol2"
    if ell < s and n == s + ell and srt == tuple(sorted((0, 0, s - ell))):
        return "sol3"
    if ell <= s - 1 and n == s - ell - 1 and srt == tuple(sorted((0, 0, s + ell + 1))):
        return "sol4"
    return "other"


def _half_range(lo: Fraction, hi: Fraction) -> list[Fraction]:
    out, x = [], lo
    while x <= hi:
        out.append(x)
        x += HALF
    return out


def n_bound(spins) -> int:
    j1, j2, j3 = _triple(spins).as_tuple()
    return int(min(j1 + j2 - abs(j1 - j2), j2 + j3 - abs(j2 - j3), j1 + j3 - abs(j1 - j3)))


def classify(spins, use_omega: bool = True, max_twice_spin: int = 12) -> list[ClassificationSolution]:
    """All (l, n, x, y, z) within the module bounds that satisfy the central equations."""
    t = _triple(spins)
    j1, j2, j3 = t.as_tuple()
    if max(2 * j for j in t.as_tuple()) > max_twice_spin:
        raise Unsupported(f"spins {t} exceed the search cap 2j <= {max_twice_spin}")
    identical = j1 == j2 == j3
    out = []
    for ell in triple_set(j1, j2, j3):
        for n in range(n_bound(t) + 1):
            xs = _half_range(abs(j1 - j2), j1 + j2 - n)
            ys = _half_range(abs(j2 - j3), j2 + j3 - n)
            zs = _half_range(abs(j1 - j3), j1 + j3 - n)
            for x, y, z in itertools.product(xs, ys, zs):
                if all(central_equations(t, ell, n, x, y, z, use_omega)):
                    fam = family_of(j1, ell, n, (x, y, z)) if identical else "other"
                    out.append(ClassificationSolution(n, x, y, z, ell, fam))
    return out


ALL_FAMILIES = ("sol1", "sol2", "sol3", "sol4")


def expected_families(s, families=ALL_FAMILIES) -> set[tuple]:
    """Every (l, n, x, y, z) of the chosen closed-form families, with permutations."""
    s = spin(s)
    out = set()
    for ell in triple_set(s, s, s):
        cands = []
        if ell <= s:
            cands.append(("sol1", 2 * ell, (s - ell,) * 3))
        if ell > s:
            cands.append(("sol2", 3 * s - ell, (ell - s,) * 3))
        if ell < s:
            cands.append(("sol3", s + ell, (Fraction(0), Fraction(0), s - ell)))
        if ell <= s - 1:
            cands.append(("sol4", s - ell - 1, (Fraction(0), Fraction(0), s + ell + 1)))
        for fam, n, xyz in cands:
            if fam not in families:
                continue
            for perm in set(itertools.permutations(xyz)):
                out.add((ell, int(n), *perm))
    return out


def passes_refined_bounds(s: Fraction, sol: ClassificationSolution) -> bool:
    """Bounds on x, y, z coming from the annihilator of A reduced at K = chi_l."""
    ell, n = sol.ell, sol.n
    if ell <= s:
        lo, hi = s - ell, s + ell - n
    else:
        lo, hi = ell - s, 2 * s - n
    return all(lo <= w <= hi for w in (sol.x, sol.y, sol.z))


def filtered_solutions(spins, use_omega: bool = True) -> list[ClassificationSolution]:
    t = _triple(spins)
    if not t.j1 == t.j2 == t.j3:
        raise Unsupported("the refined bounds are only established for identical spins")
    return [sol for sol in classify(t, use_omega) if passes_refined_bounds(t.j1, sol)]


def filtered_dimension_sum(spins) -> int:
    """Sum of (n+1)^2 over the modules surviving the refined bounds."""
    return sum(sol.dim ** 2 for sol in filtered_solutions(spins))


def dimension_sum_formula(s) -> int:
    m = int(2 * spin(s) + 1)
    return m * (m * m + 1) // 2


# ---------------------------------------------------------------------------
# raw count, informative only
# ---------------------------------------------------------------------------


def _laurent(e: int) -> Counter:
    """q^e + q^-e as an exponent -> coefficient counter."""
    c = Counter()
    c[e] += 1
    c[-e] += 1
    return c


def _lmul(*fs: Counter) -> Counter:
    out = Counter({0: 1})
    for f in fs:
        nxt = Counter()
        for a, ca in out.items():
            for b, cb in f.items():
                nxt[a + b] += ca * cb
        out = nxt
    return out


def _ladd(*fs: Counter) -> dict:
    out = Counter()
    for f in fs:
        out.update(f)
    return {k: v for k, v in out.items() if v}


def raw_solutions(spins, use_omega: bool = True) -> list[tuple[Fraction, int, Fraction, Fraction, Fraction]]:
    """Solutions (l, n, x, y, z) of the central equations with every module bound dropped.

    Domain: l in J(j1, j2, j3), n any integer, x, y, z any integers or
    half-integers.  Writing each chi argument t as e = 2t + 1, chi_t is the
    integer Laurent polynomial q^e + q^-e.  Both sides are sums of products
    with positive leading coefficients, so no cancellation occurs and every
    |e| is at most the q-degree of the right-hand sides; the box searched
    is therefore exhaustive.
    """
    t = _triple(spins)
    j1, j2, j3 = t.as_tuple()
    e1, e2, e3 = (int(2 * j + 1) for j in (j1, j2, j3))
    out = []
    for ell in triple_set(j1, j2, j3):
        el = int(2 * ell + 1)
        c1, c2, c3, cl = (_laurent(e) for e in (e1, e2, e3, el))
        rhs = [
            _ladd(_lmul(c1, c2), _lmul(c3, cl)),
            _ladd(_lmul(c2, c3), _lmul(c1, cl)),
            _ladd(_lmul(c1, c3), _lmul(c2, cl)),
        ]
        rhs_om = _ladd(*(_lmul(c, c) for c in (c1, c2, c3, cl)), _lmul(c1, c2, c3, cl))
        top = max(e1 + e2, e3 + el, e2 + e3, e1 + el, e1 + e3, e2 + el)
        box = range(-top, top + 1)
        for en, ex, ey, ez in itertools.product(box, repeat=4):
            if abs(en) + abs(ex) > top or abs(ey) + abs(ez) > top:
                continue
            if abs(en) + abs(ey) > top or abs(ez) + abs(ex) > top:
                continue
            cn, cx, cy, cz = (_laurent(e) for e in (en, ex, ey, ez))
            lhs = [
                _ladd(_lmul(cn, cx), _lmul(cy, cz)),
                _ladd(_lmul(cn, cy), _lmul(cz, cx)),
                _ladd(_lmul(cn, cz), _lmul(cx, cy)),
            ]
            if lhs != rhs:
                continue
            if use_omega:
                om = _ladd(*(_lmul(c, c) for c in (cn, cx, cy, cz)), _lmul(cn, cx, cy, cz))
                if om != rhs_om:
                    continue
            n = en - 1
            h = Fraction(n, 2)
            out.append((ell, n, *(Fraction(e - 1, 2) - h for e in (ex, ey, ez))))
    return out


def raw_solution_count(spins, use_omega: bool = True) -> int:
    return len(raw_solutions(spins, use_omega))


# ---------------------------------------------------------------------------
# symbolic solution families
# ---------------------------------------------------------------------------
#
# Here the spins and l are independent symbols.  An argument t of chi is an
# affine form in them, stored through e = 2t + 1 as a coefficient tuple
# (one entry per symbol, then the constant).  chi(e) = q^e + q^-e, and
# chi(a) chi(b) = chi(a + b) + chi(a - b), so each side of an equation is a
# multiset of forms up to sign.  For generic values of the symbols distinct
# forms give independent monomials, which makes multiset equality the exact
# criterion for an identity.

Form = tuple


def _fadd(a: Form, b: Form) -> Form:
    return tuple(x + y for x, y in zip(a, b))


def _fneg(a: Form) -> Form:
    return tuple(-x for x in a)


def _fnorm(a: Form) -> Form:
    return max(a, _fneg(a))


def _chi_product(*forms: Form) -> Counter:
    out = Counter({forms[0]: 1})
    for f in forms[1:]:
        nxt = Counter()
        for g, c in out.items():
            nxt[_fadd(g, f)] += c
            nxt[_fadd(g, _fneg(f))] += c
        out = nxt
    return out


def _chi_sum(*products: Counter) -> Counter:
    out = Counter()
    for p in products:
        for f, c in p.items():
            out[_fnorm(f)] += c
    return out


def _symbol_forms(identical: bool) -> tuple[Form, Form, Form, Form]:
    """Forms e = 2j + 1 for (j1, j2, j3, l) over the chosen symbols."""
    if identical:
        s, ell = (2, 0, 1), (0, 2, 1)
        return s, s, s, ell
    return (2, 0, 0, 0, 1), (0, 2, 0, 0, 1), (0, 0, 2, 0, 1), (0, 0, 0, 2, 1)


def symbolic_solutions(identical: bool = True, use_omega: bool = True) -> set[tuple[Form, Form, Form, Form]]:
    """All (e_n, e_x, e_y, e_z) solving the central equations identically in the symbols.

    The first equation forces {e_n +- e_x, e_y +- e_z} to match the four
    forms e1 +- e2, e3 +- e_l up to sign, which leaves finitely many
    candidates; each is then tested against the remaining equations.
    """
    e1, e2, e3, el = _symbol_forms(identical)
    rhs = [
        _chi_sum(_chi_product(e1, e2), _chi_product(e3, el)),
        _chi_sum(_chi_product(e2, e3), _chi_product(e1, el)),
        _chi_sum(_chi_product(e1, e3), _chi_product(e2, el)),
    ]
    rhs_om = _chi_sum(*(_chi_product(e, e) for e in (e1, e2, e3, el)), _chi_product(e1, e2, e3, el))
    targets = [_fadd(e1, e2), _fadd(e1, _fneg(e2)), _fadd(e3, el), _fadd(e3, _fneg(el))]
    half = lambda a, b: tuple(Fraction(x + y, 2) for x, y in zip(a, b))
    found = set()
    for perm in itertools.permutations(targets):
        for signs in itertools.product((1, -1), repeat=4):
            t = [f if sg > 0 else _fneg(f) for f, sg in zip(perm, signs)]
            en, ex = half(t[0], t[1]), half(t[0], _fneg(t[1]))
            ey, ez = half(t[2], t[3]), half(t[2], _fneg(t[3]))
            lhs = [
                _chi_sum(_chi_product(en, ex), _chi_product(ey, ez)),
                _chi_sum(_chi_product(en, ey), _chi_product(ez, ex)),
                _chi_sum(_chi_product(en, ez), _chi_product(ex, ey)),
            ]
            if lhs != rhs:
                continue
            if use_omega:
                om = _chi_sum(*(_chi_product(e, e) for e in (en, ex, ey, ez)), _chi_product(en, ex, ey, ez))
                if om != rhs_om:
                    continue
            found.add((en, ex, ey, ez))
    return found


def symbolic_solution_count(identical: bool = True, use_omega: bool = True) -> int:
    return len(symbolic_solutions(identical, use_omega))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def verify_classification(s, use_omega: bool = True):
    """Surviving solutions equal the closed-form families and their squared dims add up."""
    from .report import VerificationReport, timed
    from .spin_combinatorics import centralizer_dim

    s = spin(s)
    rep = VerificationReport("classify", (s, s, s))
    with timed(rep):
        everything = {(x.ell, x.n, x.x, x.y, x.z) for x in classify((s, s, s), use_omega)}
        sols = filtered_solutions((s, s, s), use_omega)
        found = {(x.ell, x.n, x.x, x.y, x.z) for x in sols}
        expected = expected_families(s, ("sol1", "sol2"))
        total = sum(x.dim ** 2 for x in sols)
        rep.details.update(
            unfiltered_solutions=len(everything),
            unfiltered_match_all_families=everything == expected_families(s),
            solutions=len(found),
            families=dict(Counter(x.family for x in sols)),
            dimension_sum=total,
            formula=dimension_sum_formula(s),
            centralizer_dim=centralizer_dim((s, s, s)),
        )
        extra, missing = sorted(found - expected), sorted(expected - found)
        if extra or missing:
            rep.fail({"unexpected": extra[:3], "missing": missing[:3]})
        elif everything != expected_families(s):
            rep.fail({"quantity": "unfiltered solutions", "value": sorted(everything ^ expected_families(s))[:3]})
        elif not total == dimension_sum_formula(s) == centralizer_dim((s, s, s)):
            rep.fail({"quantity": "dimension_sum", "value": total, "formula": dimension_sum_formula(s)})
    return rep


def verify_tridiagonal_modules(spins, include_omega: bool = True):
    """Every fixed-l tridiagonal module satisfies the relations of the projected quotient."""
    from .report import VerificationReport, timed

    t = _triple(spins)
    rep = VerificationReport("tridiagonal-modules", t.as_tuple())
    with timed(rep):
        per_ell = {}
        for ell in triple_set(*t.as_tuple()):
            mod = tridiagonal_module(t, ell)
            rels = module_relation_residues(mod, include_omega)
            checks = {
                "relations": all(rels.values()),
                "recurrence": not any(recurrence_residuals(mod)),
                "boundary": not any(boundary_numerators(t, ell)),
                "interior_nonzero": interior_products_nonzero(t, ell),
            }
            per_ell[str(ell)] = {"dim": mod.dim, **checks}
            if not all(checks.values()) and rep.passed:
                bad = [k for k, v in rels.items() if not v]
                rep.fail({"ell": str(ell), "failed": [k for k, v in checks.items() if not v], "relations": bad})
        rep.details["modules"] = per_ell
    return rep


def solution_count_report():
    """Informative only: the raw count depends on the search domain."""
    from .report import ADVISORY, VerificationReport, timed

    rep = VerificationReport("classify-raw-count", status=ADVISORY)
    with timed(rep):
        rep.details.update(
            symbolic_identical=symbolic_solution_count(identical=True),
            symbolic_general=symbolic_solution_count(identical=False),
            symbolic_identical_without_omega=symbolic_solution_count(identical=True, use_omega=False),
            raw_unconstrained={str(s): raw_solution_count((s, s, s)) for s in (HALF, Fraction(1), Fraction(3, 2))},
            reference=192,
        )
    return rep
