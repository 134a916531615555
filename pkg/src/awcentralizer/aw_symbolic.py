"""Words, noncommutative polynomials and the Askey-Wilson relation sets.

Letters are single characters.  For the Askey-Wilson algebra they are ``A``
and ``B``; the central generator K is tracked separately as an exponent, so
every monomial is K^kpow times a string of letters.  The structure constants
alpha_i are fixed scalars chi(j_i), never letters.

Relations are kept in factored form (a product of NCPoly factors) because
the annihilating polynomials of D and K - D have high degree and only need to
be expanded when a consumer asks for it.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import flint

from .matrices import ExactMatrix
from .scalars import ONE, ZERO, SamplePoint, Scalar, as_scalar, chi, chi_tilde, eval_at, q, qint
from .spin_combinatorics import SpinTriple, jk_set, m_set, pair_set, s_set, triple_set


@dataclass(frozen=True)
class Word:
    kpow: int = 0
    letters: str = ""

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.kpow + other.kpow, self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def key(self) -> tuple[int, int, str]:
        """Graded order: letter length, then K-degree, then lexicographic."""
        return (len(self.letters), self.kpow, self.letters)

    def __lt__(self, other: "Word") -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        parts = []
        if self.kpow == 1:
            parts.append("K")
        elif self.kpow > 1:
            parts.append(f"K^{self.kpow}")
        if self.letters:
            parts.append(self.letters)
        return "*".join(parts) if parts else "1"

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "1"):
            return cls()
        kpow, letters = 0, text
        if text.startswith("K"):
            head, _, rest = text.partition("*")
            kpow = int(head[2:]) if head.startswith("K^") else 1
            letters = rest
        return cls(kpow, letters)


UNIT = Word()


class NCPoly:
    """Finite linear combination of words with Scalar coefficients; K is central."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        self.terms: dict[Word, Scalar] = {}
        if terms:
            for w, c in terms.items():
                c = as_scalar(c)
                if c:
                    self.terms[w] = c

    @classmethod
    def _raw(cls, terms: dict[Word, Scalar]) -> "NCPoly":
        out = cls.__new__(cls)
        out.terms = terms
        return out

    @classmethod
    def const(cls, c) -> "NCPoly":
        return cls({UNIT: c})

    @classmethod
    def letter(cls, x: str) -> "NCPoly":
        if x == "K":
            return cls({Word(1, ""): ONE})
        return cls({Word(0, x): ONE})

    @classmethod
    def word(cls, w: Word | str, c=1) -> "NCPoly":
        if isinstance(w, str):
            w = Word.parse(w)
        return cls({w: c})

    # -- ring operations --------------------------------------------------
    def __add__(self, other) -> "NCPoly":
        other = _coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "NCPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "NCPoly":
        return _coerce(other) - self

    def scale(self, c) -> "NCPoly":
        c = as_scalar(c)
        if not c:
            return NCPoly()
        return NCPoly._raw({w: x * c for w, x in self.terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return self.scale(other)
        out: dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                t = c1 * c2
                s = out.get(w)
                out[w] = t if s is None else s + t
        return NCPoly._raw({w: c for w, c in out.items() if c})

    def __rmul__(self, other) -> "NCPoly":
        return self.scale(other)

    def __pow__(self, n: int) -> "NCPoly":
        out = NCPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            other = _coerce(other)
        return self.terms == other.terms

    __hash__ = None

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, w: Word | str) -> Scalar:
        if isinstance(w, str):
            w = Word.parse(w)
        return self.terms.get(w, ZERO)

    def words(self) -> list[Word]:
        return sorted(self.terms, key=Word.key)

    def leading_word(self) -> Word:
        return max(self.terms, key=Word.key)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def kdegree(self) -> int:
        return max((w.kpow for w in self.terms), default=0)

    def alphabet(self) -> set[str]:
        return {x for w in self.terms for x in w.letters}

    def monic(self) -> "NCPoly":
        """Scaled so the leading word has coefficient 1."""
        if not self.terms:
            return self
        return self.scale(self.terms[self.leading_word()].inverse())

    def map_coeffs(self, f: Callable[[Scalar], Scalar]) -> "NCPoly":
        return NCPoly({w: f(c) for w, c in self.terms.items()})

    def substitute(
        self, images: Mapping[str, "NCPoly"], k_image: "NCPoly | None" = None
    ) -> "NCPoly":
        """Algebra map sending each letter (and K) to the given polynomial.

        Letters without an image are left unchanged.
        """
        letter_cache: dict[str, NCPoly] = {}

        def image(x: str) -> NCPoly:
            if x not in letter_cache:
                letter_cache[x] = images.get(x, NCPoly.letter(x))
            return letter_cache[x]

        kimg = NCPoly.letter("K") if k_image is None else k_image
        kpows = [NCPoly.const(1)]
        out = NCPoly()
        for w, c in self.terms.items():
            while len(kpows) <= w.kpow:
                kpows.append(kpows[-1] * kimg)
            term = kpows[w.kpow].scale(c)
            for x in w.letters:
                term = term * image(x)
            out = out + term
        return out

    def substitute_k(self, value) -> "NCPoly":
        """Replace the central K by a scalar."""
        value = as_scalar(value)
        out: dict[Word, Scalar] = {}
        for w, c in self.terms.items():
            nw = Word(0, w.letters)
            t = c * value ** w.kpow
            out[nw] = out[nw] + t if nw in out else t
        return NCPoly._raw({w: c for w, c in out.items() if c})

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[w]})*{w}" for w in self.words())

    def __repr__(self) -> str:
        return f"NCPoly({self.to_text()})"


def _coerce(x) -> NCPoly:
    return x if isinstance(x, NCPoly) else NCPoly.const(x)


def qcomm(x: NCPoly, y: NCPoly) -> NCPoly:
    """[X, Y]_q = q XY - q^-1 YX."""
    return (x * y).scale(q) - (y * x).scale(q.inverse())


def anticomm(x: NCPoly, y: NCPoly) -> NCPoly:
    return x * y + y * x


A = NCPoly.letter("A")
B = NCPoly.letter("B")
K = NCPoly.letter("K")
GAP = q - q.inverse()
Q2 = qint(2)


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Relation:
    """The product of ``factors`` is declared zero."""

    name: str
    factors: tuple[NCPoly, ...]

    @functools.cached_property
    def expanded(self) -> NCPoly:
        out = self.factors[0]
        for f in self.factors[1:]:
            out = out * f
        return out

    @property
    def degree(self) -> int:
        return sum(f.degree() for f in self.factors)

    @property
    def kdegree(self) -> int:
        return sum(f.kdegree() for f in self.factors)

    def map(self, f: Callable[[NCPoly], NCPoly], name: str | None = None) -> "Relation":
        return Relation(name or self.name, tuple(f(x) for x in self.factors))


def single(name: str, poly: NCPoly) -> Relation:
    return Relation(name, (poly,))


def product_relation(name: str, x: NCPoly, roots: Iterable) -> Relation:
    """prod (x - r) over the roots."""
    return Relation(name, tuple(x - as_scalar(r) for r in roots))


@dataclass
class RelationSet:
    name: str
    relations: list[Relation]
    spins: SpinTriple | None = None
    k: Fraction | None = None
    alphabet: str = "AB"

    def __iter__(self):
        return iter(self.relations)

    def __len__(self) -> int:
        return len(self.relations)

    def polys(self) -> list[NCPoly]:
        return [r.expanded for r in self.relations]

    def by_name(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def without(self, *names: str) -> "RelationSet":
        return RelationSet(
            self.name, [r for r in self.relations if r.name not in names], self.spins, self.k, self.alphabet
        )

    def plus(self, extra: Sequence[Relation], name: str | None = None) -> "RelationSet":
        return RelationSet(name or self.name, list(self.relations) + list(extra), self.spins, self.k, self.alphabet)

    def to_text(self) -> str:
        lines = [f"# {self.name}"]
        for r in self.relations:
            body = " * ".join(f"[{f.to_text()}]" for f in r.factors)
            lines.append(f"{r.name}: {body} = 0")
        return "\n".join(lines)


def alphas(spins) -> tuple[Scalar, Scalar, Scalar]:
    t = spins if isinstance(spins, SpinTriple) else SpinTriple(*spins)
    return tuple(chi(j) for j in t.as_tuple())


def _structure(al) -> tuple[NCPoly, NCPoly, NCPoly]:
    """(a1 a2 + a3 K, a2 a3 + a1 K, a1 a3 + a2 K)."""
    a1, a2, a3 = al
    return (
        K.scale(a3) + a1 * a2,
        K.scale(a1) + a2 * a3,
        K.scale(a2) + a1 * a3,
    )


def d_poly(al, x: NCPoly = A, y: NCPoly = B) -> NCPoly:
    """D = (a1 a3 + a2 K)/[2] - [X, Y]_q/(q^2 - q^-2)."""
    _, _, s13 = _structure(al)
    return s13.scale(Q2.inverse()) - qcomm(x, y).scale((q * q - q ** -2).inverse())


def d_prime_poly(al) -> NCPoly:
    return d_poly(al, B, A)


def omega_poly(al) -> NCPoly:
    s12, s23, s13 = _structure(al)
    d = d_poly(al)
    return (
        (A * s12).scale(q)
        + (B * s23).scale(q.inverse())
        + (d * s13).scale(q)
        - (A * A).scale(q * q)
        - (B * B).scale(q ** -2)
        - (d * d).scale(q * q)
        - (A * B * d).scale(q)
    )


def omega_value(al) -> NCPoly:
    """chi1^2 + chi2^2 + chi3^2 + K^2 + chi1 chi2 chi3 K - (q + q^-1)^2."""
    a1, a2, a3 = al
    return K * K + K.scale(a1 * a2 * a3) + (a1 * a1 + a2 * a2 + a3 * a3 - Q2 * Q2)


def defining_polys(al) -> tuple[NCPoly, NCPoly]:
    """The two D-free defining relations, multiplied through by (q - q^-1)^2."""
    s12, s23, s13 = _structure(al)
    gap2 = GAP * GAP
    r1 = qcomm(B, qcomm(A, B)) - (A.scale(Q2 * Q2) + s13 * B - s12.scale(Q2)).scale(gap2)
    r2 = qcomm(qcomm(A, B), A) - (B.scale(Q2 * Q2) + s13 * A - s23.scale(Q2)).scale(gap2)
    return r1, r2


def symmetric_presentation(al) -> dict[str, NCPoly]:
    """The D- and D'-based presentations, with D and D' written in A and B.

    Each polynomial vanishes in the algebra; the ones involving D are
    identities once D is expressed through A and B, and those involving D'
    follow from the two defining relations.
    """
    s12, s23, s13 = _structure(al)
    d, dp = d_poly(al), d_prime_poly(al)
    sc = (q * q - q ** -2).inverse()
    return {
        "A_from_BD": A + qcomm(B, d).scale(sc) - s12.scale(Q2.inverse()),
        "B_from_DA": B + qcomm(d, A).scale(sc) - s23.scale(Q2.inverse()),
        "A_from_DpB": A + qcomm(dp, B).scale(sc) - s12.scale(Q2.inverse()),
        "B_from_ADp": B + qcomm(A, dp).scale(sc) - s23.scale(Q2.inverse()),
    }


def _triple(spins) -> SpinTriple:
    return spins if isinstance(spins, SpinTriple) else SpinTriple(*spins)


def aw3_defining_relations(spins) -> RelationSet:
    t = _triple(spins)
    r1, r2 = defining_polys(alphas(t))
    return RelationSet("AW3", [single("def1", r1), single("def2", r2)], t)


def awbar_relations(spins) -> RelationSet:
    """All twelve relations of the quotient at fixed spins, K kept as a letter."""
    t = _triple(spins)
    j1, j2, j3 = t.as_tuple()
    al = alphas(t)
    d, dp = d_poly(al), d_prime_poly(al)
    r1, r2 = defining_polys(al)
    rels = [
        single("def1", r1),
        single("def2", r2),
        product_relation("ann_A", A, [chi(j) for j in pair_set(j1, j2)]),
        product_relation("ann_B", B, [chi(j) for j in pair_set(j2, j3)]),
        product_relation("ann_K", K, [chi(j) for j in triple_set(j1, j2, j3)]),
        product_relation("ann_D", d, [chi(j) for j in pair_set(j1, j3)]),
        product_relation("ann_Dp", dp, [chi(j) for j in pair_set(j1, j3)]),
        product_relation("ann_KA", K - A, m_set(j1, j2, j3)),
        product_relation("ann_KB", K - B, m_set(j2, j3, j1)),
        product_relation("ann_KD", K - d, m_set(j1, j3, j2)),
        product_relation("ann_KDp", K - dp, m_set(j1, j3, j2)),
        single("omega", omega_poly(al) - omega_value(al)),
    ]
    return RelationSet(f"AWbar({t})", rels, t)


def awbar_k_relations(spins, k, include_omega: bool = False) -> RelationSet:
    """Quotient with K = chi_k and degree-d_k annihilators over the S^k sets."""
    t = _triple(spins)
    k = Fraction(k)
    if k not in triple_set(*t.as_tuple()):
        raise ValueError(f"{k} is not in J({t})")
    chik = chi(k)
    al = alphas(t)
    d, dp = (p.substitute_k(chik) for p in (d_poly(al), d_prime_poly(al)))
    r1, r2 = (p.substitute_k(chik) for p in defining_polys(al))
    rels = [
        single("def1", r1),
        single("def2", r2),
        product_relation("ann_A", A, [chi(j) for j in s_set(t, k, (0, 1, 2))]),
        product_relation("ann_B", B, [chi(j) for j in s_set(t, k, (1, 2, 0))]),
        product_relation("ann_D", d, [chi(j) for j in s_set(t, k, (0, 2, 1))]),
        product_relation("ann_Dp", dp, [chi(j) for j in s_set(t, k, (0, 2, 1))]),
    ]
    if include_omega:
        rels.append(single("omega", (omega_poly(al) - omega_value(al)).substitute_k(chik)))
    return RelationSet(f"AWbar^{k}({t})", rels, t, k)


def awbar_jk_relations(spins, k) -> RelationSet:
    """Variant of the K = chi_k quotient with annihilators over the larger J^k sets."""
    t = _triple(spins)
    k = Fraction(k)
    chik = chi(k)
    al = alphas(t)
    d, dp = (p.substitute_k(chik) for p in (d_poly(al), d_prime_poly(al)))
    r1, r2 = (p.substitute_k(chik) for p in defining_polys(al))
    rels = [
        single("def1", r1),
        single("def2", r2),
        product_relation("ann_A", A, [chi(j) for j in jk_set(t, k, (0, 1, 2))]),
        product_relation("ann_B", B, [chi(j) for j in jk_set(t, k, (1, 2, 0))]),
        product_relation("ann_D", d, [chi(j) for j in jk_set(t, k, (0, 2, 1))]),
        product_relation("ann_Dp", dp, [chi(j) for j in jk_set(t, k, (0, 2, 1))]),
    ]
    return RelationSet(f"AWbarJ^{k}({t})", rels, t, k)


# ---------------------------------------------------------------------------
# tilde transform
# ---------------------------------------------------------------------------


def tilde_transform(p: NCPoly, direction: str = "forward", letters: str = "AB") -> NCPoly:
    """Affine change of generators X = (q - q^-1)^2 X~ + q + q^-1.

    ``forward`` rewrites a polynomial in X into one in X~ (same letter
    names); ``backward`` is the inverse substitution.  K is transformed too.
    """
    gap2 = GAP * GAP
    if direction == "forward":
        img = lambda x: NCPoly.letter(x).scale(gap2) + Q2
    elif direction == "backward":
        img = lambda x: (NCPoly.letter(x) - Q2).scale(gap2.inverse())
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return p.substitute({x: img(x) for x in letters}, img("K"))


def tilde_relations(rels: RelationSet) -> RelationSet:
    """The same relations written in the shifted letters A~, B~, K~ (names unchanged)."""
    shifted = [r.map(lambda f: tilde_transform(f, "forward")) for r in rels]
    return RelationSet(rels.name + "~", shifted, rels.spins, rels.k, rels.alphabet)


def tilde_scalar(x: Scalar) -> Scalar:
    """Scalar counterpart of the affine change: (x - q - q^-1)/(q - q^-1)^2."""
    return (as_scalar(x) - Q2) / (GAP * GAP)


# ---------------------------------------------------------------------------
# permutation maps
# ---------------------------------------------------------------------------


def phi1_images(al) -> tuple[dict[str, NCPoly], NCPoly]:
    """A -> B, B -> A, K -> K (alphas permuted by the caller's spin choice)."""
    return {"A": B, "B": A}, K


def phi2_images(al) -> tuple[dict[str, NCPoly], NCPoly]:
    """A -> A, B -> D', K -> K."""
    return {"A": A, "B": d_prime_poly(al)}, K


# ---------------------------------------------------------------------------
# matrix evaluation
# ---------------------------------------------------------------------------


class MatrixEvaluator:
    """Evaluates NCPolys on concrete matrices, caching every word it builds."""

    def __init__(self, images: Mapping[str, ExactMatrix], k_image: ExactMatrix | None = None):
        self.images = dict(images)
        some = next(iter(self.images.values()))
        self.n = some.rows
        self.k_image = k_image
        self.ident = ExactMatrix.identity(self.n)
        self._words: dict[str, ExactMatrix] = {"": self.ident}
        self._kpows: list[ExactMatrix] = [self.ident]

    def letters(self, s: str) -> ExactMatrix:
        m = self._words.get(s)
        if m is None:
            m = self.letters(s[:-1]) * self.images[s[-1]]
            self._words[s] = m
        return m

    def kpow(self, n: int) -> ExactMatrix:
        if n and self.k_image is None:
            raise ValueError("no image for K supplied")
        while len(self._kpows) <= n:
            self._kpows.append(self._kpows[-1] * self.k_image)
        return self._kpows[n]

    def word(self, w: Word) -> ExactMatrix:
        m = self.letters(w.letters)
        return m if w.kpow == 0 else self.kpow(w.kpow) * m

    def poly(self, p: NCPoly) -> ExactMatrix:
        out = ExactMatrix.zeros(self.n)
        for w, c in p.terms.items():
            out = out + self.word(w).scale(c)
        return out

    def relation(self, r: Relation) -> ExactMatrix:
        out = None
        for f in r.factors:
            m = self.poly(f)
            out = m if out is None else out * m
        return out


def evaluate(p: NCPoly | Relation, images: Mapping[str, ExactMatrix], k_image=None) -> ExactMatrix:
    ev = MatrixEvaluator(images, k_image)
    return ev.relation(p) if isinstance(p, Relation) else ev.poly(p)


class SampledEvaluator:
    """Same as :class:`MatrixEvaluator`, but on rational matrices at one sample point."""

    def __init__(self, images: Mapping[str, "flint.fmpq_mat"], point: SamplePoint, k_image=None):
        self.images = dict(images)
        self.point = point
        some = next(iter(self.images.values()))
        self.n = some.nrows()
        self.k_image = k_image
        self.ident = flint.fmpq_mat(self.n, self.n, [int(i == j) for i in range(self.n) for j in range(self.n)])
        self._words: dict[str, flint.fmpq_mat] = {"": self.ident}
        self._kpows = [self.ident]

    def scalar(self, c: Scalar) -> "flint.fmpq":
        f = eval_at(c, self.point)
        return flint.fmpq(f.numerator, f.denominator)

    def letters(self, s: str):
        m = self._words.get(s)
        if m is None:
            m = self.letters(s[:-1]) * self.images[s[-1]]
            self._words[s] = m
        return m

    def word(self, w: Word):
        m = self.letters(w.letters)
        if w.kpow:
            if self.k_image is None:
                raise ValueError("no image for K supplied")
            while len(self._kpows) <= w.kpow:
                self._kpows.append(self._kpows[-1] * self.k_image)
            m = self._kpows[w.kpow] * m
        return m

    def poly(self, p: NCPoly):
        out = flint.fmpq_mat(self.n, self.n)
        for w, c in p.terms.items():
            out = out + self.word(w) * self.scalar(c)
        return out

    def relation(self, r: Relation):
        out = None
        for f in r.factors:
            m = self.poly(f)
            out = m if out is None else out * m
        return out


# ---------------------------------------------------------------------------
# permutation invariance
# ---------------------------------------------------------------------------


def permutation_check(spins, with_membership: bool = True):
    """Check that phi1 and phi2 carry the permuted relation sets into the quotient.

    phi1 (A <-> B) must send the relations of (j3, j2, j1) to zero on
    A = C12, B = C23; phi2 (B -> D') must do the same for (j2, j1, j3).  At
    matrix level this means evaluating the permuted relation sets at
    A = C23, B = C12 and at A = C12, B = C13_1 respectively.  Omega is
    compared through its matrix image and, optionally, modulo the ideal.
    """
    from .quantum_rep import casimir_matrices
    from .report import VerificationReport, matrix_witness, timed
    from .word_quotient import ideal_member, truncated_ideal

    t = _triple(spins)
    j1, j2, j3 = t.as_tuple()
    p1, p2 = SpinTriple(j3, j2, j1), SpinTriple(j2, j1, j3)
    al, al1, al2 = alphas(t), alphas(p1), alphas(p2)
    c = casimir_matrices(j1, j2, j3)
    rep = VerificationReport("permutation-invariance", t.as_tuple())
    with timed(rep):
        ev1 = MatrixEvaluator({"A": c.C23, "B": c.C12}, c.C123)
        ev2 = MatrixEvaluator({"A": c.C12, "B": c.C13_1}, c.C123)
        ev = MatrixEvaluator({"A": c.C12, "B": c.C23}, c.C123)
        mats = {f"phi1:{r.name}": ev1.relation(r) for r in awbar_relations(p1)}
        mats.update({f"phi2:{r.name}": ev2.relation(r) for r in awbar_relations(p2)})
        omega = ev.poly(omega_poly(al))
        mats["phi1(Omega)=Omega"] = ev1.poly(omega_poly(al1)) - omega
        mats["phi2(Omega)=Omega"] = ev2.poly(omega_poly(al2)) - omega
        flags = {}
        for name, m in mats.items():
            flags[name] = m.is_zero()
            if not flags[name] and rep.passed:
                rep.fail(matrix_witness(name, m))
        phi1, _ = phi1_images(al)
        phi2, _ = phi2_images(al)
        flags["phi1(D)=D' (NCPoly)"] = d_poly(al1).substitute(phi1) == d_prime_poly(al)
        if with_membership:
            ideal = truncated_ideal(awbar_relations(t))
            flags["phi1(Omega)-Omega in ideal"] = ideal_member(ideal, omega_poly(al1).substitute(phi1) - omega_poly(al))
            flags["phi2(Omega)-Omega in ideal"] = ideal_member(ideal, omega_poly(al2).substitute(phi2) - omega_poly(al))
        for name, ok in flags.items():
            if not ok and rep.passed:
                rep.fail({"quantity": name, "value": "nonzero"})
        rep.details.update(checks=flags, permuted=[str(p1), str(p2)], convention_id=c.convention_id)
    return rep
