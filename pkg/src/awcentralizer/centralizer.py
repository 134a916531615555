"""The centralizer of the diagonal U_q(sl2) action on a triple tensor product.

The commutant is computed directly from the commutation systems with E, F
and q^H.  Every operator commuting with q^H preserves total weight, so the
unknowns are restricted to weight-diagonal blocks from the start.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint

from .aw_symbolic import MatrixEvaluator, SampledEvaluator, awbar_relations
from .errors import PoleAtSample, ResourceLimit
from .matrices import ExactMatrix, Mode, check_annihilating, commutator, nullspace_vectors
from .quantum_rep import casimir_matrices, d_matrices, delta2_images, weights
from .report import FAIL, VerificationReport, matrix_witness, timed
from .scalars import ONE, ZERO, SamplePoint, Scalar, chi, eval_at, q, random_sample_points
from .spin_combinatorics import SpinTriple, build_sets, centralizer_dim

DEFAULT_SEED = 0xA3
DEFAULT_SAMPLES = 5
MAX_PRODUCT_DIM = 4096
EXACT_DIM_LIMIT = 64
CLOSURE_ROUNDS = 10
RANK_PRIME = 2**61 - 1


def _triple(spins) -> SpinTriple:
    return spins if isinstance(spins, SpinTriple) else SpinTriple(*spins)


def sample_points(seed: int = DEFAULT_SEED, count: int = DEFAULT_SAMPLES, bound: int = 40) -> list[SamplePoint]:
    """Deterministic sample points for SAMPLED mode checks."""
    return random_sample_points(random.Random(seed), count, bound)


def _to_fmpq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


def _identity(n: int) -> flint.fmpq_mat:
    return flint.fmpq_mat(n, n, [int(i == j) for i in range(n) for j in range(n)])


# ---------------------------------------------------------------------------
# commutant
# ---------------------------------------------------------------------------


@dataclass
class CommutantBasis:
    spins: SpinTriple
    basis: list[ExactMatrix]
    mode: Mode
    samples: list[SamplePoint]
    sampled_dims: list[int]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def total_weights(spins) -> list[Fraction]:
    t = _triple(spins)
    w1, w2, w3 = (weights(j) for j in t.as_tuple())
    return [a + b + c for a in w1 for b in w2 for c in w3]


def _weight_unknowns(spins) -> list[tuple[int, int]]:
    tw = total_weights(spins)
    return [(i, j) for i in range(len(tw)) for j in range(len(tw)) if tw[i] == tw[j]]


def _commutation_rows(unknowns, ops, value):
    """Rows of the linear system [X, M] = 0 in the weight-block unknowns.

    ``ops`` are the nonzero-row lists of each X; ``value`` maps an entry to
    the working field.  Returns a list of sparse rows {unknown index: coeff}.
    """
    col_of = {u: k for k, u in enumerate(unknowns)}
    by_row: dict[int, list[int]] = {}
    by_col: dict[int, list[int]] = {}
    for i, j in unknowns:
        by_row.setdefault(i, []).append(j)
        by_col.setdefault(j, []).append(i)
    rows = []
    for x_rows in ops:
        x_cols: dict[int, list[tuple[int, object]]] = {}
        for a, row in enumerate(x_rows):
            for c, val in row:
                x_cols.setdefault(c, []).append((a, val))
        eqs: dict[tuple[int, int], dict[int, object]] = {}
        # (X M)_{ab} = sum_c X_{ac} M_{cb}
        for (c, b), k in col_of.items():
            for a, val in x_cols.get(c, ()):
                d = eqs.setdefault((a, b), {})
                d[k] = d[k] + value(val) if k in d else value(val)
        # -(M X)_{ab} = -sum_c M_{ac} X_{cb}
        for a, row in enumerate(x_rows):
            for c, val in row:
                for a2 in by_col.get(a, ()):
                    k = col_of[(a2, a)]
                    d = eqs.setdefault((a2, c), {})
                    d[k] = d[k] - value(val) if k in d else -value(val)
        rows.extend(eqs.values())
    return rows


def _rref_nullspace(mat: flint.fmpq_mat) -> list[list[flint.fmpq]]:
    r, rank = mat.rref()
    ncols = mat.ncols()
    pivots = []
    for i in range(rank):
        for j in range(ncols):
            if r[i, j] != 0:
                pivots.append(j)
                break
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        vec = [flint.fmpq(0)] * ncols
        vec[f] = flint.fmpq(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -r[i, f]
        basis.append(vec)
    return basis


def _sampled_commutant(spins, point: SamplePoint, unknowns) -> list[list[flint.fmpq]]:
    imgs = delta2_images(*_triple(spins).as_tuple())
    ops = [imgs.E.nonzero_rows(), imgs.F.nonzero_rows()]
    rows = _commutation_rows(unknowns, ops, lambda s: _to_fmpq(eval_at(s, point)))
    rows = [r for r in rows if any(v != 0 for v in r.values())]
    m = flint.fmpq_mat(max(len(rows), 1), len(unknowns))
    for i, r in enumerate(rows):
        for k, val in r.items():
            m[i, k] = val
    return _rref_nullspace(m)


def _exact_commutant(spins, unknowns) -> list[list[Scalar]]:
    imgs = delta2_images(*_triple(spins).as_tuple())
    ops = [imgs.E.nonzero_rows(), imgs.F.nonzero_rows()]
    rows = _commutation_rows(unknowns, ops, lambda s: s)
    dense = []
    for r in rows:
        vec = [ZERO] * len(unknowns)
        for k, val in r.items():
            vec[k] = val
        if any(vec):
            dense.append(vec)
    return nullspace_vectors(dense, len(unknowns))


def commutant(
    spins,
    mode: Mode | str = Mode.SAMPLED,
    points: Sequence[SamplePoint] | None = None,
    max_dim: int = MAX_PRODUCT_DIM,
) -> CommutantBasis:
    """Basis of the operators commuting with the diagonal E, F and q^H.

    SAMPLED mode solves the system at every sample point and requires the
    nullspace dimensions to agree; the basis returned is the one at the
    first point, as constant matrices.
    """
    t = _triple(spins)
    mode = Mode(mode)
    dims = t.dims
    n = dims[0] * dims[1] * dims[2]
    if n > max_dim:
        raise ResourceLimit(f"product dimension {n} exceeds the cap {max_dim}")
    unknowns = _weight_unknowns(t)

    def to_matrix(vec) -> ExactMatrix:
        m = ExactMatrix.zeros(n, site_dims=dims)
        for (i, j), x in zip(unknowns, vec):
            if x:
                m._data[i][j] = x if isinstance(x, Scalar) else Scalar(Fraction(int(x.p), int(x.q)))
        return m

    if mode is Mode.EXACT:
        vecs = _exact_commutant(t, unknowns)
        return CommutantBasis(t, [to_matrix(v) for v in vecs], mode, [], [len(vecs)])
    points = list(points) if points is not None else sample_points()
    dims_seen = []
    first = None
    for p in points:
        vecs = _sampled_commutant(t, p, unknowns)
        dims_seen.append(len(vecs))
        if first is None:
            first = vecs
    if len(set(dims_seen)) != 1:
        raise ArithmeticError(f"commutant dimension differs between samples: {dims_seen}")
    return CommutantBasis(t, [to_matrix(v) for v in first], mode, points, dims_seen)


def check_centralizer_dim(spins, points: Sequence[SamplePoint] | None = None) -> VerificationReport:
    t = _triple(spins)
    points = list(points) if points is not None else sample_points()
    rep = VerificationReport("centralizer-dim", t.as_tuple(), mode="sampled", samples=[p.value for p in points])
    with timed(rep):
        expected = centralizer_dim(t)
        try:
            basis = commutant(t, Mode.SAMPLED, points)
        except ArithmeticError as exc:
            return rep.fail(str(exc))
        rep.details.update(expected=expected, dimension=basis.dimension, per_sample=basis.sampled_dims)
        if basis.dimension != expected:
            rep.fail({"dimension": basis.dimension, "expected": expected})
    return rep


# ---------------------------------------------------------------------------
# surjectivity
# ---------------------------------------------------------------------------


class _ExactSpan:
    def __init__(self, n: int):
        self.n = n
        self.members: list[ExactMatrix] = []
        self._rows: list[list[Scalar]] = []
        self._pivots: list[int] = []

    def add(self, m: ExactMatrix) -> bool:
        vec = [x for row in m._data for x in row]
        for piv, row in zip(self._pivots, self._rows):
            c = vec[piv]
            if c:
                vec = [a - c * b if b else a for a, b in zip(vec, row)]
        piv = next((k for k, x in enumerate(vec) if x), None)
        if piv is None:
            return False
        inv = vec[piv].inverse()
        self._rows.append([x * inv if x else x for x in vec])
        self._pivots.append(piv)
        self.members.append(m)
        return True

    def __len__(self) -> int:
        return len(self.members)


def generated_dimension(gens: list, span, rounds: int = CLOSURE_ROUNDS) -> tuple[int, int]:
    """Dimension of the unital algebra generated by ``gens`` (exact matrices).

    ``span`` must already contain the identity.  Each round multiplies the
    newly added elements by every generator on both sides.  Returns
    (dimension, rounds used).
    """
    fresh = [g for g in gens if span.add(g)]
    for r in range(1, rounds + 1):
        if not fresh:
            return len(span), r - 1
        new = []
        for x in fresh:
            for g in gens:
                for prod in (x * g, g * x):
                    if span.add(prod):
                        new.append(prod)
        fresh = new
    return len(span), rounds


def _fmpq_to_nmod(m: flint.fmpq_mat, prime: int) -> flint.nmod_mat:
    rows, cols = m.nrows(), m.ncols()
    out = flint.nmod_mat(rows, cols, prime)
    for i in range(rows):
        for j in range(cols):
            x = m[i, j]
            if x != 0:
                out[i, j] = int(x.p) * pow(int(x.q), -1, prime) % prime
    return out


def sampled_generated_dimension(
    gens: list[flint.fmpq_mat],
    support: list[tuple[int, int]],
    rounds: int = CLOSURE_ROUNDS,
    prime: int = RANK_PRIME,
) -> tuple[int, int]:
    """Counterpart of :func:`generated_dimension` for matrices at a sample point.

    The rational matrices are reduced modulo a large prime before the span
    computations.  Ranks can only drop under this reduction, so the result
    is a lower bound for the dimension over Q at the sample point.
    Elements are flattened onto ``support`` (entries outside it must
    vanish, e.g. off the weight blocks); the span is kept as the rows of a
    reduced echelon form, which are themselves elements of the algebra.
    """
    n = gens[0].nrows()
    gens = [_fmpq_to_nmod(g, prime) for g in gens]

    def flatten(ms):
        out = flint.nmod_mat(len(ms), len(support), prime)
        for r, m in enumerate(ms):
            for k, (i, j) in enumerate(support):
                out[r, k] = m[i, j]
        return out

    def unflatten(mat, r):
        m = flint.nmod_mat(n, n, prime)
        for k, (i, j) in enumerate(support):
            m[i, j] = mat[r, k]
        return m

    ident = flint.nmod_mat(n, n, [int(i == j) for i in range(n) for j in range(n)], prime)
    ech, rank = flatten([ident] + gens).rref()
    members = [unflatten(ech, r) for r in range(rank)]
    for r in range(1, rounds + 1):
        candidates = members + [x * g for x in members for g in gens] + [g * x for x in members for g in gens]
        ech, new_rank = flatten(candidates).rref()
        if new_rank == rank:
            return rank, r - 1
        rank = new_rank
        members = [unflatten(ech, i) for i in range(rank)]
    return rank, rounds


def verify_surjectivity(
    spins, mode: Mode | str = Mode.SAMPLED, points: Sequence[SamplePoint] | None = None
) -> VerificationReport:
    """Dimension of the algebra generated by C12, C23, C123 against the centralizer."""
    t = _triple(spins)
    mode = Mode(mode)
    points = list(points) if points is not None else sample_points()
    rep = VerificationReport("surjectivity", t.as_tuple(), mode=mode.value)
    with timed(rep):
        expected = centralizer_dim(t)
        cas = casimir_matrices(*t.as_tuple())
        n = cas.C12.rows
        gens = [cas.C12, cas.C23, cas.C123]
        if mode is Mode.EXACT:
            span = _ExactSpan(n)
            span.add(ExactMatrix.identity(n))
            dim, used = generated_dimension(gens, span)
            found = [dim]
        else:
            rep.samples = [p.value for p in points]
            found = []
            used = 0
            support = _weight_unknowns(t)
            for p in points:
                dim, used = sampled_generated_dimension([g.evaluate(p) for g in gens], support)
                found.append(dim)
        rep.details.update(expected=expected, generated=found, rounds=used)
        if any(d != expected for d in found):
            rep.fail({"generated": found, "expected": expected})
    return rep


# ---------------------------------------------------------------------------
# minimal polynomials
# ---------------------------------------------------------------------------


def minimal_poly_targets(spins) -> list[tuple[str, ExactMatrix, list[Scalar]]]:
    """(label, operator, roots) for every annihilating polynomial to check."""
    t = _triple(spins)
    sets = build_sets(t)
    c = casimir_matrices(*t.as_tuple())
    chis = lambda js: [chi(j) for j in js]
    return [
        ("C12", c.C12, chis(sets.J12)),
        ("C23", c.C23, chis(sets.J23)),
        ("C123", c.C123, chis(sets.J123)),
        ("C13_0", c.C13_0, chis(sets.J13)),
        ("C13_1", c.C13_1, chis(sets.J13)),
        ("C123-C12", c.C123 - c.C12, sets.M123),
        ("C123-C23", c.C123 - c.C23, sets.M231),
        ("C123-C13_0", c.C123 - c.C13_0, sets.M132),
        ("C123-C13_1", c.C123 - c.C13_1, sets.M132),
    ]


def verify_minimal_polys(spins) -> VerificationReport:
    t = _triple(spins)
    rep = VerificationReport("minimal-polys", t.as_tuple(), mode="exact")
    with timed(rep):
        results = {}
        for label, op, roots in minimal_poly_targets(t):
            ok = check_annihilating(op, roots, minimal=True)
            results[label] = {"roots": len(roots), "minimal_annihilator": ok}
            if not ok and rep.status != FAIL:
                rep.fail({"operator": label, "roots": [str(r) for r in roots]})
        rep.details["operators"] = results
    return rep


# ---------------------------------------------------------------------------
# image of the quotient relations
# ---------------------------------------------------------------------------


def omega_rhs(c) -> ExactMatrix:
    """C1^2 + C2^2 + C3^2 + C123^2 + C1 C2 C3 C123 - (q + q^-1)^2, from the matrices."""
    n = c.C1.rows
    q2 = q + q.inverse()
    return (
        c.C1 * c.C1 + c.C2 * c.C2 + c.C3 * c.C3 + c.C123 * c.C123
        + c.C1 * c.C2 * c.C3 * c.C123
        - ExactMatrix.identity(n).scale(q2 * q2)
    )


def verify_aw_image(
    spins,
    mode: Mode | str | None = None,
    points: Sequence[SamplePoint] | None = None,
) -> VerificationReport:
    """Substitute A=C12, B=C23, K=C123 into every quotient relation.

    Mode defaults to EXACT up to dimension 64 and SAMPLED above.
    """
    from .aw_symbolic import alphas, d_poly, d_prime_poly, omega_poly

    t = _triple(spins)
    c = casimir_matrices(*t.as_tuple())
    n = c.C12.rows
    mode = Mode(mode) if mode is not None else (Mode.EXACT if n <= EXACT_DIM_LIMIT else Mode.SAMPLED)
    rels = awbar_relations(t)
    al = alphas(t)
    rep = VerificationReport("aw-homomorphism", t.as_tuple(), mode=mode.value)
    with timed(rep):
        vanished = {}
        if mode is Mode.EXACT:
            ev = MatrixEvaluator({"A": c.C12, "B": c.C23}, c.C123)
            for r in rels:
                m = ev.relation(r)
                vanished[r.name] = m.is_zero()
                if not vanished[r.name] and rep.status != FAIL:
                    rep.fail(matrix_witness(r.name, m))
            checks = {
                "phi(D)=C13_0": ev.poly(d_poly(al)) - c.C13_0,
                "phi(D')=C13_1": ev.poly(d_prime_poly(al)) - c.C13_1,
                "phi(Omega)": ev.poly(omega_poly(al)) - omega_rhs(c),
            }
            for label, m in checks.items():
                vanished[label] = m.is_zero()
                if not vanished[label] and rep.status != FAIL:
                    rep.fail(matrix_witness(label, m))
        else:
            points = list(points) if points is not None else sample_points()
            rep.samples = [p.value for p in points]
            for p in points:
                ev = SampledEvaluator({"A": c.C12.evaluate(p), "B": c.C23.evaluate(p)}, p, c.C123.evaluate(p))
                items = [(r.name, ev.relation(r)) for r in rels]
                items += [
                    ("phi(D)=C13_0", ev.poly(d_poly(al)) - c.C13_0.evaluate(p)),
                    ("phi(D')=C13_1", ev.poly(d_prime_poly(al)) - c.C13_1.evaluate(p)),
                    ("phi(Omega)", ev.poly(omega_poly(al)) - omega_rhs(c).evaluate(p)),
                ]
                for label, m in items:
                    zero = all(m[i, j] == 0 for i in range(n) for j in range(n))
                    vanished[label] = vanished.get(label, True) and zero
                    if not zero and rep.status != FAIL:
                        rep.fail({"quantity": label, "sample_q": str(p.value)})
        rep.details.update(relations=len(rels), vanished=vanished, convention_id=c.convention_id)
    return rep


def naive_c13_commutes(spins) -> bool:
    """Whether the un-conjugated C13 commutes with the diagonal action of E."""
    t = _triple(spins)
    c = casimir_matrices(*t.as_tuple())
    e = delta2_images(*t.as_tuple()).E
    return commutator(c.C13, e).is_zero()


def in_commutant(m: ExactMatrix, spins) -> bool:
    imgs = delta2_images(*_triple(spins).as_tuple())
    return all(commutator(m, x).is_zero() for x in (imgs.E, imgs.F, imgs.K))
