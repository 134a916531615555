"""Finite-dimensional U_q(sl2) representations, coproducts, R-matrices and Casimirs.

Irrep basis vectors are ordered by descending weight m = j, j-1, ..., -j.
Conventions:

* K = q^H acts as q^m, E|m> = [j-m]|m+1>, F|m> = [j+m]|m-1>;
* Delta(E) = E (x) K^-1 + K (x) E, likewise for F, and Delta(K) = K (x) K;
* C = (q - q^-1)^2 F E + q K^2 + q^-1 K^-2, which equals chi(j) on spin j.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import ConventionNotFound
from .matrices import ExactMatrix, embed_sites, kron, permute_sites, qcommutator
from .scalars import Scalar, _half, q, qfactorial, qint, qpow, vpow

GENERATORS = ("E", "F", "qH", "qHinv")
_ALIASES = {"K": "qH", "Kinv": "qHinv"}


def spin(j) -> Fraction:
    """Validate and normalise a spin label."""
    try:
        j = _half(j)
    except ValueError as exc:
        raise ValueError(f"invalid spin {j!r}: {exc}") from None
    if j < 0:
        raise ValueError(f"invalid spin {j!r}: negative")
    return j


def weights(j) -> list[Fraction]:
    j = spin(j)
    return [j - k for k in range(int(2 * j) + 1)]


@dataclass(frozen=True)
class Images:
    """Images of E, F, K, K^-1 on some (possibly tensor) representation space."""

    E: ExactMatrix
    F: ExactMatrix
    K: ExactMatrix
    Kinv: ExactMatrix

    @property
    def dim(self) -> int:
        return self.K.rows

    def get(self, name: str) -> ExactMatrix:
        name = _ALIASES.get(name, name)
        if name not in GENERATORS:
            raise ValueError(f"unknown generator {name!r}")
        return {"E": self.E, "F": self.F, "qH": self.K, "qHinv": self.Kinv}[name]


@dataclass(frozen=True)
class Irrep(Images):
    j: Fraction = Fraction(0)


_irrep_memo: dict[Fraction, Irrep] = {}
_irrep_lock = threading.Lock()


def irrep(j) -> Irrep:
    """Spin-j irreducible representation (memoised, thread-safe)."""
    j = spin(j)
    with _irrep_lock:
        rep = _irrep_memo.get(j)
        if rep is None:
            rep = _build_irrep(j)
            _irrep_memo[j] = rep
    return rep


def _build_irrep(j: Fraction) -> Irrep:
    ms = weights(j)
    n = len(ms)
    E = ExactMatrix.zeros(n)
    F = ExactMatrix.zeros(n)
    for col, m in enumerate(ms):
        if col > 0:
            E._data[col - 1][col] = qint(j - m)
        if col < n - 1:
            F._data[col + 1][col] = qint(j + m)
    K = ExactMatrix.diag([vpow(int(2 * m)) for m in ms])
    Kinv = ExactMatrix.diag([vpow(-int(2 * m)) for m in ms])
    return Irrep(E=E, F=F, K=K, Kinv=Kinv, j=j)


def tensor(a: Images, b: Images) -> Images:
    """Coproduct images on a (x) b."""
    return Images(
        E=kron(a.E, b.Kinv) + kron(a.K, b.E),
        F=kron(a.F, b.Kinv) + kron(a.K, b.F),
        K=kron(a.K, b.K),
        Kinv=kron(a.Kinv, b.Kinv),
    )


def tensor_op(a: Images, b: Images) -> Images:
    """Opposite coproduct images on a (x) b."""
    return Images(
        E=kron(a.Kinv, b.E) + kron(a.E, b.K),
        F=kron(a.Kinv, b.F) + kron(a.F, b.K),
        K=kron(a.K, b.K),
        Kinv=kron(a.Kinv, b.Kinv),
    )


def casimir(images: Images) -> ExactMatrix:
    gap = q - q.inverse()
    return (images.F * images.E).scale(gap * gap) + (images.K * images.K).scale(q) + (
        images.Kinv * images.Kinv
    ).scale(q.inverse())


def coproduct_image(x: str, j1, j2) -> ExactMatrix:
    return tensor(irrep(j1), irrep(j2)).get(x)


def delta2_images(j1, j2, j3, order: str = "left") -> Images:
    """Images of the double coproduct; ``order`` picks (D x id)D or (id x D)D."""
    r1, r2, r3 = irrep(j1), irrep(j2), irrep(j3)
    if order == "left":
        return tensor(tensor(r1, r2), r3)
    if order == "right":
        return tensor(r1, tensor(r2, r3))
    raise ValueError(f"unknown order {order!r}")


def delta2_image(x: str, j1, j2, j3, order: str = "left") -> ExactMatrix:
    return delta2_images(j1, j2, j3, order).get(x)


# ---------------------------------------------------------------------------
# R-matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RCandidate:
    """q^{2 s H(x)H} * sum_n c_n (K^{a n} E^n (x) K^{b n} F^n)."""

    convention_id: str
    cartan_sign: int
    twist: tuple[int, int]
    coefficient: Callable[[int], Scalar]


def _gap_power(n: int) -> Scalar:
    return (q - q.inverse()) ** n


R_CANDIDATES = (
    RCandidate(
        "plain-q^{n(n-1)/2}",
        1,
        (0, 0),
        lambda n: qpow(Fraction(n * (n - 1), 2)) * _gap_power(n) / qfactorial(n),
    ),
    RCandidate(
        "plain-q^{-n(n-1)/2}",
        1,
        (0, 0),
        lambda n: qpow(Fraction(-n * (n - 1), 2)) * _gap_power(n) / qfactorial(n),
    ),
    RCandidate(
        "inverse-twisted",
        -1,
        (-1, 1),
        lambda n: qpow(Fraction(n * (n + 1), 2)) * (-_gap_power(n) if n % 2 else _gap_power(n))
        / qfactorial(n),
    ),
    RCandidate(
        "twisted-q^{-n(n+1)/2}",
        1,
        (1, -1),
        lambda n: qpow(Fraction(-n * (n + 1), 2)) * _gap_power(n) / qfactorial(n),
    ),
)


@dataclass(frozen=True)
class RMatrix:
    j1: Fraction
    j2: Fraction
    mat: ExactMatrix
    inv: ExactMatrix
    convention_id: str


def _candidate_parts(c: RCandidate, j1: Fraction, j2: Fraction):
    r1, r2 = irrep(j1), irrep(j2)
    cart = ExactMatrix.diag(
        [vpow(int(4 * c.cartan_sign * m1 * m2)) for m1 in weights(j1) for m2 in weights(j2)]
    )
    cart_inv = ExactMatrix.diag(
        [vpow(-int(4 * c.cartan_sign * m1 * m2)) for m1 in weights(j1) for m2 in weights(j2)]
    )
    a, b = c.twist
    nil = ExactMatrix.zeros(r1.dim * r2.dim)
    left = ExactMatrix.identity(r1.dim)
    right = ExactMatrix.identity(r2.dim)
    for n in range(1, int(min(2 * j1, 2 * j2)) + 1):
        left = left * r1.E
        right = right * r2.F
        term = kron((r1.K ** (a * n)) * left, (r2.K ** (b * n)) * right)
        nil = nil + term.scale(c.coefficient(n))
    return cart, cart_inv, nil


def _intertwines(mat: ExactMatrix, j1: Fraction, j2: Fraction) -> bool:
    plain = tensor(irrep(j1), irrep(j2))
    opp = tensor_op(irrep(j1), irrep(j2))
    return all((plain.get(x) * mat - mat * opp.get(x)).is_zero() for x in ("E", "F", "qH"))


_rmatrix_memo: dict[tuple[Fraction, Fraction], RMatrix] = {}
_rmatrix_lock = threading.Lock()


def rmatrix(j1, j2) -> RMatrix:
    """First candidate series whose truncation intertwines Delta and Delta^op.

    The series part is unipotent (identity plus a nilpotent N), so the inverse
    is the finite sum of (-N)^k followed by the inverse Cartan factor.
    """
    j1, j2 = spin(j1), spin(j2)
    with _rmatrix_lock:
        if (j1, j2) in _rmatrix_memo:
            return _rmatrix_memo[(j1, j2)]
    n = int(2 * j1 + 1) * int(2 * j2 + 1)
    ident = ExactMatrix.identity(n)
    for cand in R_CANDIDATES:
        cart, cart_inv, nil = _candidate_parts(cand, j1, j2)
        mat = cart * (ident + nil)
        if not _intertwines(mat, j1, j2):
            continue
        series_inv = ident
        power = ident
        while True:
            power = power * (-nil)
            if power.is_zero():
                break
            series_inv = series_inv + power
        sites = (int(2 * j1 + 1), int(2 * j2 + 1))
        result = RMatrix(
            j1, j2, mat.with_sites(sites), (series_inv * cart_inv).with_sites(sites), cand.convention_id
        )
        with _rmatrix_lock:
            _rmatrix_memo[(j1, j2)] = result
        return result
    raise ConventionNotFound(f"no candidate R-matrix intertwines on spins ({j1}, {j2})")


def r_on_sites(spins, a: int, b: int, inverse: bool = False) -> ExactMatrix:
    """R_{ab} on a three-site product: first R factor on site a, second on site b (1-based)."""
    spins = [spin(s) for s in spins]
    dims = tuple(int(2 * s + 1) for s in spins)
    r = rmatrix(spins[a - 1], spins[b - 1])
    mat = r.inv if inverse else r.mat
    if a > b:
        mat = permute_sites(mat, [1, 0])
    return embed_sites(mat, {a, b}, dims)


# ---------------------------------------------------------------------------
# Casimir family
# ---------------------------------------------------------------------------


@dataclass
class CasimirMatrices:
    spins: tuple[Fraction, Fraction, Fraction]
    C1: ExactMatrix
    C2: ExactMatrix
    C3: ExactMatrix
    C12: ExactMatrix
    C23: ExactMatrix
    C123: ExactMatrix
    C13: ExactMatrix
    C13_0: ExactMatrix
    C13_1: ExactMatrix
    convention_id: str
    consistency: dict[str, bool] = field(default_factory=dict)

    def as_dict(self) -> dict[str, ExactMatrix]:
        return {
            name: getattr(self, name)
            for name in ("C1", "C2", "C3", "C12", "C23", "C123", "C13", "C13_0", "C13_1")
        }


_casimir_memo: dict[tuple, CasimirMatrices] = {}
_casimir_lock = threading.Lock()


def d_matrices(c: CasimirMatrices) -> tuple[ExactMatrix, ExactMatrix]:
    """The centralizer-internal candidates for C13_0 and C13_1.

    (C1 C3 + C2 C123)/[2] - [C12, C23]_q/(q^2 - q^-2), and the same with the
    q-commutator reversed.
    """
    base = (c.C1 * c.C3 + c.C2 * c.C123).scale(qint(2).inverse())
    scale = (q * q - q.inverse() * q.inverse()).inverse()
    d = base - qcommutator(c.C12, c.C23).scale(scale)
    d_prime = base - qcommutator(c.C23, c.C12).scale(scale)
    return d, d_prime


def casimir_matrices(j1, j2, j3, cross_check: bool = False) -> CasimirMatrices:
    """All Casimir-type operators on the triple product, memoised by spins.

    With ``cross_check`` the alternative R-conjugations and the
    centralizer-internal D expressions are compared against C13_0 and C13_1;
    the outcomes land in ``consistency``.
    """
    spins = (spin(j1), spin(j2), spin(j3))
    with _casimir_lock:
        cached = _casimir_memo.get(spins)
    if cached is None:
        cached = _build_casimirs(spins)
        with _casimir_lock:
            _casimir_memo.setdefault(spins, cached)
            cached = _casimir_memo[spins]
    if cross_check and not cached.consistency:
        r32i, r32 = r_on_sites(spins, 3, 2, inverse=True), r_on_sites(spins, 3, 2)
        r21i, r21 = r_on_sites(spins, 2, 1, inverse=True), r_on_sites(spins, 2, 1)
        d, d_prime = d_matrices(cached)
        cached.consistency = {
            "C13_0_alt": r32i * cached.C13 * r32 == cached.C13_0,
            "C13_1_alt": r21i * cached.C13 * r21 == cached.C13_1,
            "C13_0_is_D": d == cached.C13_0,
            "C13_1_is_D_prime": d_prime == cached.C13_1,
        }
    return cached


def _build_casimirs(spins) -> CasimirMatrices:
    j1, j2, j3 = spins
    dims = tuple(int(2 * s + 1) for s in spins)
    n = dims[0] * dims[1] * dims[2]
    ident = ExactMatrix.identity(n, dims)
    from .scalars import chi

    c1, c2, c3 = (ident.scale(chi(s)) for s in spins)
    r1, r2, r3 = irrep(j1), irrep(j2), irrep(j3)
    c12 = embed_sites(casimir(tensor(r1, r2)).with_sites(dims[:2]), {1, 2}, dims)
    c23 = embed_sites(casimir(tensor(r2, r3)).with_sites(dims[1:]), {2, 3}, dims)
    c13 = embed_sites(casimir(tensor(r1, r3)).with_sites((dims[0], dims[2])), {1, 3}, dims)
    c123 = casimir(delta2_images(j1, j2, j3)).with_sites(dims)
    r12, r12i = r_on_sites(spins, 1, 2), r_on_sites(spins, 1, 2, inverse=True)
    r23, r23i = r_on_sites(spins, 2, 3), r_on_sites(spins, 2, 3, inverse=True)
    conv = f"R12:{rmatrix(j1, j2).convention_id};R23:{rmatrix(j2, j3).convention_id}"
    return CasimirMatrices(
        spins=spins,
        C1=c1,
        C2=c2,
        C3=c3,
        C12=c12,
        C23=c23,
        C123=c123,
        C13=c13,
        C13_0=r12 * c13 * r12i,
        C13_1=r23 * c13 * r23i,
        convention_id=conv,
    )


def ybe_holds(j1, j2, j3) -> bool:
    """R12 R13 R23 = R23 R13 R12 on the triple product."""
    s = (j1, j2, j3)
    lhs = r_on_sites(s, 1, 2) * r_on_sites(s, 1, 3) * r_on_sites(s, 2, 3)
    rhs = r_on_sites(s, 2, 3) * r_on_sites(s, 1, 3) * r_on_sites(s, 1, 2)
    return lhs == rhs


# ---------------------------------------------------------------------------
# report-producing checks
# ---------------------------------------------------------------------------


def tilde(m: ExactMatrix) -> ExactMatrix:
    """(m - q - q^-1)/(q - q^-1)^2."""
    gap = q - q.inverse()
    return (m - (q + q.inverse())).scale((gap * gap).inverse())


def linear_relation_limit(j1, j2, j3, c13: str = "C13") -> list[list[Fraction]]:
    """q -> 1 limit of C1~ + C2~ + C3~ + C123~ - C12~ - C23~ - C13~, entrywise."""
    from .scalars import limit_q_to_1

    c = casimir_matrices(j1, j2, j3)
    m = (
        tilde(c.C1) + tilde(c.C2) + tilde(c.C3) + tilde(c.C123)
        - tilde(c.C12) - tilde(c.C23) - tilde(getattr(c, c13))
    )
    return [[limit_q_to_1(x) for x in m.row(i)] for i in range(m.rows)]


def verify_classical_limit(j1, j2, j3):
    from .report import VerificationReport, timed

    spins = (spin(j1), spin(j2), spin(j3))
    rep = VerificationReport("q1-limit", spins)
    with timed(rep):
        for name in ("C13", "C13_0", "C13_1"):
            lim = linear_relation_limit(*spins, c13=name)
            bad = [(i, k, x) for i, row in enumerate(lim) for k, x in enumerate(row) if x != 0]
            rep.details[name] = not bad
            if bad and rep.passed:
                i, k, x = bad[0]
                rep.fail({"quantity": f"limit with {name}", "entry": [i, k], "value": str(x)})
    return rep


def verify_r_contract(j1, j2, j3, ybe: bool = True):
    """Intertwining on every site pair, YBE, both conjugation forms of C13, and the D cross-check."""
    from .report import VerificationReport, timed

    spins = (spin(j1), spin(j2), spin(j3))
    rep = VerificationReport("r-matrix", spins)
    with timed(rep):
        checks = {}
        for a, b in ((0, 1), (1, 2), (0, 2), (1, 0), (2, 1), (2, 0)):
            r = rmatrix(spins[a], spins[b])
            checks[f"intertwines({spins[a]},{spins[b]})"] = _intertwines(r.mat, spins[a], spins[b])
            n = r.mat.rows
            checks[f"inverse({spins[a]},{spins[b]})"] = r.mat * r.inv == ExactMatrix.identity(n)
        if ybe:
            checks["ybe"] = ybe_holds(*spins)
        c = casimir_matrices(*spins, cross_check=True)
        checks.update(c.consistency)
        rep.details.update(checks=checks, convention_id=c.convention_id)
        for name, ok in checks.items():
            if not ok and rep.passed:
                rep.fail({"quantity": name, "value": "identity fails"})
    return rep
