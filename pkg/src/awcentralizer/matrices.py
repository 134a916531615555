"""Dense exact matrices over Q(v) and their rational specialisations.

Tensor products use the big-endian convention throughout: in
``kron(a, b)`` the index of ``a`` varies slowest.  Site positions passed to
:func:`embed_sites` are 1-based, matching the usual "sites 1, 2, 3" naming.

Products skip zero entries, which keeps the weight-block-diagonal operators
of this package cheap without giving up the dense storage model.
"""

from __future__ import annotations

import enum
import itertools
import random
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import PoleAtSample
from .scalars import ONE, ZERO, SamplePoint, Scalar, as_scalar, random_sample_points


class Mode(str, enum.Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


class ExactMatrix:
    """Matrix with :class:`Scalar` entries and optional tensor-site metadata."""

    __slots__ = ("rows", "cols", "_data", "site_dims", "_nz")

    def __init__(
        self,
        rows: int,
        cols: int,
        entries: Iterable | None = None,
        site_dims: Sequence[int] | None = None,
    ):
        self.rows, self.cols = rows, cols
        if entries is None:
            self._data = [[ZERO] * cols for _ in range(rows)]
        else:
            flat = [as_scalar(x) for x in entries]
            if len(flat) != rows * cols:
                raise ValueError(f"expected {rows * cols} entries, got {len(flat)}")
            self._data = [flat[i * cols:(i + 1) * cols] for i in range(rows)]
        self.site_dims = _check_sites(rows, site_dims)
        self._nz = None

    # -- construction -----------------------------------------------------
    @classmethod
    def _from_rows(cls, data: list[list[Scalar]], site_dims=None) -> "ExactMatrix":
        out = cls.__new__(cls)
        out.rows = len(data)
        out.cols = len(data[0]) if data else 0
        out._data = data
        out.site_dims = _check_sites(out.rows, site_dims)
        out._nz = None
        return out

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], site_dims=None) -> "ExactMatrix":
        return cls._from_rows([[as_scalar(x) for x in r] for r in rows], site_dims)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, site_dims=None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return cls._from_rows([[ZERO] * cols for _ in range(rows)], site_dims)

    @classmethod
    def identity(cls, n: int, site_dims=None) -> "ExactMatrix":
        data = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = ONE
        return cls._from_rows(data, site_dims)

    @classmethod
    def diag(cls, values: Sequence, site_dims=None) -> "ExactMatrix":
        n = len(values)
        data = [[ZERO] * n for _ in range(n)]
        for i, x in enumerate(values):
            data[i][i] = as_scalar(x)
        return cls._from_rows(data, site_dims)

    @classmethod
    def from_fmpq_mat(cls, m: flint.fmpq_mat, site_dims=None) -> "ExactMatrix":
        data = [
            [Scalar(Fraction(int(m[i, j].p), int(m[i, j].q))) for j in range(m.ncols())]
            for i in range(m.nrows())
        ]
        return cls._from_rows(data, site_dims)

    # -- access -----------------------------------------------------------
    @property
    def entries(self) -> list[Scalar]:
        return [x for row in self._data for x in row]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx) -> Scalar:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> list[Scalar]:
        return list(self._data[i])

    def nonzero_rows(self) -> list[list[tuple[int, Scalar]]]:
        if self._nz is None:
            self._nz = [[(j, x) for j, x in enumerate(r) if x] for r in self._data]
        return self._nz

    def with_sites(self, site_dims) -> "ExactMatrix":
        return ExactMatrix._from_rows(self._data, site_dims)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(not row for row in self.nonzero_rows())

    def first_nonzero(self):
        """Witness ``(i, j, value)`` of a nonzero entry, or None."""
        for i, row in enumerate(self.nonzero_rows()):
            if row:
                j, x = row[0]
                return i, j, x
        return None

    def density(self) -> float:
        nnz = sum(len(r) for r in self.nonzero_rows())
        return nnz / max(1, self.rows * self.cols)

    # -- arithmetic -------------------------------------------------------
    def _same_shape(self, other: "ExactMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def _sites_for(self, other: "ExactMatrix"):
        return self.site_dims if self.site_dims is not None else other.site_dims

    def __add__(self, other) -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return self + ExactMatrix.identity(self.rows) * as_scalar(other)
        self._same_shape(other)
        data = [list(r) for r in self._data]
        for i, row in enumerate(other.nonzero_rows()):
            di = data[i]
            for j, x in row:
                di[j] = di[j] + x
        return ExactMatrix._from_rows(data, self._sites_for(other))

    __radd__ = __add__

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._from_rows([[-x for x in r] for r in self._data], self.site_dims)

    def __sub__(self, other) -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return self + (-as_scalar(other))
        return self + (-other)

    def __rsub__(self, other) -> "ExactMatrix":
        return (-self) + other

    def scale(self, c) -> "ExactMatrix":
        c = as_scalar(c)
        if not c:
            return ExactMatrix.zeros(self.rows, self.cols, self.site_dims)
        return ExactMatrix._from_rows([[x * c for x in r] for r in self._data], self.site_dims)

    def __mul__(self, other) -> "ExactMatrix":
        if isinstance(other, ExactMatrix):
            return self.matmul(other)
        return self.scale(other)

    def __rmul__(self, other) -> "ExactMatrix":
        return self.scale(other)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self.matmul(other)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        onz = other.nonzero_rows()
        data = []
        for row in self.nonzero_rows():
            acc: dict[int, Scalar] = {}
            for k, a in row:
                for j, b in onz[k]:
                    t = a * b
                    prev = acc.get(j)
                    acc[j] = t if prev is None else prev + t
            out = [ZERO] * other.cols
            for j, x in acc.items():
                out[j] = x
            data.append(out)
        return ExactMatrix._from_rows(data, self._sites_for(other))

    def __pow__(self, n: int) -> "ExactMatrix":
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactMatrix.identity(self.rows, self.site_dims)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._from_rows(
            [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.site_dims,
        )

    def map(self, f) -> "ExactMatrix":
        return ExactMatrix._from_rows([[f(x) for x in r] for r in self._data], self.site_dims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    __hash__ = None

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols}, sites={self.site_dims})"

    # -- specialisation ---------------------------------------------------
    def evaluate(self, p: SamplePoint) -> flint.fmpq_mat:
        """Rational matrix at a sample point; PoleAtSample if an entry has a pole."""
        from .scalars import eval_at

        m = flint.fmpq_mat(self.rows, self.cols)
        for i, row in enumerate(self.nonzero_rows()):
            for j, x in row:
                f = eval_at(x, p)
                m[i, j] = flint.fmpq(f.numerator, f.denominator)
        return m

    # -- elimination ------------------------------------------------------
    def inverse(self) -> "ExactMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self._data)]
        for c in range(n):
            p = next((r for r in range(c, n) if aug[r][c]), None)
            if p is None:
                raise ZeroDivisionError("matrix is singular over Q(v)")
            aug[c], aug[p] = aug[p], aug[c]
            inv = aug[c][c].inverse()
            aug[c] = [x * inv for x in aug[c]]
            pivot_row = aug[c]
            nz = [(j, x) for j, x in enumerate(pivot_row) if x]
            for r in range(n):
                f = aug[r][c]
                if r != c and f:
                    ar = aug[r]
                    for j, x in nz:
                        ar[j] = ar[j] - f * x
        return ExactMatrix._from_rows([r[n:] for r in aug], self.site_dims)

    def rank_exact(self) -> int:
        return _bareiss_rank(self)

    def nullspace_exact(self) -> list[list[Scalar]]:
        return nullspace_vectors([list(r) for r in self._data], self.cols)


def _check_sites(rows: int, site_dims):
    if site_dims is None:
        return None
    site_dims = tuple(int(d) for d in site_dims)
    prod = 1
    for d in site_dims:
        prod *= d
    if prod != rows:
        raise ValueError(f"site dims {site_dims} do not multiply to {rows}")
    return site_dims


# ---------------------------------------------------------------------------
# tensor structure
# ---------------------------------------------------------------------------


def kron(a: ExactMatrix, b: ExactMatrix, *more: ExactMatrix) -> ExactMatrix:
    """Kronecker product, first factor slowest; site metadata concatenated."""
    if more:
        return kron(kron(a, b), *more)
    data = [[ZERO] * (a.cols * b.cols) for _ in range(a.rows * b.rows)]
    bnz = b.nonzero_rows()
    for i, arow in enumerate(a.nonzero_rows()):
        for j, x in arow:
            for k, brow in enumerate(bnz):
                out = data[i * b.rows + k]
                for l, y in brow:
                    out[j * b.cols + l] = x * y
    sa = a.site_dims or (a.rows,)
    sb = b.site_dims or (b.rows,)
    sites = sa + sb if a.is_square() and b.is_square() else None
    return ExactMatrix._from_rows(data, sites)


def commutator(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
    return x * y - y * x


def qcommutator(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
    """[X, Y]_q = q X Y - q^-1 Y X."""
    from .scalars import q

    if x.shape != y.shape or not x.is_square():
        raise ValueError("q-commutator needs square matrices of equal size")
    return (x * y).scale(q) - (y * x).scale(q.inverse())


def embed_sites(op: ExactMatrix, positions: Iterable[int], all_dims: Sequence[int]) -> ExactMatrix:
    """Act with ``op`` on the listed (1-based) sites and as identity elsewhere.

    ``positions`` is read in increasing order, and ``op`` must be an operator
    on the tensor product of those sites taken in that order.
    """
    positions = sorted(positions)
    all_dims = tuple(all_dims)
    sub = tuple(all_dims[p - 1] for p in positions)
    prod_sub = 1
    for d in sub:
        prod_sub *= d
    if op.rows != prod_sub or not op.is_square():
        raise ValueError(f"operator of size {op.rows} does not match sites {sub}")
    n = 1
    for d in all_dims:
        n *= d
    rest = [i for i in range(1, len(all_dims) + 1) if i not in positions]
    rest_dims = [all_dims[i - 1] for i in rest]

    def flat(idx):
        r = 0
        for x, d in zip(idx, all_dims):
            r = r * d + x
        return r

    def sub_flat(idx):
        r = 0
        for x, d in zip(idx, sub):
            r = r * d + x
        return r

    data = [[ZERO] * n for _ in range(n)]
    onz = op.nonzero_rows()
    sub_tuples = list(itertools.product(*[range(d) for d in sub]))
    for rest_idx in itertools.product(*[range(d) for d in rest_dims]):
        for si, s_in in enumerate(sub_tuples):
            full_out = [0] * len(all_dims)
            for p, x in zip(rest, rest_idx):
                full_out[p - 1] = x
            for p, x in zip(positions, s_in):
                full_out[p - 1] = x
            row = flat(full_out)
            for sj, val in onz[si]:
                s_out = sub_tuples[sj]
                full_in = list(full_out)
                for p, x in zip(positions, s_out):
                    full_in[p - 1] = x
                data[row][flat(full_in)] = val
    return ExactMatrix._from_rows(data, all_dims)


def permute_sites(op: ExactMatrix, perm: Sequence[int]) -> ExactMatrix:
    """Conjugate by the site permutation that moves site ``perm[k]`` to slot k (0-based)."""
    dims = op.site_dims
    if dims is None:
        raise ValueError("operator carries no site metadata")
    new_dims = tuple(dims[p] for p in perm)
    index = list(itertools.product(*[range(d) for d in dims]))

    def flat(idx, ds):
        r = 0
        for x, d in zip(idx, ds):
            r = r * d + x
        return r

    # P maps old basis vector |i_0 i_1 ...> to |i_perm[0] i_perm[1] ...>
    target = [flat(tuple(t[p] for p in perm), new_dims) for t in index]
    n = op.rows
    data = [[ZERO] * n for _ in range(n)]
    for i, row in enumerate(op.nonzero_rows()):
        for j, x in row:
            data[target[i]][target[j]] = x
    return ExactMatrix._from_rows(data, new_dims)


# ---------------------------------------------------------------------------
# ranks and nullspaces
# ---------------------------------------------------------------------------


def _to_polys(rows: Sequence[Sequence[Scalar]]) -> list[list[flint.fmpq_poly]]:
    """Clear denominators and negative v-powers row by row."""
    out = []
    for r in rows:
        nz = [x for x in r if x]
        if not nz:
            out.append([flint.fmpq_poly([])] * len(r))
            continue
        den = flint.fmpq_poly([1])
        for x in nz:
            if not x.den.is_one():
                g = den.gcd(x.den)
                den = den * (x.den // g)
        low = min(x.shift for x in nz)
        row = []
        for x in r:
            if not x:
                row.append(flint.fmpq_poly([]))
            else:
                row.append((x.num * (den // x.den)).left_shift(x.shift - low))
        out.append(row)
    return out


def _bareiss_rank(m: ExactMatrix) -> int:
    a = _to_polys(m._data)
    rows, cols = m.rows, m.cols
    rank = 0
    prev = flint.fmpq_poly([1])
    for c in range(cols):
        if rank == rows:
            break
        p = next((r for r in range(rank, rows) if not a[r][c].is_zero()), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        piv = a[rank][c]
        for r in range(rank + 1, rows):
            f = a[r][c]
            ar = a[r]
            for j in range(c, cols):
                t = piv * ar[j] - f * a[rank][j]
                ar[j] = t // prev if not t.is_zero() else t
        prev = piv
        rank += 1
    return rank


def nullspace_vectors(rows: list[list[Scalar]], ncols: int) -> list[list[Scalar]]:
    """Basis of the right nullspace over Q(v) via Gauss-Jordan elimination."""
    a = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        nz = [(j, x) for j, x in enumerate(a[r]) if x]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                ai = a[i]
                for j, x in nz:
                    ai[j] = ai[j] - f * x
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        vec = [ZERO] * ncols
        vec[fcol] = ONE
        for i, pc in enumerate(pivots):
            vec[pc] = -a[i][fcol]
        basis.append(vec)
    return basis


def rank_sampled(m: ExactMatrix, p: SamplePoint) -> int:
    return m.evaluate(p).rank()


def nullspace_dim(
    mat: ExactMatrix,
    mode: Mode | str = Mode.EXACT,
    rng: random.Random | None = None,
    points: Sequence[SamplePoint] | None = None,
) -> int:
    """Dimension of the right nullspace.

    In SAMPLED mode the value comes from a single random specialisation; a
    point where an entry has a pole is discarded and redrawn up to 8 times.
    """
    mode = Mode(mode)
    if mode is Mode.EXACT:
        return mat.cols - mat.rank_exact()
    rng = rng or random.Random(0)
    candidates = list(points or [])
    for attempt in range(8):
        p = candidates[attempt] if attempt < len(candidates) else random_sample_points(rng, 1)[0]
        try:
            return mat.cols - rank_sampled(mat, p)
        except PoleAtSample:
            continue
    raise PoleAtSample("no pole-free sample found after 8 attempts")


def check_annihilating(
    mat: ExactMatrix,
    roots: Sequence,
    minimal: bool = False,
    probe: SamplePoint | None = None,
) -> bool:
    """True iff prod (mat - r I) vanishes; optionally also check minimality.

    Minimality means no single root can be dropped.  A nonzero value of the
    shortened product at a sample point proves it is nonzero in Q(v), so the
    sample is tried first and exact arithmetic is the fallback.
    """
    if not mat.is_square():
        raise ValueError("annihilation check needs a square matrix")
    roots = [as_scalar(r) for r in roots]
    n = mat.rows
    ident = ExactMatrix.identity(n)
    factors = [mat - ident.scale(r) for r in roots]
    if not _product(factors).is_zero():
        return False
    if not minimal:
        return True
    probe = probe or SamplePoint.from_v(Fraction(7, 5))
    sampled = None
    try:
        sampled = [f.evaluate(probe) for f in factors]
    except PoleAtSample:
        sampled = None
    for skip in range(len(factors)):
        rest = [f for i, f in enumerate(factors) if i != skip]
        if sampled is not None:
            prod = flint.fmpq_mat(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])
            for i, f in enumerate(sampled):
                if i != skip:
                    prod = prod * f
            if any(prod[i, j] != 0 for i in range(n) for j in range(n)):
                continue
        if _product(rest).is_zero():
            return False
    return True


def _product(factors: Sequence[ExactMatrix]) -> ExactMatrix:
    out = factors[0] if factors else None
    for f in factors[1:]:
        out = out * f
    return out
