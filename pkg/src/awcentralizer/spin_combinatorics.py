"""Index sets for triple tensor products of spin representations.

All spin-valued sets are ascending lists of :class:`fractions.Fraction`.
Sets of Casimir-eigenvalue differences are ascending in the large-q order,
which is what sorting by the value at q = 4 produces for these sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .scalars import SamplePoint, Scalar, chi, eval_at
from .quantum_rep import spin

Ordering = tuple[int, int, int]
IDENTITY: Ordering = (0, 1, 2)
_ORDER_PROBE = SamplePoint.from_v(2)


@dataclass(frozen=True)
class SpinTriple:
    j1: Fraction
    j2: Fraction
    j3: Fraction

    def __init__(self, j1, j2, j3):
        object.__setattr__(self, "j1", spin(j1))
        object.__setattr__(self, "j2", spin(j2))
        object.__setattr__(self, "j3", spin(j3))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.j1, self.j2, self.j3)

    def permuted(self, ordering: Ordering) -> tuple[Fraction, Fraction, Fraction]:
        spins = self.as_tuple()
        if sorted(ordering) != [0, 1, 2]:
            raise ValueError(f"not a permutation of three sites: {ordering}")
        return tuple(spins[i] for i in ordering)

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(int(2 * j + 1) for j in self.as_tuple())

    def __str__(self) -> str:
        return ",".join(str(j) for j in self.as_tuple())


def _as_triple(t) -> SpinTriple:
    return t if isinstance(t, SpinTriple) else SpinTriple(*t)


def pair_set(a, b) -> list[Fraction]:
    """J(a, b) = {|a-b|, ..., a+b}."""
    a, b = spin(a), spin(b)
    lo, hi = abs(a - b), a + b
    return [lo + k for k in range(int(hi - lo) + 1)]


def triple_set(a, b, c) -> list[Fraction]:
    out = set()
    for j in pair_set(a, b):
        out.update(pair_set(j, c))
    return sorted(out)


def m_pairs(a, b, c) -> list[tuple[Fraction, Fraction]]:
    """Pairs (l, j) with j in J(a, b) and l in J(j, c), labelling chi_l - chi_j."""
    return [(l, j) for j in pair_set(a, b) for l in pair_set(j, c)]


def m_set(a, b, c) -> list[Scalar]:
    """M(a, b, c) = union of {chi_l - chi_j}, deduplicated by exact equality."""
    values = {chi(l) - chi(j) for l, j in m_pairs(a, b, c)}
    return sorted(values, key=lambda s: eval_at(s, _ORDER_PROBE))


def degeneracy_bounds(t, ell, ordering: Ordering = IDENTITY) -> tuple[Fraction, Fraction]:
    ja, jb, jc = _as_triple(t).permuted(ordering)
    ell = spin(ell)
    return max(abs(ja - jb), abs(jc - ell)), min(ja + jb, jc + ell)


def s_set(t, ell, ordering: Ordering = IDENTITY) -> list[Fraction]:
    """S^l(ja, jb, jc) = {j_min, ..., j_max}."""
    t = _as_triple(t)
    ell = spin(ell)
    if ell not in triple_set(*t.as_tuple()):
        raise ValueError(f"{ell} is not in J({t})")
    lo, hi = degeneracy_bounds(t, ell, ordering)
    return [lo + k for k in range(int(hi - lo) + 1)]


def jk_set(t, k, ordering: Ordering = IDENTITY) -> list[Fraction]:
    """J^k(ja, jb, jc): the j in J(ja, jb) with chi_j = chi_k - m for some m in M."""
    t = _as_triple(t)
    k = spin(k)
    if k not in triple_set(*t.as_tuple()):
        raise ValueError(f"{k} is not in J({t})")
    ja, jb, jc = t.permuted(ordering)
    targets = {chi(k) - m for m in m_set(ja, jb, jc)}
    return [j for j in pair_set(ja, jb) if chi(j) in targets]


def degeneracies(t) -> dict[Fraction, int]:
    t = _as_triple(t)
    return {ell: len(s_set(t, ell)) for ell in triple_set(*t.as_tuple())}


def centralizer_dim(t) -> int:
    return sum(d * d for d in degeneracies(t).values())


@dataclass(frozen=True)
class SpinSets:
    triple: SpinTriple
    J12: list[Fraction]
    J23: list[Fraction]
    J13: list[Fraction]
    J123: list[Fraction]
    M123: list[Scalar]
    M231: list[Scalar]
    M132: list[Scalar]
    degeneracies: dict[Fraction, int]


def build_sets(t) -> SpinSets:
    t = _as_triple(t)
    j1, j2, j3 = t.as_tuple()
    return SpinSets(
        triple=t,
        J12=pair_set(j1, j2),
        J23=pair_set(j2, j3),
        J13=pair_set(j1, j3),
        J123=triple_set(j1, j2, j3),
        M123=m_set(j1, j2, j3),
        M231=m_set(j2, j3, j1),
        M132=m_set(j1, j3, j2),
        degeneracies=degeneracies(t),
    )


def all_orderings() -> list[Ordering]:
    from itertools import permutations

    return list(permutations(range(3)))


def spins_from_strings(items: Sequence[str]) -> SpinTriple:
    return SpinTriple(*(Fraction(x) for x in items))
