"""Truncated graded algebra O[x_q : q in S] / (t_q x_q) over O = Z/m.

A monomial is a tuple of exponents indexed by site position.  The
coefficient of a monomial whose variables are S lives in Z/gcd(m, t_q : q in S);
elements are kept in that canonical form after every operation so that
equality of values is equality of representations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class Site:
    label: str
    t: int

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"site {self.label!r}: t must be >= 1")


@dataclass(frozen=True, eq=False)
class SiteSet:
    sites: tuple[Site, ...]
    m: int
    dmax: int | None = None
    _index: dict = field(init=False, repr=False, compare=False)
    _div_cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("modulus must be >= 2")
        labels = [s.label for s in self.sites]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate site labels in {labels}")
        if self.dmax is None:
            object.__setattr__(self, "dmax", len(self.sites))
        object.__setattr__(self, "_index", {s.label: i for i, s in enumerate(self.sites)})
        object.__setattr__(self, "_div_cache", {})

    @classmethod
    def make(cls, labels: Iterable[str], ts: Iterable[int], m: int, dmax: int | None = None) -> "SiteSet":
        return cls(tuple(Site(str(l), int(t)) for l, t in zip(labels, ts, strict=True)), m, dmax)

    def _key(self):
        return (self.sites, self.m, self.dmax)

    def __eq__(self, other):
        return isinstance(other, SiteSet) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.sites)

    @property
    def size(self) -> int:
        return len(self.sites)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown site {label!r}") from None

    def t_of(self, label: str) -> int:
        return self.sites[self.index(label)].t

    def mask(self, labels: Iterable[str]) -> int:
        out = 0
        for l in labels:
            out |= 1 << self.index(l)
        return out

    def divisor(self, mono: Monomial) -> int:
        """Order of the coefficient group of ``mono``."""
        d = self._div_cache.get(mono)
        if d is None:
            d = self.m
            for e, s in zip(mono, self.sites):
                if e:
                    d = gcd(d, s.t)
            self._div_cache[mono] = d
        return d

    def ordered(self, labels: Iterable[str]) -> list[str]:
        return sorted(labels, key=self.index)

    def subsets(self, labels: Iterable[str] | None = None) -> list[frozenset]:
        """All subsets of ``labels`` (default: every site), smallest first."""
        base = self.labels if labels is None else self.ordered(labels)
        return [frozenset(c) for k in range(len(base) + 1) for c in combinations(base, k)]

    def monomials(self, degree: int, labels: Iterable[str] | None = None) -> list[Monomial]:
        """Every monomial of exactly ``degree`` in the variables of ``labels``."""
        idx = [self.index(l) for l in (self.labels if labels is None else labels)]
        out = []

        def rec(pos, left, acc):
            if pos == len(idx):
                if left == 0:
                    mono = [0] * self.size
                    for i, e in zip(idx, acc):
                        mono[i] = e
                    out.append(tuple(mono))
                return
            for e in range(left + 1):
                rec(pos + 1, left - e, acc + [e])

        if degree <= self.dmax:
            rec(0, degree, [])
        return out


def _support_mask(mono: Monomial) -> int:
    out = 0
    for i, e in enumerate(mono):
        if e:
            out |= 1 << i
    return out


class GradedElement:
    """An element of the truncated graded algebra over a :class:`SiteSet`."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: SiteSet, terms: Mapping[Monomial, int] | None = None, *, _canonical=False):
        self.ambient = ambient
        if _canonical:
            self.terms = dict(terms)
            return
        out: dict[Monomial, int] = {}
        if terms:
            dmax = ambient.dmax
            for mono, c in terms.items():
                if sum(mono) > dmax:
                    continue
                c %= ambient.divisor(mono)
                if c:
                    out[mono] = c
        self.terms = out

    # constructors

    @classmethod
    def zero(cls, ambient: SiteSet) -> "GradedElement":
        return cls(ambient, {}, _canonical=True)

    @classmethod
    def const(cls, ambient: SiteSet, c: int) -> "GradedElement":
        return cls(ambient, {(0,) * ambient.size: c})

    @classmethod
    def var(cls, ambient: SiteSet, label: str, c: int = 1) -> "GradedElement":
        mono = [0] * ambient.size
        mono[ambient.index(label)] = 1
        return cls(ambient, {tuple(mono): c})

    @classmethod
    def monomial(cls, ambient: SiteSet, exps: Mapping[str, int], c: int = 1) -> "GradedElement":
        mono = [0] * ambient.size
        for l, e in exps.items():
            mono[ambient.index(l)] = e
        return cls(ambient, {tuple(mono): c})

    # arithmetic

    def _same(self, other: "GradedElement") -> None:
        if not isinstance(other, GradedElement):
            raise TypeError(f"expected GradedElement, got {type(other).__name__}")
        if other.ambient is not self.ambient and other.ambient != self.ambient:
            raise TypeError("graded elements over different site sets")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        amb = self.ambient
        for mono, c in other.terms.items():
            v = (out.get(mono, 0) + c) % amb.divisor(mono)
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return GradedElement(amb, out, _canonical=True)

    def __neg__(self):
        amb = self.ambient
        return GradedElement(amb, {mo: (-c) % amb.divisor(mo) for mo, c in self.terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._same(other)
        amb = self.ambient
        dmax = amb.dmax
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            d1 = sum(m1)
            for m2, c2 in other.terms.items():
                if d1 + sum(m2) > dmax:
                    continue
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, 0) + c1 * c2
        return GradedElement(amb, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "GradedElement":
        return GradedElement(self.ambient, {mo: c * v for mo, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.ambient == other.ambient and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure

    def support(self) -> frozenset:
        mask = 0
        for mono in self.terms:
            mask |= _support_mask(mono)
        return frozenset(s.label for i, s in enumerate(self.ambient.sites) if mask >> i & 1)

    def degrees(self) -> set[int]:
        return {sum(mo) for mo in self.terms}

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(mo) == degree for mo in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ambient.size, 0)

    def filter(self, keep: Callable[[Monomial], bool]) -> "GradedElement":
        return GradedElement(self.ambient, {mo: c for mo, c in self.terms.items() if keep(mo)}, _canonical=True)

    def reduce_mod(self, t: int) -> "GradedElement":
        """Image in (this module) tensor O/(t)."""
        amb = self.ambient
        out = {}
        for mo, c in self.terms.items():
            c %= gcd(amb.divisor(mo), t)
            if c:
                out[mo] = c
        return GradedElement(amb, out, _canonical=True)

    def __repr__(self):
        return f"GradedElement({format_graded(self)})"

    def to_json(self) -> list[dict]:
        labels = self.ambient.labels
        return [
            {"monomial": {labels[i]: e for i, e in enumerate(mo) if e}, "coeff": c}
            for mo, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, ambient: SiteSet, data: Sequence[Mapping]) -> "GradedElement":
        out: dict[Monomial, int] = {}
        for rec in data:
            mono = [0] * ambient.size
            for l, e in rec["monomial"].items():
                mono[ambient.index(l)] = int(e)
            mono = tuple(mono)
            out[mono] = out.get(mono, 0) + int(rec["coeff"])
        return cls(ambient, out)


def format_graded(g: GradedElement) -> str:
    if not g.terms:
        return "0"
    labels = g.ambient.labels
    parts = []
    for mo, c in sorted(g.terms.items()):
        var = "*".join(f"x{labels[i]}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mo) if e)
        parts.append(f"{c}*{var}" if var else str(c))
    return " + ".join(parts)


def project(g, labels: Iterable[str]):
    """Keep the monomials whose variables all lie in ``labels``.

    Works on anything exposing ``map_coeffs`` (wedge tensors) as well as on
    graded elements.
    """
    if hasattr(g, "map_coeffs"):
        labels = frozenset(labels)
        return g.map_coeffs(lambda c: project(c, labels))
    amb = g.ambient
    keep = amb.mask(labels)
    return g.filter(lambda mo: not (_support_mask(mo) & ~keep))


def graded_piece(g, i: int):
    if hasattr(g, "map_coeffs"):
        return g.map_coeffs(lambda c: graded_piece(c, i))
    return g.filter(lambda mo: sum(mo) == i)


def s_operator(g, m_set: Iterable[str], n_set: Iterable[str]):
    """sum over d in n_set of (-1)^|d| * project(g, m_set minus d)."""
    m_set, n_set = frozenset(m_set), frozenset(n_set)
    if not n_set <= m_set:
        raise ValueError("n_set must be contained in m_set")
    amb = g.ambient
    total = None
    for d in amb.subsets(n_set):
        term = project(g, m_set - d)
        if len(d) % 2:
            term = -term
        total = term if total is None else total + term
    return total


def determinant(matrix: Sequence[Sequence], zero, one):
    """Cofactor expansion along the first row; exact over any commutative ring."""
    n = len(matrix)
    if n == 0:
        return one
    if n == 1:
        return matrix[0][0]
    total = zero
    for j in range(n):
        a = matrix[0][j]
        if not a:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = a * determinant(minor, zero, one)
        total = total - term if j % 2 else total + term
    return total


def check_p_entry(label: str, p: GradedElement) -> None:
    if not p.is_homogeneous(1):
        raise ValueError(f"P_{label} must be homogeneous of degree 1")
    if label in p.support():
        raise ValueError(f"P_{label} must be supported away from {label}")


def det_D(amb: SiteSet, n_set: Iterable[str], d_set: Sequence[str] | Iterable[str],
          P: Mapping[str, GradedElement]) -> GradedElement:
    """The determinant element D_{n,d}; D_{n,empty} = 1.

    Row i lists -P_{q_i} projected onto n minus d on the diagonal and onto
    {q_j} off the diagonal, for the listed order q_1..q_v of ``d_set``.
    """
    n_set = frozenset(n_set)
    order = list(d_set) if isinstance(d_set, (list, tuple)) else amb.ordered(d_set)
    if not set(order) <= n_set:
        raise ValueError("d_set must be contained in n_set")
    if not order:
        return GradedElement.const(amb, 1)
    for q in order:
        check_p_entry(q, P[q])
    rest = n_set - frozenset(order)
    rows = []
    for qi in order:
        rows.append([
            -project(P[qi], rest) if qi == qj else -project(P[qi], (qj,))
            for qj in order
        ])
    return determinant(rows, GradedElement.zero(amb), GradedElement.const(amb, 1))


def det_D_full(amb: SiteSet, d_set: Iterable[str], P: Mapping[str, GradedElement]) -> GradedElement:
    """D_d = project(D_{n,d}, d); independent of n."""
    d_set = frozenset(d_set)
    return project(det_D(amb, d_set, d_set, P), d_set)
