"""Unit systems along a chain of initial segments, and the regulator maps.

wedge^k S^n is represented by its image in wedge^k H, spanned by the k-fold
wedges of a generating set of S^n.  A unit system is determined by its top
element eps_Sigma; the lower levels are obtained by contracting with
-v_{q_{k+1}}, ..., -v_{q_N}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exterior import Functional, WedgeTensor, contract, contract_seq, wedge
from .gradedalg import GradedElement
from .instance import SevenTuple
from .ksystems import Check, SystemCollection
from .linalg import MatrixZm, RowSpan, howell_rows, kernel_generators

FLAVORS = ("P", "T", "K")
_FLAVOR_KIND = {"P": "PKS", "T": "TKS", "K": "KS"}


@dataclass(frozen=True)
class Chain:
    """An ordering q_1..q_N of the sites and the sizes of the chain levels."""

    ordering: tuple[str, ...]
    sizes: tuple[int, ...]

    def __post_init__(self):
        N = len(self.ordering)
        if len(set(self.ordering)) != N:
            raise ValueError(f"ordering repeats a site: {self.ordering}")
        if not self.sizes or list(self.sizes) != sorted(set(self.sizes)):
            raise ValueError(f"level sizes must be strictly increasing: {self.sizes}")
        if self.sizes[0] < 0 or self.sizes[-1] != N:
            raise ValueError(f"levels must lie in [0, {N}] and end at {N}")

    @classmethod
    def full(cls, ordering: Sequence[str]) -> "Chain":
        return cls(tuple(ordering), tuple(range(len(ordering) + 1)))

    @classmethod
    def from_levels(cls, ordering: Sequence[str], levels: Sequence[Iterable[str]]) -> "Chain":
        ordering = tuple(ordering)
        sizes = []
        for lev in levels:
            lev = frozenset(lev)
            k = len(lev)
            if lev != frozenset(ordering[:k]):
                raise ValueError(f"level {sorted(lev)} is not an initial segment of {list(ordering)}")
            sizes.append(k)
        return cls(ordering, tuple(sizes))

    def level(self, k: int) -> frozenset:
        return frozenset(self.ordering[:k])

    def levels(self) -> list[frozenset]:
        return [self.level(k) for k in self.sizes]

    def covering_sizes(self, n: Iterable[str]) -> list[int]:
        """Sizes of all chain levels containing n, smallest first."""
        n = frozenset(n)
        need = max((self.ordering.index(q) + 1 for q in n), default=0)
        return [k for k in self.sizes if k >= need]


def wedge_basis(h: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(h), k))


def scalar_coords(w: WedgeTensor, basis_index: Mapping[tuple[int, ...], int]) -> list[int]:
    out = [0] * len(basis_index)
    for I, c in w.scalar_part().items():
        out[basis_index[I]] = c
    return out


def selmer_wedge_generators(T: SevenTuple, n: Iterable[str], k: int) -> list[WedgeTensor]:
    """k-fold wedges of generators of S^n, as elements of wedge^k H."""
    if k < 0:
        raise ValueError("k must be >= 0")
    n = frozenset(n)
    key = ("selwedge", n, k)
    if key in T._cache:
        return T._cache[key]
    if k == 0:
        out = [WedgeTensor.scalar(T.h, T.sites, 1)]
    else:
        gens = howell_rows(T.selmer(n), T.m, T.h)
        out = [w for w in (wedge(c, T.h, T.sites) for c in combinations(gens, k)) if w]
    T._cache[key] = out
    return out


def _selmer_wedge_span(T: SevenTuple, n: frozenset, k: int) -> RowSpan:
    key = ("selspan", n, k)
    if key not in T._cache:
        idx = {I: i for i, I in enumerate(wedge_basis(T.h, k))}
        gens = [scalar_coords(w, idx) for w in selmer_wedge_generators(T, n, k)]
        T._cache[key] = RowSpan(gens, T.m, len(idx))
    return T._cache[key]


@dataclass(eq=False)
class UnitSystem:
    instance: SevenTuple
    chain: Chain
    r: int
    eps_top: WedgeTensor
    _levels: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        N = len(self.chain.ordering)
        if set(self.chain.ordering) != set(self.instance.labels):
            raise ValueError("chain ordering must list every site exactly once")
        if (self.eps_top.r, self.eps_top.h) != (N + self.r, self.instance.h):
            raise ValueError(f"top element must lie in wedge^{N + self.r} H")
        if not self.eps_top.is_homogeneous(0):
            raise ValueError("top element must have scalar coefficients")

    @property
    def N(self) -> int:
        return len(self.chain.ordering)

    def component(self, k: int) -> WedgeTensor:
        """eps at the initial segment of size k: (-v_{q_k+1}) ... (-v_{q_N}) applied to eps_Sigma."""
        if not 0 <= k <= self.N:
            raise ValueError(f"no level of size {k}")
        if k not in self._levels:
            if k == self.N:
                self._levels[k] = self.eps_top
            else:
                q = self.chain.ordering[k]
                self._levels[k] = contract(self.instance.neg_v_fn(q), self.component(k + 1))
        return self._levels[k]

    def __add__(self, other: "UnitSystem") -> "UnitSystem":
        return UnitSystem(self.instance, self.chain, self.r, self.eps_top + other.eps_top)

    def scale(self, c: int) -> "UnitSystem":
        return UnitSystem(self.instance, self.chain, self.r, self.eps_top * c)

    def to_json(self) -> dict:
        return {
            "ordering": list(self.chain.ordering),
            "chain": [list(self.chain.ordering[:k]) for k in self.chain.sizes],
            "r": self.r,
            "epsTop": self.eps_top.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, data: Mapping, instance: SevenTuple) -> "UnitSystem":
        try:
            chain = Chain.from_levels(data["ordering"], data["chain"])
            r = int(data["r"])
            top = WedgeTensor.from_json(data["epsTop"], len(chain.ordering) + r, instance.h, instance.sites)
        except (KeyError, TypeError, AttributeError) as e:
            raise ValueError(f"malformed unit-system JSON: {e!r}") from None
        return cls(instance, chain, r, top)


def zero_unit_system(T: SevenTuple, chain: Chain, r: int) -> UnitSystem:
    return UnitSystem(T, chain, r, WedgeTensor.zero(len(chain.ordering) + r, T.h, T.sites))


def build_unit_systems(T: SevenTuple, chain: Chain, r: int) -> list[UnitSystem]:
    """Generators of the module of unit systems along ``chain``.

    The admissible top elements form the submodule of wedge^{N+r} H cut out by
    the linear conditions eps_{n_i} in wedge S^{n_i}; it is computed level by
    level, each time solving for the coefficients a and y in
    L_i (sum_j a_j g_j) = sum_w y_w w over the current generators g_j.
    """
    N = len(chain.ordering)
    K = N + r
    if K > T.h:
        return [zero_unit_system(T, chain, r)]
    m = T.m
    top_basis = wedge_basis(T.h, K)
    gens = [[int(i == j) for j in range(len(top_basis))] for i in range(len(top_basis))]
    for k in sorted(chain.sizes, reverse=True):
        if k == N:
            continue  # S^Sigma = H, no condition
        span = _selmer_wedge_span(T, chain.level(k), k + r)
        dim = span.ncols
        if len(span.rows) == dim and all(row[i] == 1 for i, row in enumerate(span.rows)):
            continue  # the wedge span is everything
        idx = {I: i for i, I in enumerate(wedge_basis(T.h, k + r))}
        images = []
        for g in gens:
            top = _top_from_coords(T, top_basis, g)
            down = contract_seq([T.neg_v_fn(q) for q in chain.ordering[k:]], top)
            images.append(scalar_coords(down, idx))
        # columns: a (one per generator) then y (one per span row); rows: coordinates
        ncols = len(gens) + len(span.rows)
        A = [[images[j][c] for j in range(len(gens))] + [(-row[c]) % m for row in span.rows] for c in range(dim)]
        sol = kernel_generators(MatrixZm.from_rows(A, m, ncols))
        combos = []
        for s in sol:
            a = s[:len(gens)]
            combos.append([sum(a[j] * gens[j][b] for j in range(len(gens))) % m for b in range(len(top_basis))])
        gens = howell_rows(combos, m, len(top_basis)) if combos else []
        if not gens:
            break
    out = [UnitSystem(T, chain, r, _top_from_coords(T, top_basis, g)) for g in gens]
    return out or [zero_unit_system(T, chain, r)]


def _top_from_coords(T: SevenTuple, basis: Sequence[tuple[int, ...]], coords: Sequence[int]) -> WedgeTensor:
    K = len(basis[0]) if basis else 0
    coeffs = {I: GradedElement.const(T.sites, c) for I, c in zip(basis, coords) if c % T.m}
    return WedgeTensor(K, T.h, T.sites, coeffs)


@dataclass
class CompatibilityReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)


def check_compatibility(eps: UnitSystem) -> CompatibilityReport:
    """Transition compatibility and Selmer membership at every chain level."""
    T, chain = eps.instance, eps.chain
    checks = []
    cur = eps.eps_top
    for k in range(eps.N, -1, -1):
        if k < eps.N:
            cur = contract(T.neg_v_fn(chain.ordering[k]), cur)
        if k not in chain.sizes:
            continue
        n = chain.level(k)
        label = tuple(chain.ordering[:k])
        stored = eps.component(k)
        checks.append(Check("transition", label, None, cur == stored))
        idx = {I: i for i, I in enumerate(wedge_basis(T.h, k + eps.r))}
        ok = stored.is_homogeneous(0) and scalar_coords(stored, idx) in _selmer_wedge_span(T, n, k + eps.r)
        detail = {} if ok else {"component": stored.to_json()}
        checks.append(Check("selmer_membership", label, None, ok, detail))
    return CompatibilityReport(checks)


# ---------------------------------------------------------------------------
# regulators


def _psi(T: SevenTuple, q: str, n: frozenset, flavor: str) -> Functional:
    if q not in n:
        return T.neg_v_fn(q)
    if flavor == "P":
        return T.phi_fn(q)
    if flavor == "T":
        return T.phi_fn(q, n)
    if flavor == "K":
        return T.phi_fn(q, (q,))
    raise ValueError(f"unknown regulator flavor {flavor!r}")


def _regulator_at(eps: UnitSystem, n: frozenset, flavor: str, k: int) -> WedgeTensor:
    T = eps.instance
    fs = [_psi(T, q, n, flavor) for q in eps.chain.ordering[:k]]
    return contract_seq(fs, eps.component(k))


class ChainDependenceError(RuntimeError):
    """Two chain levels gave different regulator values."""


def regulator(eps: UnitSystem, n: Iterable[str], flavor: str, cross_check: bool = True) -> WedgeTensor:
    """R_flavor(eps)_n using the smallest chain level containing n.

    With ``cross_check`` the value is recomputed at the next larger level and
    the two must agree.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown regulator flavor {flavor!r}")
    n = frozenset(n)
    sizes = eps.chain.covering_sizes(n)
    value = _regulator_at(eps, n, flavor, sizes[0])
    if cross_check and len(sizes) > 1:
        other = _regulator_at(eps, n, flavor, sizes[1])
        if other != value:
            raise ChainDependenceError(f"R_{flavor} at {sorted(n)} depends on the chain level")
    return value


def regulator_collection(eps: UnitSystem, flavor: str, cross_check: bool = True) -> SystemCollection:
    T = eps.instance
    entries = {n: regulator(eps, n, flavor, cross_check) for n in T.sites.subsets()}
    return SystemCollection(T, eps.r, _FLAVOR_KIND[flavor], entries)


# ---------------------------------------------------------------------------
# regulator modules


def regulator_module(T: SevenTuple, n: Iterable[str], r: int, order: Sequence[str] | None = None) -> list[WedgeTensor]:
    """Spanning set of the image of phi^n_{q_1} ^ ... ^ phi^n_{q_v} on wedge^{v+r} S^n."""
    n = frozenset(n)
    order = list(order) if order is not None else T.sites.ordered(n)
    if set(order) != n or len(order) != len(n):
        raise ValueError("order must list the elements of n")
    fs = [T.phi_fn(q, n) for q in order]
    out = []
    for w in selmer_wedge_generators(T, n, len(n) + r):
        img = contract_seq(fs, w)
        if img:
            out.append(img)
    return out


class TensorSpan:
    """Membership in the O-span of wedge tensors.

    Coordinates are (basis tuple, monomial) pairs; a coordinate whose
    coefficient group is Z/d with d < m gets the relation d * e added, so
    that the span is taken in the quotient module and not in O^coords.
    """

    def __init__(self, gens: Sequence[WedgeTensor], m: int):
        self.m = m
        keys = set()
        for g in gens:
            for I, c in g.coeffs.items():
                keys.update((I, mono) for mono in c.terms)
        self.keys = sorted(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        rows = [self.coords(g) for g in gens]
        if gens:
            amb = gens[0].ambient
            for i, (_, mono) in enumerate(self.keys):
                d = amb.divisor(mono)
                if d < m:
                    row = [0] * len(self.keys)
                    row[i] = d
                    rows.append(row)
        self.span = RowSpan(rows, m, len(self.keys))

    def coords(self, w: WedgeTensor) -> list[int] | None:
        out = [0] * len(self.keys)
        for I, c in w.coeffs.items():
            for mono, a in c.terms.items():
                i = self.index.get((I, mono))
                if i is None:
                    return None
                out[i] = a
        return out

    def __contains__(self, w: WedgeTensor) -> bool:
        v = self.coords(w)
        return v is not None and v in self.span


def regulator_module_span(T: SevenTuple, n: Iterable[str], r: int) -> TensorSpan:
    n = frozenset(n)
    key = ("regspan", n, r)
    if key not in T._cache:
        T._cache[key] = TensorSpan(regulator_module(T, n, r), T.m)
    return T._cache[key]
