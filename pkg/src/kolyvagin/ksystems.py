"""Kolyvagin-system collections, their axioms, and the maps between them.

A collection assigns a wedge tensor to every subset n of the site set.  The
four flavours are

    KS   kappa_n  in  wedge^r H (x) G(n)_{nu(n)}        axioms K1-K4
    TKS  theta_n  in  wedge^r H (x) G(n)_{nu(n)}        axioms TK1-TK4
    PKS  kappa~_n in  wedge^r H (x) G(Sigma)_{nu(n)}    axioms PK1-PK5
    DKS  kappa'_n in  wedge^r H (x) G(n)_{nu(n)}        axioms DK1-DK4

and RAW is an arbitrary element of the ambient product module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .exterior import WedgeTensor, contract
from .gradedalg import GradedElement, determinant, project, s_operator
from .instance import SevenTuple

KINDS = ("KS", "TKS", "PKS", "DKS", "RAW")


class KindError(ValueError):
    """A map or check was applied to a collection of the wrong flavour."""


@dataclass
class SystemCollection:
    instance: SevenTuple
    r: int
    kind: str
    entries: dict[frozenset, WedgeTensor]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.r < 1:
            raise ValueError(f"rank must be >= 1, got {self.r}")
        T = self.instance
        full = {}
        for n in T.sites.subsets():
            w = self.entries.get(n)
            if w is None:
                w = WedgeTensor.zero(self.r, T.h, T.sites)
            elif (w.r, w.h) != (self.r, T.h):
                raise ValueError(f"entry at {sorted(n)} has rank ({w.r},{w.h}), expected ({self.r},{T.h})")
            full[n] = w
        extra = set(self.entries) - set(full)
        if extra:
            raise ValueError(f"entries indexed by unknown subsets: {[sorted(x) for x in extra]}")
        self.entries = full

    def __getitem__(self, n: Iterable[str]) -> WedgeTensor:
        return self.entries[frozenset(n)]

    def subsets(self) -> list[frozenset]:
        return self.instance.sites.subsets()

    def with_entries(self, entries: Mapping[frozenset, WedgeTensor], kind: str) -> "SystemCollection":
        return SystemCollection(self.instance, self.r, kind, dict(entries))

    def __eq__(self, other):
        if not isinstance(other, SystemCollection):
            return NotImplemented
        return self.r == other.r and self.entries == other.entries

    def __add__(self, other: "SystemCollection") -> "SystemCollection":
        kind = self.kind if self.kind == other.kind else "RAW"
        return self.with_entries({n: self.entries[n] + other.entries[n] for n in self.entries}, kind)

    def scale(self, c: int) -> "SystemCollection":
        return self.with_entries({n: w * c for n, w in self.entries.items()}, self.kind)

    def is_zero(self) -> bool:
        return all(w.is_zero() for w in self.entries.values())

    def shape_violations(self) -> list[str]:
        """Degree and support problems for the collection's declared flavour."""
        out = []
        for n, w in self.entries.items():
            if not w.is_homogeneous(len(n)):
                out.append(f"entry at {sorted(n)} is not homogeneous of degree {len(n)}")
            if self.kind in ("KS", "TKS", "DKS") and not w.support() <= n:
                out.append(f"entry at {sorted(n)} has graded support outside n")
        return out

    def to_json(self) -> dict:
        T = self.instance
        ents = [{"n": T.sites.ordered(n), "value": self.entries[n].to_json()} for n in self.subsets()]
        return {"kind": self.kind, "r": self.r, "entries": ents}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, data: Mapping, instance: SevenTuple) -> "SystemCollection":
        try:
            r = int(data["r"])
            kind = str(data["kind"])
            entries = {}
            for rec in data["entries"]:
                n = frozenset(str(x) for x in rec["n"])
                for q in n:
                    instance.sites.index(q)
                if n in entries:
                    raise ValueError(f"duplicate entry for {sorted(n)}")
                entries[n] = WedgeTensor.from_json(rec["value"], r, instance.h, instance.sites)
        except (KeyError, TypeError, AttributeError) as e:
            raise ValueError(f"malformed system JSON: {e!r}") from None
        return cls(instance, r, kind, entries)


def zero_collection(T: SevenTuple, r: int, kind: str) -> SystemCollection:
    return SystemCollection(T, r, kind, {})


def random_collection(T: SevenTuple, r: int, rng: np.random.Generator, full_support: bool = False,
                      density: float = 1.0) -> SystemCollection:
    """A RAW collection with uniformly random entries of the right degree.

    Entries are supported in n unless ``full_support`` (the PKS-shaped module).
    """
    amb = T.sites
    entries = {}
    bases = list(combinations(range(T.h), r))
    for n in amb.subsets():
        labels = amb.labels if full_support else amb.ordered(n)
        monos = amb.monomials(len(n), labels)
        coeffs = {}
        for I in bases:
            terms = {}
            for mono in monos:
                if density < 1.0 and rng.random() > density:
                    continue
                terms[mono] = int(rng.integers(0, amb.divisor(mono)))
            coeffs[I] = GradedElement(amb, terms)
        entries[n] = WedgeTensor(r, T.h, amb, coeffs)
    return SystemCollection(T, r, "RAW", entries)


# ---------------------------------------------------------------------------
# cached products of projected P's


def _prod(T: SevenTuple, tag: str, n: frozenset, d: frozenset, factor: Callable[[str], GradedElement]) -> GradedElement:
    key = ("prod", tag, n, d)
    cache = T._cache
    if key not in cache:
        out = GradedElement.const(T.sites, 1)
        for q in T.sites.ordered(n - d):
            out = out * factor(q)
        cache[key] = out
    return cache[key]


def prod_pk(T: SevenTuple, n: frozenset, d: frozenset) -> GradedElement:
    """prod over q in n/d of pi_{n/q}(P_q)."""
    return _prod(T, "pk", n, d, lambda q: project(T.P[q], n - {q}))


def prod_td(T: SevenTuple, n: frozenset, d: frozenset) -> GradedElement:
    """prod over q in n/d of pi_d(P_q)."""
    return _prod(T, "td", n, d, lambda q: project(T.P[q], d))


def prod_rest(T: SevenTuple, n: frozenset, d: frozenset) -> GradedElement:
    """prod over q in n/d of P_q restricted to Sigma/n."""
    rest = frozenset(T.labels) - n
    return _prod(T, "rest", n, d, lambda q: project(T.P[q], rest))


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _proper_subsets(T: SevenTuple, n: frozenset) -> list[frozenset]:
    return [d for d in T.sites.subsets(n) if d != n]


# ---------------------------------------------------------------------------
# forward maps


_FORWARD_KINDS = {
    "pt": ("PKS", "TKS"),
    "pk": ("PKS", "KS"),
    "tk": ("TKS", "KS"),
    "td": ("TKS", "DKS"),
    "dk": ("DKS", "KS"),
    "gpk": ("KS", "PKS"),
    "gtd": ("DKS", "TKS"),
    "gtk": ("KS", "TKS"),
}


def _out_kind(name: str, S: SystemCollection) -> str:
    src, dst = _FORWARD_KINDS[name]
    if S.kind == src:
        return dst
    if S.kind == "RAW":
        return "RAW"
    raise KindError(f"map {name} expects a {src} or RAW collection, got {S.kind}")


def f_pt(S: SystemCollection) -> SystemCollection:
    kind = _out_kind("pt", S)
    return S.with_entries({n: project(w, n) for n, w in S.entries.items()}, kind)


def f_pk(S: SystemCollection) -> SystemCollection:
    kind = _out_kind("pk", S)
    T = S.instance
    out = {}
    for n in S.subsets():
        acc = WedgeTensor.zero(S.r, T.h, T.sites)
        for d in T.sites.subsets(n):
            term = project(S.entries[d], n) * prod_pk(T, n, d)
            acc = acc + term * _sign(len(n - d))
        out[n] = acc
    return S.with_entries(out, kind)


def f_tk(S: SystemCollection) -> SystemCollection:
    kind = _out_kind("tk", S)
    T = S.instance
    out = {}
    for n in S.subsets():
        acc = WedgeTensor.zero(S.r, T.h, T.sites)
        for d in T.sites.subsets(n):
            acc = acc + S.entries[d] * T.D(n, n - d)
        out[n] = acc
    return S.with_entries(out, kind)


def f_td(S: SystemCollection) -> SystemCollection:
    kind = _out_kind("td", S)
    T = S.instance
    out = {}
    for n in S.subsets():
        acc = WedgeTensor.zero(S.r, T.h, T.sites)
        for d in T.sites.subsets(n):
            acc = acc + S.entries[d] * prod_td(T, n, d) * _sign(len(n - d))
        out[n] = acc
    return S.with_entries(out, kind)


def f_dk(S: SystemCollection) -> SystemCollection:
    kind = _out_kind("dk", S)
    T = S.instance
    out = {}
    for n in S.subsets():
        acc = WedgeTensor.zero(S.r, T.h, T.sites)
        for d in T.sites.subsets(n):
            acc = acc + S.entries[d] * T.D_full(n - d)
        out[n] = acc
    return S.with_entries(out, kind)


# ---------------------------------------------------------------------------
# inverses, by recursion on nu(n)


def g_pk(S: SystemCollection) -> SystemCollection:
    """kappa~_n = kappa_n + sum_{d < n} pi_n(kappa~_d) {prod P_q|_(Sigma/n) - (-1)^nu(n/d) prod pi_(n/q)(P_q)}."""
    kind = _out_kind("gpk", S)
    T = S.instance
    out: dict[frozenset, WedgeTensor] = {}
    for n in S.subsets():
        acc = S.entries[n]
        for d in _proper_subsets(T, n):
            bracket = prod_rest(T, n, d) - prod_pk(T, n, d) * _sign(len(n - d))
            acc = acc + project(out[d], n) * bracket
        out[n] = acc
    return S.with_entries(out, kind)


def g_td(S: SystemCollection) -> SystemCollection:
    """theta_n = kappa'_n - sum_{d < n} (-1)^nu(n/d) theta_d prod pi_d(P_q)."""
    kind = _out_kind("gtd", S)
    T = S.instance
    out: dict[frozenset, WedgeTensor] = {}
    for n in S.subsets():
        acc = S.entries[n]
        for d in _proper_subsets(T, n):
            acc = acc - out[d] * prod_td(T, n, d) * _sign(len(n - d))
        out[n] = acc
    return S.with_entries(out, kind)


def g_tk(S: SystemCollection) -> SystemCollection:
    """theta_n = a_n - sum_{d < n} theta_d D_{n, n/d}; forced by D_{n,1} = 1."""
    kind = _out_kind("gtk", S)
    T = S.instance
    out: dict[frozenset, WedgeTensor] = {}
    for n in S.subsets():
        acc = S.entries[n]
        for d in _proper_subsets(T, n):
            acc = acc - out[d] * T.D(n, n - d)
        out[n] = acc
    return S.with_entries(out, kind)


TRANSFORMS: dict[str, Callable[[SystemCollection], SystemCollection]] = {
    "pt": f_pt, "pk": f_pk, "tk": f_tk, "td": f_td, "dk": f_dk,
    "gpk": g_pk, "gtd": g_td, "gtk": g_tk,
}


# ---------------------------------------------------------------------------
# axioms


@dataclass
class Check:
    name: str
    n: tuple[str, ...] | None = None
    q: str | None = None
    passed: bool = True
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.n is not None:
            out["n"] = list(self.n)
        if self.q is not None:
            out["q"] = self.q
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class AxiomReport:
    kind: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> Check | None:
        bad = self.failures()
        return bad[0] if bad else None


class _Checker:
    def __init__(self, S: SystemCollection):
        self.S = S
        self.T = S.instance
        self.checks: list[Check] = []

    def record(self, name: str, n: frozenset, q: str | None, lhs: WedgeTensor,
               rhs: WedgeTensor | None = None) -> None:
        ok = lhs.is_zero() if rhs is None else lhs == rhs
        detail = {}
        if not ok:
            detail["lhs"] = lhs.to_json()
            detail["rhs"] = [] if rhs is None else rhs.to_json()
        self.checks.append(Check(name, tuple(self.T.sites.ordered(n)), q, ok, detail))

    def v(self, q, w):
        return contract(self.T.v_fn(q), w)

    def u(self, q, w):
        return contract(self.T.u_fn(q), w)

    def phi(self, q, w):
        return contract(self.T.phi_fn(q), w)

    def zero(self):
        return WedgeTensor.zero(self.S.r, self.T.h, self.T.sites)

    def check_v_outside(self, prefix: str, n: frozenset) -> None:
        for q in self.T.labels:
            if q not in n:
                self.record(prefix + "1", n, q, self.v(q, self.S.entries[n]))


def check_axioms(S: SystemCollection) -> AxiomReport:
    """Evaluate every axiom of the collection's flavour at every (n, q)."""
    if S.kind == "RAW":
        raise KindError("no axioms are defined for RAW collections")
    ck = _Checker(S)
    for msg in S.shape_violations():
        ck.checks.append(Check("shape", None, None, False, {"message": msg}))
    {"KS": _check_ks, "TKS": _check_tks, "PKS": _check_pks, "DKS": _check_dks}[S.kind](ck)
    return AxiomReport(S.kind, ck.checks)


def _check_ks(ck: _Checker) -> None:
    E, T = ck.S.entries, ck.T
    for n in ck.S.subsets():
        ck.check_v_outside("K", n)
        for q in T.sites.ordered(n):
            ck.record("K2", n, q, ck.u(q, E[n]))
            ck.record("K3", n, q, ck.v(q, E[n]), ck.phi(q, E[n - {q}]))
            ck.record("K4", n, q, project(E[n], n - {q}))


def _check_tks(ck: _Checker) -> None:
    E, T = ck.S.entries, ck.T
    for n in ck.S.subsets():
        ck.check_v_outside("TK", n)
        if not n:
            continue
        tk2 = ck.zero()
        for d in T.sites.subsets(n):
            tk2 = tk2 + E[d] * T.D(n, n - d)
        sn = s_operator(E[n], n, n)
        for q in T.sites.ordered(n):
            nq = n - {q}
            ck.record("TK2", n, q, ck.u(q, tk2))
            ck.record("TK3", n, q, ck.v(q, sn), ck.phi(q, s_operator(E[nq], nq, nq)))
            ck.record("TK4", n, q, project(E[n], nq), E[nq] * project(T.P[q], nq))


def _check_pks(ck: _Checker) -> None:
    E, T = ck.S.entries, ck.T
    for n in ck.S.subsets():
        ck.check_v_outside("PK", n)
        pk2 = ck.zero()
        pk5 = ck.zero()
        for d in T.sites.subsets(n):
            pn = project(E[d], n)
            pk2 = pk2 + pn * prod_pk(T, n, d) * _sign(len(n - d))
            pk5 = pk5 + pn * prod_rest(T, n, d)
        for q in T.sites.ordered(n):
            nq = n - {q}
            rest = frozenset(T.labels) - {q}
            ck.record("PK2", n, q, ck.u(q, pk2))
            ck.record("PK3", n, q, ck.v(q, E[n]), ck.phi(q, E[nq]))
            ck.record("PK4", n, q, project(E[n], rest), project(E[nq], rest) * T.P[q])
        ck.record("PK5", n, None, E[n], pk5)


def _check_dks(ck: _Checker) -> None:
    E, T = ck.S.entries, ck.T
    for n in ck.S.subsets():
        ck.check_v_outside("DK", n)
        if not n:
            continue
        dk2 = ck.zero()
        for d in T.sites.subsets(n):
            dk2 = dk2 + E[d] * T.D_full(n - d)
        for q in T.sites.ordered(n):
            ck.record("DK2", n, q, ck.u(q, dk2))
            ck.record("DK3", n, q, ck.v(q, E[n]), ck.phi(q, E[n - {q}]))
            ck.record("DK4", n, q, project(E[n], n - {q}))


# ---------------------------------------------------------------------------
# ordered partitions and the signed determinant identity


def ordered_partitions(items: Iterable) -> list[tuple[frozenset, ...]]:
    """Every sequence of disjoint nonempty blocks covering ``items``."""
    items = list(items)
    if not items:
        return [()]
    out = []
    for k in range(1, len(items) + 1):
        for first in combinations(items, k):
            rest = [x for x in items if x not in first]
            for tail in ordered_partitions(rest) if rest else [()]:
                out.append((frozenset(first),) + tail)
    return out


def ordered_bell(n: int) -> int:
    a = [1]
    for k in range(1, n + 1):
        a.append(sum(comb(k, j) * a[k - j] for j in range(1, k + 1)))
    return a[n]


@dataclass(frozen=True)
class IdentityResult:
    lhs: int
    rhs: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def partition_det_identity(A: Sequence[Sequence[int]], m: int) -> IdentityResult:
    """(-1)^nu |A| against the ordered-partition expansion, both mod m.

    A block sequence (C_1..C_k) contributes (-1)^|C_k| times the full row sums
    over C_k times, for each earlier block C_i, the row sums restricted to the
    columns of C_{i+1}.
    """
    nu = len(A)
    if nu < 1 or any(len(row) != nu for row in A):
        raise ValueError("A must be a nonempty square matrix")
    A = [[x % m for x in row] for row in A]
    det = determinant(A, 0, 1) % m
    lhs = (-det if nu % 2 else det) % m
    rhs = 0
    for blocks in ordered_partitions(range(nu)):
        last = blocks[-1]
        term = _sign(len(last))
        for i in last:
            term *= sum(A[i])
        for cur, nxt in zip(blocks, blocks[1:]):
            for i in cur:
                term *= sum(A[i][j] for j in nxt)
        rhs += term
    return IdentityResult(lhs, rhs % m)
