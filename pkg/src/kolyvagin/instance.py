"""The data (O, Sigma, H, t, v, u, P) that every system lives over.

O = Z/m, H = O^h with its standard basis, v_q : H -> O, u_q : H -> O/(t_q)
and P_q a degree-1 graded element supported away from q.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exterior import Functional
from .gradedalg import GradedElement, SiteSet, check_p_entry, det_D, det_D_full, project
from .linalg import MatrixZm, kernel_generators


@dataclass(frozen=True)
class InstanceParams:
    m: int
    ts: tuple[int, ...]
    h: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"modulus must be >= 2, got {self.m}")
        if self.h < 1:
            raise ValueError(f"H rank must be >= 1, got {self.h}")
        if any(t < 1 for t in self.ts):
            raise ValueError(f"t values must be >= 1, got {self.ts}")
        if self.labels is not None and len(self.labels) != len(self.ts):
            raise ValueError("one label per t value is required")

    def site_labels(self) -> tuple[str, ...]:
        return self.labels or tuple(f"q{i + 1}" for i in range(len(self.ts)))


@dataclass(frozen=True, eq=False)
class SevenTuple:
    sites: SiteSet
    h: int
    v: Mapping[str, tuple[int, ...]]
    u: Mapping[str, tuple[int, ...]]
    P: Mapping[str, GradedElement]
    metadata: Mapping[str, object] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        problems = self.invariant_violations()
        if problems:
            raise ValueError("invalid instance: " + "; ".join(problems))

    @property
    def m(self) -> int:
        return self.sites.m

    @property
    def labels(self) -> tuple[str, ...]:
        return self.sites.labels

    def invariant_violations(self) -> list[str]:
        out = []
        labels = set(self.sites.labels)
        for name, table in (("v", self.v), ("u", self.u), ("P", self.P)):
            if set(table) != labels:
                out.append(f"{name} must have exactly one entry per site")
        if out:
            return out
        for q in self.sites.labels:
            if len(self.v[q]) != self.h or len(self.u[q]) != self.h:
                out.append(f"v_{q}/u_{q} must have length {self.h}")
            if any(not 0 <= x < self.m for x in self.v[q]):
                out.append(f"v_{q} not reduced mod {self.m}")
            g = gcd(self.m, self.sites.t_of(q))
            if any(not 0 <= x < g for x in self.u[q]):
                out.append(f"u_{q} not reduced mod {g}")
            p = self.P[q]
            if p.ambient != self.sites:
                out.append(f"P_{q} lives over a different site set")
                continue
            try:
                check_p_entry(q, p)
            except ValueError as e:
                out.append(str(e))
        return out

    # functionals

    def v_fn(self, q: str) -> Functional:
        key = ("v", q)
        if key not in self._cache:
            self._cache[key] = Functional.scalar(self.sites, self.v[q])
        return self._cache[key]

    def neg_v_fn(self, q: str) -> Functional:
        key = ("-v", q)
        if key not in self._cache:
            self._cache[key] = -self.v_fn(q)
        return self._cache[key]

    def u_fn(self, q: str) -> Functional:
        key = ("u", q)
        if key not in self._cache:
            self._cache[key] = Functional.scalar(self.sites, self.u[q], t=self.sites.t_of(q))
        return self._cache[key]

    def phi_fn(self, q: str, n: Iterable[str] | None = None) -> Functional:
        """phi_q, or phi_q^n = pi_n o phi_q when ``n`` is given."""
        n = None if n is None else frozenset(n)
        key = ("phi", q, n)
        if key not in self._cache:
            amb = self.sites
            xq = GradedElement.var(amb, q)
            vals = [-(xq.scale(a) + self.P[q].scale(b)) for a, b in zip(self.u[q], self.v[q])]
            f = Functional.graded(vals)
            self._cache[key] = f if n is None else f.project(n)
        return self._cache[key]

    def D(self, n: Iterable[str], d: Iterable[str]) -> GradedElement:
        key = ("D", frozenset(n), frozenset(d))
        if key not in self._cache:
            self._cache[key] = det_D(self.sites, key[1], key[2], self.P)
        return self._cache[key]

    def D_full(self, d: Iterable[str]) -> GradedElement:
        key = ("Dfull", frozenset(d))
        if key not in self._cache:
            self._cache[key] = det_D_full(self.sites, key[1], self.P)
        return self._cache[key]

    def selmer(self, n: Iterable[str]) -> list[tuple[int, ...]]:
        key = ("sel", frozenset(n))
        if key not in self._cache:
            self._cache[key] = selmer_generators(self, key[1])
        return self._cache[key]

    # serialization

    def to_json(self) -> dict:
        out = {
            "modulus": self.m,
            "sites": [{"label": s.label, "t": s.t} for s in self.sites.sites],
            "hRank": self.h,
            "v": {q: list(self.v[q]) for q in self.labels},
            "u": {q: list(self.u[q]) for q in self.labels},
            "P": {q: self.P[q].to_json() for q in self.labels},
        }
        if self.metadata:
            out["metadata"] = dict(self.metadata)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, data: Mapping) -> "SevenTuple":
        try:
            m = int(data["modulus"])
            sites = SiteSet.make([s["label"] for s in data["sites"]], [s["t"] for s in data["sites"]], m)
            h = int(data["hRank"])
            v = {str(q): tuple(int(x) for x in row) for q, row in data["v"].items()}
            u = {str(q): tuple(int(x) for x in row) for q, row in data["u"].items()}
            P = {str(q): GradedElement.from_json(sites, rec) for q, rec in data["P"].items()}
        except (KeyError, TypeError, AttributeError) as e:
            raise ValueError(f"malformed instance JSON: {e!r}") from None
        return cls(sites, h, v, u, P, dict(data.get("metadata", {})))


def phi(T: SevenTuple, q: str, a: Sequence[int]) -> GradedElement:
    """phi_q(a) = -u_q(a) x_q - v_q(a) P_q."""
    if q not in T.v:
        raise KeyError(f"unknown site {q!r}")
    if len(a) != T.h:
        raise ValueError(f"vector of length {len(a)} in H of rank {T.h}")
    return T.phi_fn(q)(a)


def phi_n(T: SevenTuple, q: str, n: Iterable[str], a: Sequence[int]) -> GradedElement:
    return project(phi(T, q, a), n)


def selmer_generators(T: SevenTuple, n: Iterable[str]) -> list[tuple[int, ...]]:
    """Generators of S^n = {a in H : v_q(a) = 0 for q outside n}."""
    n = frozenset(n)
    rows = [T.v[q] for q in T.labels if q not in n]
    if not rows:
        return [tuple(int(i == j) for j in range(T.h)) for i in range(T.h)]
    return kernel_generators(MatrixZm.from_rows(rows, T.m, T.h))


def random_instance(seed: int | np.random.Generator, params: InstanceParams) -> SevenTuple:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m, h = params.m, params.h
    labels = params.site_labels()
    sites = SiteSet.make(labels, params.ts, m)
    v, u, P = {}, {}, {}
    for q in labels:
        v[q] = tuple(int(x) for x in rng.integers(0, m, size=h))
    for q in labels:
        g = gcd(m, sites.t_of(q))
        u[q] = tuple(int(x) for x in rng.integers(0, g, size=h))
    for q in labels:
        terms = GradedElement.zero(sites)
        for q2 in labels:
            if q2 == q:
                continue
            g = gcd(m, sites.t_of(q2))
            terms = terms + GradedElement.var(sites, q2, int(rng.integers(0, g)))
        P[q] = terms
    return SevenTuple(sites, h, v, u, P)
