"""Exterior powers of a free module H = O^h tensored with the graded algebra.

Elements of (wedge^r H) (x) G are stored as a map from strictly increasing
r-tuples of basis indices to graded coefficients.  Functionals act by the
interior-product rule

    f(m_1 ^ ... ^ m_r) = sum_i (-1)^(i-1) m_1 ^ .. (omit m_i) .. ^ m_r (x) f(m_i)

and a list [f_1, ..., f_s] acts as f_1 o ... o f_s (f_s is applied first).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .gradedalg import GradedElement, SiteSet, graded_piece, project

Basis = tuple[int, ...]


class WedgeTensor:
    __slots__ = ("r", "h", "ambient", "coeffs")

    def __init__(self, r: int, h: int, ambient: SiteSet, coeffs: Mapping[Basis, GradedElement] | None = None):
        self.r = r
        self.h = h
        self.ambient = ambient
        self.coeffs = {I: c for I, c in (coeffs or {}).items() if c}

    @classmethod
    def zero(cls, r: int, h: int, ambient: SiteSet) -> "WedgeTensor":
        return cls(r, h, ambient)

    @classmethod
    def basis(cls, indices: Sequence[int], h: int, ambient: SiteSet, coeff: GradedElement | int = 1) -> "WedgeTensor":
        """The basis wedge e_{i1} ^ ... ^ e_{ir} with the given coefficient."""
        if isinstance(coeff, int):
            coeff = GradedElement.const(ambient, coeff)
        I = tuple(indices)
        if list(I) != sorted(set(I)):
            raise ValueError(f"basis indices must be strictly increasing: {I}")
        return cls(len(I), h, ambient, {I: coeff})

    @classmethod
    def scalar(cls, h: int, ambient: SiteSet, coeff: GradedElement | int) -> "WedgeTensor":
        return cls.basis((), h, ambient, coeff)

    def _same(self, other: "WedgeTensor") -> None:
        if not isinstance(other, WedgeTensor):
            raise TypeError(f"expected WedgeTensor, got {type(other).__name__}")
        if (self.r, self.h) != (other.r, other.h):
            raise TypeError(f"rank mismatch: ({self.r},{self.h}) vs ({other.r},{other.h})")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for I, c in other.coeffs.items():
            out[I] = out[I] + c if I in out else c
        return WedgeTensor(self.r, self.h, self.ambient, out)

    def __neg__(self):
        return WedgeTensor(self.r, self.h, self.ambient, {I: -c for I, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, g):
        """Multiply the tensor factor by a graded element or an integer."""
        if isinstance(g, int):
            return self.map_coeffs(lambda c: c.scale(g))
        if not isinstance(g, GradedElement):
            return NotImplemented
        if not g:
            return WedgeTensor.zero(self.r, self.h, self.ambient)
        return self.map_coeffs(lambda c: c * g)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, WedgeTensor):
            return NotImplemented
        return (self.r, self.h) == (other.r, other.h) and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def map_coeffs(self, fn: Callable[[GradedElement], GradedElement]) -> "WedgeTensor":
        return WedgeTensor(self.r, self.h, self.ambient, {I: fn(c) for I, c in self.coeffs.items()})

    def reduce_mod(self, t: int) -> "WedgeTensor":
        return self.map_coeffs(lambda c: c.reduce_mod(t))

    def is_homogeneous(self, degree: int) -> bool:
        return all(c.is_homogeneous(degree) for c in self.coeffs.values())

    def support(self) -> frozenset:
        out = frozenset()
        for c in self.coeffs.values():
            out |= c.support()
        return out

    def scalar_part(self) -> dict[Basis, int]:
        """Coefficients as integers; valid only for degree-0 tensors."""
        out = {}
        for I, c in self.coeffs.items():
            if not c.is_homogeneous(0):
                raise ValueError("tensor has a non-constant coefficient")
            out[I] = c.constant_term()
        return out

    def __repr__(self):
        from .gradedalg import format_graded
        body = ", ".join(f"{I}: {format_graded(c)}" for I, c in sorted(self.coeffs.items()))
        return f"WedgeTensor(r={self.r}, h={self.h}, {{{body}}})"

    def to_json(self) -> list[dict]:
        return [{"basis": list(I), "value": c.to_json()} for I, c in sorted(self.coeffs.items())]

    @classmethod
    def from_json(cls, data: Sequence[Mapping], r: int, h: int, ambient: SiteSet) -> "WedgeTensor":
        out: dict[Basis, GradedElement] = {}
        for rec in data:
            I = tuple(int(i) for i in rec["basis"])
            if len(I) != r or list(I) != sorted(set(I)) or (I and not 0 <= I[0] <= I[-1] < h):
                raise ValueError(f"bad basis tuple {I} for rank {r} in H of rank {h}")
            c = GradedElement.from_json(ambient, rec["value"])
            out[I] = out[I] + c if I in out else c
        return cls(r, h, ambient, out)


@dataclass(frozen=True)
class Functional:
    """A homomorphism H -> B given by its values on the basis of H.

    kind "O": values in O; "O/t": values in O/(t); "G1": degree-1 graded values.
    """

    kind: str
    values: tuple[GradedElement, ...]
    t: int | None = None

    def __post_init__(self):
        if self.kind not in ("O", "O/t", "G1"):
            raise ValueError(f"unknown functional kind {self.kind!r}")
        if self.kind == "O/t" and not self.t:
            raise ValueError("O/t functional needs t")
        deg = 1 if self.kind == "G1" else 0
        for v in self.values:
            if not v.is_homogeneous(deg):
                raise ValueError(f"{self.kind} functional value {v!r} is not of degree {deg}")

    @classmethod
    def scalar(cls, ambient: SiteSet, values: Sequence[int], t: int | None = None) -> "Functional":
        vals = tuple(GradedElement.const(ambient, int(v)) for v in values)
        return cls("O/t" if t is not None else "O", vals, t)

    @classmethod
    def graded(cls, values: Sequence[GradedElement]) -> "Functional":
        return cls("G1", tuple(values))

    @property
    def h(self) -> int:
        return len(self.values)

    def __neg__(self):
        return Functional(self.kind, tuple(-v for v in self.values), self.t)

    def project(self, labels: Iterable[str]) -> "Functional":
        labels = frozenset(labels)
        return Functional(self.kind, tuple(project(v, labels) for v in self.values), self.t)

    def __call__(self, vector: Sequence[int]) -> GradedElement:
        """Value on a coordinate vector of H."""
        amb = self.values[0].ambient
        out = GradedElement.zero(amb)
        for a, v in zip(vector, self.values):
            if a % amb.m:
                out = out + v.scale(a)
        return out.reduce_mod(self.t) if self.kind == "O/t" else out


def wedge(vectors: Sequence[Sequence[int]], h: int, ambient: SiteSet) -> WedgeTensor:
    """m_1 ^ ... ^ m_r for coordinate vectors over O."""
    m = ambient.m
    cur: dict[Basis, int] = {(): 1}
    for v in vectors:
        if len(v) != h:
            raise ValueError(f"vector of length {len(v)} in H of rank {h}")
        nxt: dict[Basis, int] = {}
        for I, c in cur.items():
            for j, a in enumerate(v):
                a %= m
                if not a or j in I:
                    continue
                pos = sum(1 for i in I if i < j)
                sign = -1 if (len(I) - pos) % 2 else 1
                J = I[:pos] + (j,) + I[pos:]
                nxt[J] = nxt.get(J, 0) + sign * c * a
        cur = {I: c % m for I, c in nxt.items() if c % m}
    coeffs = {I: GradedElement.const(ambient, c) for I, c in cur.items()}
    return WedgeTensor(len(vectors), h, ambient, coeffs)


def contract(f: Functional, w: WedgeTensor) -> WedgeTensor:
    if w.r < 1:
        raise ValueError("cannot contract a rank-0 tensor")
    if f.h != w.h:
        raise ValueError(f"functional on rank {f.h} applied to H of rank {w.h}")
    vals = f.values
    scalars = None
    if f.kind != "G1":
        scalars = [v.constant_term() for v in vals]
    out: dict[Basis, GradedElement] = {}
    for I, c in w.coeffs.items():
        for pos, idx in enumerate(I):
            if scalars is not None:
                a = scalars[idx]
                if not a:
                    continue
                term = c.scale(-a if pos % 2 else a)
            else:
                val = vals[idx]
                if not val:
                    continue
                term = c * val
                if pos % 2:
                    term = -term
            J = I[:pos] + I[pos + 1:]
            out[J] = out[J] + term if J in out else term
    res = WedgeTensor(w.r - 1, w.h, w.ambient, out)
    return res.reduce_mod(f.t) if f.kind == "O/t" else res


def contract_seq(fs: Sequence[Functional], w: WedgeTensor) -> WedgeTensor:
    """(f_1 ^ ... ^ f_s)(w) = f_1(f_2(...f_s(w)))."""
    if len(fs) > w.r:
        raise ValueError(f"{len(fs)} functionals exceed rank {w.r}")
    for f in reversed(fs):
        w = contract(f, w)
    return w


def homogeneous_part(w: WedgeTensor, degree: int) -> WedgeTensor:
    return graded_piece(w, degree)
