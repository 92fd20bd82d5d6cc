"""Exact arithmetic in Z/m and its quotients Z/gcd(t, m).

Hot paths elsewhere in the package work on plain ``int`` residues; the
:class:`Residue` type is the typed surface for callers that want the
divisor carried along with the value.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class Modulus:
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"modulus must be >= 2, got {self.m}")


@dataclass(frozen=True)
class Residue:
    """An element of Z/d stored by its canonical representative."""

    value: int
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"invalid modulus {self.d}")
        if not 0 <= self.value < self.d:
            raise ValueError(f"{self.value} is not reduced mod {self.d}")

    def _check(self, other: "Residue") -> None:
        if not isinstance(other, Residue):
            raise TypeError(f"expected Residue, got {type(other).__name__}")
        if other.d != self.d:
            raise TypeError(f"divisor mismatch: Z/{self.d} vs Z/{other.d}")

    def __add__(self, other):
        self._check(other)
        return Residue((self.value + other.value) % self.d, self.d)

    def __sub__(self, other):
        self._check(other)
        return Residue((self.value - other.value) % self.d, self.d)

    def __mul__(self, other):
        self._check(other)
        return Residue((self.value * other.value) % self.d, self.d)

    def __neg__(self):
        return Residue((-self.value) % self.d, self.d)

    def __int__(self):
        return self.value


def reduce(x: int, d: int) -> Residue:
    if d < 1:
        raise ValueError(f"invalid modulus {d}")
    return Residue(x % d, d)


def ideal_content(t: int, m: int | Modulus) -> int:
    """Generator of the ideal (t) in Z/m, so that (Z/m)/(t) is Z/gcd(t, m)."""
    if isinstance(m, Modulus):
        m = m.m
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    return gcd(t, m)


def ring_ops(a: Residue, b: Residue, op: str) -> Residue:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def inverse(a: int, m: int) -> int:
    g, s, _ = xgcd(a % m, m)
    if g != 1:
        raise ZeroDivisionError(f"{a} is not invertible mod {m}")
    return s % m


def normalizing_unit(a: int, m: int) -> int:
    """A unit w of Z/m with w*a = gcd(a, m) (mod m).

    Used to turn echelon pivots into divisors of m.
    """
    a %= m
    if a == 0:
        return 1
    g = gcd(a, m)
    mg = m // g
    w = inverse(a // g, mg) if mg > 1 else 1
    # any lift of w mod m/g works; pick one that is a unit mod m
    while gcd(w, m) != 1:
        w += mg
    return w % m
