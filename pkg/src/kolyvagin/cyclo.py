"""The instance attached to T = Z_p(1) over Q.

O = Z/M with M = p^k, the sites are primes l = 1 mod M, and H is spanned by
the classes of a few primes in Q^x/(Q^x)^M.  On H:

    v_l(a) = l-adic valuation of a            (mod M)
    u_l(a) = class of the unit part of a      (mod M, via a primitive root g_l)
    P_l    = -l * sum_q a_q x_q,  a_q = dlog_{g_q}(l mod q)  (image of 1 - l Fr_l)

Discrete logarithms are brute force; every prime here is small.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping, Sequence

from .gradedalg import GradedElement, SiteSet
from .instance import SevenTuple
from .modring import Residue


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_primitive_root(g: int, ell: int) -> bool:
    if g % ell == 0:
        return False
    return all(pow(g, (ell - 1) // f, ell) != 1 for f in prime_factors(ell - 1))


def primitive_root(ell: int) -> int:
    """Smallest primitive root mod the prime ``ell``."""
    return next(g for g in range(1, ell) if is_primitive_root(g, ell))


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


@lru_cache(maxsize=None)
def _dlog_table(g: int, ell: int) -> dict[int, int]:
    table, x = {}, 1
    for e in range(ell - 1):
        table[x] = e
        x = x * g % ell
    if len(table) != ell - 1:
        raise ValueError(f"{g} is not a primitive root mod {ell}")
    return table


def dlog(x: int, g: int, ell: int) -> int:
    """e in [0, ell-1) with g^e = x mod ell."""
    x %= ell
    if x == 0:
        raise ValueError(f"0 has no discrete log mod {ell}")
    return _dlog_table(g, ell)[x]


def sigma_primes(p: int, k: int, bound: int) -> list[int]:
    """Primes l <= bound with l = 1 mod p^k and l != p."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if k < 1:
        raise ValueError("k must be >= 1")
    M = p ** k
    return [ell for ell in range(M + 1, bound + 1, M) if ell != p and is_prime(ell)]


def _as_fraction(a) -> Fraction:
    a = Fraction(a)
    if a == 0:
        raise ValueError("valuations are undefined at 0")
    return a


def valuation(a, ell: int) -> int:
    a = _as_fraction(a)
    i, num, den = 0, abs(a.numerator), a.denominator
    while num % ell == 0:
        num //= ell
        i += 1
    while den % ell == 0:
        den //= ell
        i -= 1
    return i


def unit_part_mod(a, ell: int) -> int:
    """(a / l^v(a)) reduced mod l."""
    a = _as_fraction(a)
    i = valuation(a, ell)
    u = a / Fraction(ell) ** i
    return u.numerator * pow(u.denominator, -1, ell) % ell


def v_ell(a, ell: int, M: int) -> Residue:
    return Residue(valuation(a, ell) % M, M)


def u_ell(a, ell: int, M: int, g: int) -> Residue:
    """Discrete log, base zeta = g^((l-1)/M), of w^((l-1)/M) where w is the unit part of a."""
    if (ell - 1) % M:
        raise ValueError(f"{M} does not divide {ell} - 1")
    if not is_primitive_root(g, ell):
        raise ValueError(f"{g} is not a primitive root mod {ell}")
    e = (ell - 1) // M
    w = unit_part_mod(a, ell)
    zeta = pow(g, e, ell)
    target = pow(w, e, ell)
    x = 1
    for j in range(M):
        if x == target:
            return Residue(j, M)
        x = x * zeta % ell
    raise ValueError("discrete log failed; g is not a primitive root")


def frobenius_dlog(ell: int, q: int, g: int, p: int) -> Residue:
    """Component of Fr_l in the order-t_q quotient of (Z/q)^x, t_q the p-part of q-1."""
    if ell % q == 0:
        raise ValueError(f"{ell} is not prime to {q}")
    t = p_part(q - 1, p)
    return Residue(dlog(ell, g, q) % t, t)


def compute_Q(P: Sequence[int], M: int) -> list[int]:
    """Q with (x - 1) Q(x) = P(x) mod M; coefficients lowest degree first."""
    if sum(P) % M:
        raise ValueError("P(1) is not 0 mod M")
    n = len(P) - 1
    if n < 1:
        return [0]
    q = [0] * n
    q[n - 1] = P[n]
    for i in range(n - 1, 0, -1):
        q[i - 1] = P[i] + q[i]
    out = [c % M for c in q]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_mul_x_minus_1(Q: Sequence[int], M: int) -> list[int]:
    out = [0] * (len(Q) + 1)
    for i, c in enumerate(Q):
        out[i + 1] += c
        out[i] -= c
    return [c % M for c in out]


@dataclass(frozen=True)
class CycloConfig:
    p: int
    k: int
    sigma: tuple[int, ...]
    generators: tuple[Fraction, ...]
    roots: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        M = self.M
        if len(set(self.sigma)) != len(self.sigma):
            raise ValueError("repeated prime in sigma")
        for ell in self.sigma:
            if not is_prime(ell) or ell == self.p or (ell - 1) % M:
                raise ValueError(f"{ell} is not a prime = 1 mod {M} different from {self.p}")
        roots = dict(self.roots)
        for ell in self.sigma:
            g = roots.setdefault(ell, primitive_root(ell))
            if not is_primitive_root(g, ell):
                raise ValueError(f"{g} is not a primitive root mod {ell}")
        object.__setattr__(self, "roots", roots)
        gens = tuple(Fraction(a) for a in self.generators)
        if not gens:
            raise ValueError("at least one generator is required")
        if len(set(gens)) != len(gens):
            raise ValueError("generators must be distinct")
        for a in gens:
            if a.denominator != 1 or not is_prime(a.numerator):
                raise ValueError(f"generator {a} is not a prime")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "sigma", tuple(self.sigma))

    @property
    def M(self) -> int:
        return self.p ** self.k

    def t_of(self, ell: int) -> int:
        return p_part(ell - 1, self.p)

    def site_set(self) -> SiteSet:
        return SiteSet.make([str(ell) for ell in self.sigma], [self.t_of(ell) for ell in self.sigma], self.M)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "sigma": list(self.sigma),
            "roots": {str(ell): g for ell, g in sorted(self.roots.items())},
            "generators": [f"{a.numerator}/{a.denominator}" for a in self.generators],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CycloConfig":
        try:
            return cls(
                int(data["p"]), int(data["k"]),
                tuple(int(x) for x in data["sigma"]),
                tuple(Fraction(str(a)) for a in data["generators"]),
                {int(ell): int(g) for ell, g in data.get("roots", {}).items()},
            )
        except (KeyError, TypeError, ZeroDivisionError) as e:
            raise ValueError(f"malformed cyclotomic config: {e!r}") from None


def p_element(ell: int, cfg: CycloConfig, sites: SiteSet | None = None) -> GradedElement:
    """Image of P_l(Fr_l) = 1 - l Fr_l in degree one: -l * a_q on x_q for q != l."""
    if ell not in cfg.sigma:
        raise ValueError(f"{ell} is not in sigma")
    sites = sites or cfg.site_set()
    out = GradedElement.zero(sites)
    for q in cfg.sigma:
        if q == ell:
            continue
        a = frobenius_dlog(ell, q, cfg.roots[q], cfg.p).value
        out = out + GradedElement.var(sites, str(q), -ell * a)
    return out


def build_cyclotomic_instance(cfg: CycloConfig) -> SevenTuple:
    sites = cfg.site_set()
    M = cfg.M
    v, u, P = {}, {}, {}
    for ell in cfg.sigma:
        lab = str(ell)
        g = gcd(M, cfg.t_of(ell))
        v[lab] = tuple(v_ell(a, ell, M).value for a in cfg.generators)
        u[lab] = tuple(u_ell(a, ell, M, cfg.roots[ell]).value % g for a in cfg.generators)
        P[lab] = p_element(ell, cfg, sites)
    meta = {
        "source": "cyclotomic",
        "config": cfg.to_json(),
        "normalization": "sigma_l is the generator of the Galois group induced by the primitive root g_l",
    }
    return SevenTuple(sites, len(cfg.generators), v, u, P, meta)


def dumps_config(cfg: CycloConfig) -> str:
    return json.dumps(cfg.to_json(), sort_keys=True, indent=1)
