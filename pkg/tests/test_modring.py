import itertools

import pytest
from hypothesis import given, strategies as st

from kolyvagin.modring import Modulus, Residue, ideal_content, inverse, normalizing_unit, reduce, ring_ops, xgcd


@pytest.mark.parametrize("x,d,want", [(7, 3, 1), (-1, 9, 8), (12, 4, 0)])
def test_reduce_examples(x, d, want):
    assert reduce(x, d) == Residue(want, d)


@pytest.mark.parametrize("t,m,want", [(4, 6, 2), (3, 9, 3), (5, 9, 1)])
def test_ideal_content_examples(t, m, want):
    assert ideal_content(t, m) == want
    assert ideal_content(t, Modulus(m)) == want


def test_ring_ops_examples():
    assert ring_ops(Residue(2, 4), Residue(3, 4), "mul") == Residue(2, 4)
    a = Residue(5, 9)
    assert ring_ops(a, Residue(0, 9), "add") == a
    assert ring_ops(Residue(1, 9), Residue(1, 9), "neg") == Residue(8, 9)


def test_bad_inputs():
    with pytest.raises(ValueError):
        Residue(9, 9)
    with pytest.raises(ValueError):
        Modulus(1)
    with pytest.raises(TypeError):
        Residue(1, 4) + Residue(1, 8)
    with pytest.raises(ValueError):
        ring_ops(Residue(1, 4), Residue(1, 4), "div")
    with pytest.raises(ZeroDivisionError):
        inverse(2, 4)


@pytest.mark.parametrize("d", range(1, 13))
def test_ring_axioms_exhaustive(d):
    els = [Residue(v, d) for v in range(d)]
    zero, one = Residue(0, d), Residue(1 % d, d)
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a and a * b == b * a
        assert a - b == a + (-b)
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in els:
        assert a + zero == a and a * one == a


@given(st.integers(-10**6, 10**6), st.integers(1, 500))
def test_reduce_idempotent(x, d):
    assert reduce(reduce(x, d).value, d) == reduce(x, d)


@given(st.integers(1, 1000), st.integers(2, 1000))
def test_ideal_content_annihilates(t, m):
    g = ideal_content(t, m)
    assert m % g == 0
    assert t * (m // g) % m == 0


@given(st.integers(-500, 500), st.integers(-500, 500))
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert s * a + t * b == g
    assert g >= 0


@given(st.integers(0, 200), st.integers(2, 200))
def test_normalizing_unit(a, m):
    u = normalizing_unit(a, m)
    assert inverse(u, m) * u % m == 1
    from math import gcd
    assert u * a % m == gcd(a, m) % m
