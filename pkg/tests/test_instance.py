import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kolyvagin.gradedalg import GradedElement, SiteSet, project
from kolyvagin.instance import InstanceParams, SevenTuple, phi, phi_n, random_instance, selmer_generators
from kolyvagin.linalg import in_span
from kolyvagin.verify import brute_kernel, brute_span


def _tiny(v_q=(1, 1), u_q=(1, 0)):
    sites = SiteSet.make(["q", "r"], [9, 9], 9)
    P = {"q": GradedElement.var(sites, "r"), "r": GradedElement.zero(sites)}
    return SevenTuple(sites, 2, {"q": v_q, "r": (0, 0)}, {"q": u_q, "r": (0, 0)}, P)


def test_phi_direct_substitution():
    T = _tiny()
    amb = T.sites
    want = -GradedElement.var(amb, "q") - GradedElement.var(amb, "r")
    assert phi(T, "q", (1, 0)) == want
    assert phi(T, "q", (0, 0)).is_zero()


def test_phi_n_examples():
    T = _tiny()
    a = (1, 0)
    assert phi_n(T, "q", T.labels, a) == phi(T, "q", a)
    assert phi_n(T, "q", (), a).is_zero()
    assert phi_n(T, "q", {"q"}, a) == -GradedElement.var(T.sites, "q").scale(T.u["q"][0])


def test_unknown_site():
    with pytest.raises(KeyError):
        phi(_tiny(), "z", (1, 0))


def test_selmer_examples():
    T = _tiny()
    full = selmer_generators(T, T.labels)
    assert brute_span(full, 9, 2) == brute_span([(1, 0), (0, 1)], 9, 2)
    # v_r = 0, so dropping r imposes nothing
    assert brute_span(selmer_generators(T, {"q"}), 9, 2) == brute_span(full, 9, 2)
    sites = SiteSet.make(["q"], [4], 4)
    T4 = SevenTuple(sites, 2, {"q": (1, 0)}, {"q": (0, 0)}, {"q": GradedElement.zero(sites)})
    gens = selmer_generators(T4, ())
    assert brute_span(gens, 4, 2) == brute_span([(0, 1)], 4, 2) == brute_kernel([[1, 0]], 4, 2)


def test_invalid_instances():
    sites = SiteSet.make(["q"], [3], 9)
    with pytest.raises(ValueError):
        SevenTuple(sites, 1, {"q": (1,)}, {"q": (5,)}, {"q": GradedElement.zero(sites)})
    with pytest.raises(ValueError):
        SevenTuple(sites, 1, {"q": (1,)}, {"q": (0,)}, {"q": GradedElement.var(sites, "q")})
    with pytest.raises(ValueError):
        InstanceParams(1, (3,), 2)


def test_random_instance_deterministic():
    p = InstanceParams(9, (3, 3, 9), 4)
    a, b = random_instance(1, p), random_instance(1, p)
    assert a.dumps() == b.dumps()
    assert all(project(a.P[q], {q}).is_zero() for q in a.labels)


def test_json_roundtrip(small_instance):
    T = small_instance
    again = SevenTuple.from_json(json.loads(T.dumps()))
    assert again.dumps() == T.dumps()
    with pytest.raises(ValueError):
        SevenTuple.from_json({"modulus": 9})


params = st.sampled_from([8, 9, 16, 25, 27]).flatmap(lambda m: st.tuples(
    st.just(m), st.lists(st.sampled_from([3, 9, m, 2 * m, 5]), min_size=1, max_size=3), st.integers(1, 4)))


@given(st.integers(0, 2**32 - 1), params)
def test_random_instance_properties(seed, p):
    m, ts, h = p
    T = random_instance(seed, InstanceParams(m, tuple(ts), h))
    assert not T.invariant_violations()
    rng = np.random.default_rng(seed)
    a = rng.integers(0, m, size=h).tolist()
    b = rng.integers(0, m, size=h).tolist()
    c = int(rng.integers(0, m))
    for q in T.labels:
        lin = [(x + c * y) % m for x, y in zip(a, b)]
        assert phi(T, q, lin) == phi(T, q, a) + phi(T, q, b).scale(c)
        # phi^{d u m} = phi^d + phi^m for disjoint d, m
        d = frozenset(T.labels[: len(T.labels) // 2])
        rest = frozenset(T.labels) - d
        assert phi_n(T, q, d | rest, a) == phi_n(T, q, d, a) + phi_n(T, q, rest, a) - phi_n(T, q, (), a)
    subsets = T.sites.subsets()
    for n in subsets:
        gens = selmer_generators(T, n)
        for g in gens:
            assert all(sum(x * y for x, y in zip(T.v[q], g)) % m == 0 for q in T.labels if q not in n)
        for n2 in subsets:
            if n <= n2:
                bigger = selmer_generators(T, n2)
                assert all(in_span(bigger, g, m) is not None for g in gens)
