import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kolyvagin.exterior import Functional, WedgeTensor, contract, contract_seq, wedge
from kolyvagin.gradedalg import GradedElement, SiteSet, project
from kolyvagin.instance import InstanceParams, SevenTuple, random_instance
from kolyvagin.ksystems import f_pk, f_pt
from kolyvagin.unitsys import (Chain, TensorSpan, UnitSystem, build_unit_systems, check_compatibility, regulator,
                               regulator_collection, regulator_module, selmer_wedge_generators, wedge_basis,
                               zero_unit_system)
from kolyvagin.verify import leibniz_det, make_run, regulator_checks


def _instance(v, u=None, h=None, ts=None, m=9, P=None):
    labels = list(v)
    h = h or len(next(iter(v.values())))
    sites = SiteSet.make(labels, ts or [m] * len(labels), m)
    u = u or {q: (0,) * h for q in labels}
    P = P or {q: GradedElement.zero(sites) for q in labels}
    return SevenTuple(sites, h, v, u, P)


def test_selmer_wedge_examples():
    T = random_instance(2, InstanceParams(9, (9, 9), 3))
    assert selmer_wedge_generators(T, (), 0) == [WedgeTensor.scalar(3, T.sites, 1)]
    top = selmer_wedge_generators(T, T.labels, 3)
    assert len(top) == 1
    # Howell rows of the identity: the top wedge is e1^e2^e3 up to the unit det
    assert top[0] == WedgeTensor.basis((0, 1, 2), 3, T.sites, 1)
    T2 = _instance({"q": (1, 0)}, m=4)
    assert all(w.is_zero() for w in selmer_wedge_generators(T2, (), 2))


def test_top_generator_is_a_determinant():
    T = _instance({"q": (2, 3)}, m=9)
    gens = [(1, 2), (3, 1)]
    w = wedge(gens, 2, T.sites)
    assert w.scalar_part() == {(0, 1): leibniz_det(gens, 9)}


def test_vacuous_constraints_give_everything():
    T = _instance({"a": (0, 0, 0, 0), "b": (0, 0, 0, 0)})
    units = build_unit_systems(T, Chain.full(["a", "b"]), 1)
    span = TensorSpan([e.eps_top for e in units], 9)
    for I in wedge_basis(4, 3):
        assert WedgeTensor.basis(I, 4, T.sites) in span


def test_too_large_rank_gives_zero_system():
    T = _instance({"a": (1, 0), "b": (0, 1)})
    units = build_unit_systems(T, Chain.full(["a", "b"]), 1)
    assert len(units) == 1 and units[0].eps_top.is_zero()
    assert check_compatibility(units[0]).passed


def test_zero_selmer_level():
    T = _instance({"a": (1, 0, 0, 0), "b": (0, 1, 0, 0)}, h=4)
    for e in build_unit_systems(T, Chain.full(["a", "b"]), 1):
        assert check_compatibility(e).passed
    # S^{} = 0 here, so every unit system has zero bottom component
    T0 = _instance({"a": (1, 0, 0), "b": (0, 1, 0), "c": (0, 0, 1)})
    for e in build_unit_systems(T0, Chain.full(["a", "b", "c"]), 1):
        assert e.component(0).is_zero()


def test_generated_systems_recombine():
    T = random_instance(4, InstanceParams(9, (9, 9), 4))
    units = build_unit_systems(T, Chain.full(T.labels), 1)
    rng = np.random.default_rng(0)
    combo = zero_unit_system(T, Chain.full(T.labels), 1)
    for e in units:
        assert check_compatibility(e).passed
        combo = combo + e.scale(int(rng.integers(0, 9)))
    assert check_compatibility(combo).passed
    assert check_compatibility(zero_unit_system(T, Chain.full(T.labels), 1)).passed


def test_tampered_component_fails():
    T = random_instance(4, InstanceParams(9, (9, 9), 4))
    e = build_unit_systems(T, Chain.full(T.labels), 1)[0]
    # stored bottom component replaced by a vector outside S^{}
    v = T.v[T.labels[0]]
    i = next(j for j, x in enumerate(v) if x % 9)
    e.component(0)
    e._levels[0] = WedgeTensor.basis((i,), 4, T.sites)
    rep = check_compatibility(e)
    assert not rep.passed
    assert rep.first_failure().n == ()


def test_chain_validation():
    with pytest.raises(ValueError):
        Chain(("a", "a"), (0, 2))
    with pytest.raises(ValueError):
        Chain(("a", "b"), (0, 1))
    with pytest.raises(ValueError):
        Chain.from_levels(("a", "b"), [[], ["b"], ["a", "b"]])
    c = Chain.from_levels(("a", "b"), [[], ["a", "b"]])
    assert c.covering_sizes({"a"}) == [2]


def test_unit_system_json(small_instance):
    T = small_instance
    e = build_unit_systems(T, Chain.full(T.labels), 1)[0]
    again = UnitSystem.from_json(json.loads(e.dumps()), T)
    assert again.eps_top == e.eps_top and again.chain == e.chain


def test_regulator_examples(small_instance):
    T = small_instance
    for e in build_unit_systems(T, Chain.full(T.labels), 1):
        for flavor in "PTK":
            assert regulator(e, (), flavor) == e.component(0)
        for n in T.sites.subsets():
            assert regulator(e, n, "T") == project(regulator(e, n, "P"), n)
        with pytest.raises(ValueError):
            regulator(e, (), "X")


def test_regulator_module_examples():
    T = _instance({"q": (1, 2, 0)}, u={"q": (1, 2, 1)}, ts=[3], m=9)
    assert len(regulator_module(T, (), 1)) == len(selmer_wedge_generators(T, (), 1))
    xq = GradedElement.var(T.sites, "q")
    u = Functional.scalar(T.sites, T.u["q"], t=3)
    for w, img in zip(selmer_wedge_generators(T, {"q"}, 2), regulator_module(T, {"q"}, 1)):
        assert img == -(contract(u, w) * xq)
    with pytest.raises(ValueError):
        regulator_module(T, {"q"}, 1, order=[])


inst = st.tuples(st.integers(0, 2**32 - 1), st.sampled_from([8, 9, 16, 25, 27]), st.integers(1, 3),
                 st.integers(3, 5), st.integers(1, 2))


@given(inst)
def test_regulator_properties(args):
    seed, m, N, h, r = args
    rng = np.random.default_rng(seed)
    p = 2 if m % 2 == 0 else (3 if m % 3 == 0 else 5)
    T = random_instance(rng, InstanceParams(m, tuple(int(rng.choice([p, m, m * p])) for _ in range(N)), h))
    run = make_run(T, r, rng)
    for c in regulator_checks(run, rng):
        assert c.passed, (c.name, c.n)
    for P, Tc, K in zip(run.RP, run.RT, run.RK):
        assert f_pt(P) == Tc and f_pk(P) == K
