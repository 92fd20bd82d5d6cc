from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kolyvagin import cyclo
from kolyvagin.gradedalg import GradedElement, project
from kolyvagin.instance import phi
from kolyvagin.modring import Residue
from kolyvagin.verify import cyclo_checks


@pytest.mark.parametrize("p,k,bound,want", [(3, 1, 20, [7, 13, 19]), (3, 2, 20, [19]), (5, 1, 10, [])])
def test_sigma_primes(p, k, bound, want):
    assert cyclo.sigma_primes(p, k, bound) == want


def test_sigma_primes_rejects_bad_p():
    with pytest.raises(ValueError):
        cyclo.sigma_primes(4, 1, 20)


@pytest.mark.parametrize("a,ell,M,want", [(63, 7, 3, 1), (2, 7, 3, 0), (Fraction(1, 49), 7, 3, 1)])
def test_v_ell(a, ell, M, want):
    assert cyclo.v_ell(a, ell, M) == Residue(want, M)


def test_u_ell_examples():
    assert cyclo.u_ell(2, 7, 3, 3) == Residue(2, 3)
    assert cyclo.u_ell(7, 7, 3, 3) == Residue(0, 3)
    with pytest.raises(ValueError):
        cyclo.u_ell(2, 7, 3, 2)  # 2 is not a primitive root mod 7
    with pytest.raises(ValueError):
        cyclo.v_ell(0, 7, 3)


def test_frobenius_dlog_examples():
    assert cyclo.frobenius_dlog(13, 7, 3, 3) == Residue(0, 3)
    assert cyclo.frobenius_dlog(31, 7, 3, 3) == Residue(1, 3)
    for q in (7, 13, 19, 31, 37):
        if cyclo.is_prime(q + 1):
            assert cyclo.frobenius_dlog(q + 1, q, cyclo.primitive_root(q), 3).value == 0
    assert cyclo.frobenius_dlog(7 * 14 + 1, 7, 3, 3).value == 0  # l = 1 mod q


def test_p_element_examples():
    cfg = cyclo.CycloConfig(3, 1, (7, 31), (2, 5), {7: 3})
    sites = cfg.site_set()
    assert cyclo.p_element(31, cfg) == GradedElement.var(sites, "7", 2)
    cfg2 = cyclo.CycloConfig(3, 1, (7, 13), (2, 5), {7: 3})
    assert cyclo.p_element(13, cfg2).is_zero()
    for ell in cfg.sigma:
        assert project(cyclo.p_element(ell, cfg), {str(ell)}).is_zero()


def test_compute_Q_examples():
    assert cyclo.compute_Q([1, -7], 3) == [2]
    assert cyclo.compute_Q([1, -13], 3) == [2]
    with pytest.raises(ValueError):
        cyclo.compute_Q([1, -5], 3)


@given(st.sampled_from([3, 5, 9, 27]), st.lists(st.integers(-50, 50), min_size=1, max_size=6))
def test_compute_Q_multiplies_back(M, coeffs):
    P = coeffs + [(-sum(coeffs)) % M]
    Q = cyclo.compute_Q(P, M)
    back = cyclo.poly_mul_x_minus_1(Q, M)
    want = [c % M for c in P]
    n = max(len(back), len(want))
    assert back + [0] * (n - len(back)) == want + [0] * (n - len(want))


def test_build_instance_examples():
    cfg = cyclo.CycloConfig(3, 1, (7, 13), (2, 5), {7: 3})
    T = cyclo.build_cyclotomic_instance(cfg)
    assert T.v["7"] == (0, 0)
    assert not T.invariant_violations()
    assert all(project(T.P[q], {q}).is_zero() for q in T.labels)
    assert all(0 <= x < 3 for q in T.labels for x in T.u[q])
    assert T.metadata["source"] == "cyclotomic"


def test_config_validation():
    with pytest.raises(ValueError):
        cyclo.CycloConfig(3, 1, (11,), (2,))
    with pytest.raises(ValueError):
        cyclo.CycloConfig(3, 1, (7,), (2, 2))
    with pytest.raises(ValueError):
        cyclo.CycloConfig(3, 1, (7,), (4,))
    with pytest.raises(ValueError):
        cyclo.CycloConfig(3, 1, (7,), (2,), {7: 2})
    cfg = cyclo.CycloConfig(3, 1, (7, 13), (2, 5))
    assert cyclo.CycloConfig.from_json(cfg.to_json()) == cfg


def test_phi_matches_raw_rationals():
    cfg = cyclo.CycloConfig(3, 1, (7, 13, 31), (2, 5, 7, 13))
    T = cyclo.build_cyclotomic_instance(cfg)
    M = cfg.M
    for ell in cfg.sigma:
        lab = str(ell)
        for i, a in enumerate(cfg.generators):
            e = [int(j == i) for j in range(len(cfg.generators))]
            u = cyclo.u_ell(a, ell, M, cfg.roots[ell]).value
            v = cyclo.v_ell(a, ell, M).value
            want = -(GradedElement.var(T.sites, lab, u) + T.P[lab].scale(v))
            assert phi(T, lab, e) == want


primes = st.sampled_from([2, 5, 7, 11, 13, 31])


@given(st.lists(st.tuples(primes, st.integers(-3, 3)), min_size=1, max_size=4),
       st.lists(st.tuples(primes, st.integers(-3, 3)), min_size=1, max_size=4))
def test_functionals_are_homomorphisms(xs, ys):
    def val(pairs):
        out = Fraction(1)
        for p, e in pairs:
            out *= Fraction(p) ** e
        return out

    a, b = val(xs), val(ys)
    for ell in (7, 13, 31):
        g = cyclo.primitive_root(ell)
        assert cyclo.v_ell(a * b, ell, 3) == cyclo.v_ell(a, ell, 3) + cyclo.v_ell(b, ell, 3)
        assert cyclo.u_ell(a * b, ell, 3, g) == cyclo.u_ell(a, ell, 3, g) + cyclo.u_ell(b, ell, 3, g)
        cube = a ** 3
        assert cyclo.v_ell(cube, ell, 3).value == 0 and cyclo.u_ell(cube, ell, 3, g).value == 0


@given(st.integers(2, 400))
def test_sieved_primes(bound):
    for ell in cyclo.sigma_primes(3, 1, bound):
        assert (ell - 1) % 3 == 0 and ell != 3 and cyclo.is_prime(ell)


def test_end_to_end_checks():
    for c in cyclo_checks(np.random.default_rng(0)):
        assert c.passed, (c.name, c.detail)
