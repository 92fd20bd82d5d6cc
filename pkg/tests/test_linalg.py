import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kolyvagin.linalg import MatrixZm, RowSpan, howell_form, in_span, kernel_generators
from kolyvagin.verify import brute_kernel, brute_span


def test_howell_example_span():
    A = MatrixZm.from_rows([[2, 0], [0, 1]], 4)
    H, U = howell_form(A)
    assert brute_span(H.rows, 4, 2) == {((2 * a) % 4, b) for a in range(4) for b in range(4)}


def test_howell_zero_and_identity():
    H, U = howell_form(MatrixZm.from_rows([[0, 0], [0, 0]], 6))
    assert not any(any(r) for r in H.rows)
    assert U.rows == MatrixZm.identity(3, 6).rows
    H, _ = howell_form(MatrixZm.identity(3, 9))
    assert H.rows[:3] == MatrixZm.identity(3, 9).rows


def _padded(A):
    n = max(A.nrows, A.ncols + 1)
    return MatrixZm.from_rows(list(A.rows) + [[0] * A.ncols] * (n - A.nrows), A.m, A.ncols)


def _invertible(U):
    # unimodular over Z/m iff the determinant is a unit; check via a right inverse by brute span
    m, n = U.m, U.nrows
    return brute_span(U.rows, m, n) == set(itertools.product(range(m), repeat=n))


matrices = st.integers(2, 9).flatmap(lambda m: st.tuples(
    st.just(m), st.integers(1, 3).flatmap(lambda c: st.lists(
        st.lists(st.integers(0, m - 1), min_size=c, max_size=c), min_size=1, max_size=3))))


@given(matrices)
def test_howell_properties(mA):
    m, rows = mA
    A = MatrixZm.from_rows(rows, m)
    H, U = howell_form(A)
    assert (U @ _padded(A)).rows == H.rows
    assert brute_span(H.rows, m, A.ncols) == brute_span(A.rows, m, A.ncols)
    if U.nrows <= 3:
        assert _invertible(U)
    # Howell property: span vectors with leading zeros come from later rows
    span = brute_span(A.rows, m, A.ncols)
    nz = [r for r in H.rows if any(r)]
    for j in range(A.ncols + 1):
        tail = [r for r in nz if not any(r[:j])]
        want = {v for v in span if not any(v[:j])}
        assert brute_span(tail, m, A.ncols) == want


@pytest.mark.parametrize("rows,m,want", [([[2]], 4, {(0,), (2,)}), ([[0]], 9, {(x,) for x in range(9)})])
def test_kernel_examples(rows, m, want):
    gens = kernel_generators(MatrixZm.from_rows(rows, m))
    assert brute_span(gens, m, 1) == want


def test_kernel_identity():
    gens = kernel_generators(MatrixZm.identity(3, 8))
    assert brute_span(gens, 8, 3) == {(0, 0, 0)}


@given(matrices)
def test_kernel_matches_brute_force(mA):
    m, rows = mA
    A = MatrixZm.from_rows(rows, m)
    gens = kernel_generators(A)
    assert all(not any(A.apply(g)) for g in gens)
    assert brute_span(gens, m, A.ncols) == brute_kernel(rows, m, A.ncols)


def test_in_span_examples():
    c = in_span([(1, 1), (0, 1)], (2, 0), 4)
    assert c is not None
    assert [(c[0] * 1 + c[1] * 0) % 4, (c[0] + c[1]) % 4] == [2, 0]
    assert c == [2, 2]
    assert in_span([], (0,), 4) == []
    assert in_span([(2,)], (1,), 4) is None


@given(st.integers(2, 9).flatmap(lambda m: st.tuples(
    st.just(m),
    st.lists(st.lists(st.integers(0, m - 1), min_size=2, max_size=2), max_size=3),
    st.lists(st.integers(0, m - 1), min_size=2, max_size=2))))
def test_in_span_sound_and_complete(data):
    m, gens, target = data
    sol = in_span(gens, target, m)
    reachable = tuple(target) in brute_span(gens, m, 2)
    assert (sol is not None) == reachable
    if sol is not None:
        assert [sum(a * g[j] for a, g in zip(sol, gens)) % m for j in range(2)] == target


def test_rowspan_agrees_with_in_span(rng):
    for _ in range(50):
        m = int(rng.integers(2, 10))
        gens = rng.integers(0, m, size=(int(rng.integers(0, 4)), 3)).tolist()
        span = RowSpan(gens, m, 3)
        for _ in range(5):
            t = rng.integers(0, m, size=3).tolist()
            assert (t in span) == (in_span(gens, t, m) is not None)


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        MatrixZm.from_rows([[1, 2], [3]], 5)
