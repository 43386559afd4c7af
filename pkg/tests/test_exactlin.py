from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import naive_rank, random_integer_matrix
from strata_lab.exactlin import (
    ComplexError,
    ComplexOfSpaces,
    RationalMatrix,
    as_matrix,
    block_matrix,
    cohomology_dims,
    hstack,
    image_basis,
    intersect,
    kernel_basis,
    left_annihilator,
    quotient_basis,
    rank,
    rref,
    solve_in_basis,
    span_sum,
    vstack,
)

small_ints = st.integers(-5, 5)


@st.composite
def matrices(draw, max_side=6):
    m = draw(st.integers(1, max_side))
    n = draw(st.integers(1, max_side))
    rows = draw(st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m))
    return rows


def test_hilbert_matrix_full_rank():
    h = as_matrix([[Fraction(1, i + j + 1) for j in range(5)] for i in range(5)])
    assert rank(h) == 5
    r, piv = rref(h)
    assert r == RationalMatrix.identity(5) and piv == (0, 1, 2, 3, 4)


def test_sparse_canonical_form():
    m = RationalMatrix(2, 2, {(1, 0): 0, (0, 1): Fraction(2, 4)})
    assert m.entries == {(0, 1): Fraction(1, 2)}
    assert m == as_matrix([[0, Fraction(1, 2)], [0, 0]])
    with pytest.raises(IndexError):
        RationalMatrix(1, 1, {(1, 0): 1})


def test_arithmetic():
    a = as_matrix([[1, 2], [3, 4]])
    b = as_matrix([[0, 1], [1, 0]])
    assert (a @ b).to_rows() == [[2, 1], [4, 3]]
    assert (a + b - b) == a
    assert (-a).scale(-1) == a
    assert a.T.to_rows() == [[1, 3], [2, 4]]
    assert a.apply([1, 1]) == [3, 7]
    assert hstack([a, b]).shape == (2, 4)
    assert vstack([a, b]).shape == (4, 2)
    blk = block_matrix({(0, 0): a, (1, 1): b}, [2, 2], [2, 2])
    assert blk.select_rows([2, 3]).select_columns([2, 3]) == b


@given(matrices())
def test_rank_matches_oracle(rows):
    assert rank(as_matrix(rows)) == naive_rank(rows)


@given(matrices())
def test_kernel_and_image(rows):
    m = as_matrix(rows)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert k.cols + rank(m) == m.cols
    assert rank(k) == k.cols
    im = image_basis(m)
    assert im.cols == rank(m)
    assert rank(hstack([im, m])) == im.cols


@given(matrices())
def test_quotient_and_annihilator(rows):
    m = as_matrix(rows)
    q = quotient_basis(m.rows, m)
    assert q.cols == m.rows - rank(m)
    assert rank(hstack([m, q])) == m.rows
    ann = left_annihilator(m)
    assert (ann @ m).is_zero() and ann.rows == m.rows - rank(m)


@given(matrices(), st.lists(small_ints, min_size=6, max_size=6))
def test_solve_roundtrip(rows, coeffs):
    basis = image_basis(as_matrix(rows))
    if basis.cols == 0:
        return
    x = RationalMatrix.from_columns([coeffs[: basis.cols]], basis.cols)
    assert solve_in_basis(basis, basis @ x) == x


def test_solve_rejects_outside_span():
    with pytest.raises(ValueError):
        solve_in_basis(as_matrix([[1], [0]]), as_matrix([[0], [1]]))


def test_intersect_and_sum():
    a = as_matrix([[1, 0], [0, 1], [0, 0]])
    b = as_matrix([[0, 0], [1, 0], [0, 1]])
    assert intersect(a, b).cols == 1
    assert span_sum(a, b).cols == 3


def test_complex_checks_and_cohomology():
    d0 = as_matrix([[1], [1]])
    d1 = as_matrix([[1, -1]])
    c = ComplexOfSpaces(0, (1, 2, 1), (d0, d1))
    assert cohomology_dims(c) == {0: 0, 1: 0, 2: 0}
    assert c.euler_characteristic() == 0
    bad = ComplexOfSpaces(0, (1, 2, 1), (d0, as_matrix([[1, 1]])))
    with pytest.raises(ComplexError) as info:
        cohomology_dims(bad)
    assert info.value.degree == 0
    with pytest.raises(ValueError):
        ComplexOfSpaces(0, (1, 2), (as_matrix([[1, 1]]),))


def test_random_complex_euler_characteristic():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = as_matrix(random_integer_matrix(rng, 4, 3))
        k = kernel_basis(a.T).T  # rows annihilating the image of a
        c = ComplexOfSpaces(0, (3, 4, k.rows), (a, k))
        h = cohomology_dims(c)
        assert sum((-1) ** n * v for n, v in h.items()) == c.euler_characteristic()
        assert h[1] == 0
