from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dolbeault_deform.linalg import (Matrix, column_space, inverse, nullity, nullspace,
                                     rank, solve)
from dolbeault_deform.scalars import ZERO, GaussRational

entries = st.builds(GaussRational, st.integers(-3, 3), st.integers(-1, 1))


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return Matrix(r, c, [[draw(entries) for _ in range(c)] for _ in range(r)])


def test_known_rank_and_kernel():
    m = Matrix(2, 3, [[1, 2, 3], [2, 4, 6]])
    assert rank(m) == 1
    ker = nullspace(m)
    assert len(ker) == 2
    for v in ker:
        assert not any(m.apply(v))


def test_inverse_exact():
    m = Matrix(2, 2, [[1, 2], [3, 4]])
    inv = inverse(m)
    assert inv.rows[0][0] == GaussRational(-2)
    assert inv.rows[1][1] == GaussRational(Fraction(-1, 2))
    assert m @ inv == Matrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        inverse(Matrix(2, 2, [[1, 2], [2, 4]]))


def test_empty_shapes():
    m = Matrix(0, 3)
    assert rank(m) == 0
    assert nullity(m) == 3
    assert (Matrix(2, 0) @ Matrix(0, 3)).is_zero()


@settings(max_examples=80)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(nullspace(m)) == m.ncols
    for v in nullspace(m):
        assert not any(m.apply(v))
    assert len(column_space(m)) == rank(m)


@settings(max_examples=60)
@given(matrices())
def test_rank_of_adjoint(m):
    assert rank(m) == rank(m.conj_transpose())
    assert rank(m.conj_transpose() @ m) == rank(m)


@settings(max_examples=60)
@given(matrices(), st.lists(entries, min_size=4, max_size=4))
def test_solve_consistent_systems(m, x):
    x = x[:m.ncols]
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None
    assert m.apply(y) == b


def test_solve_inconsistent():
    m = Matrix(2, 1, [[1], [1]])
    assert solve(m, [GaussRational(1), ZERO]) is None
