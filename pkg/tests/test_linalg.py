from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from abelfm import linalg

entries = st.integers(-6, 6)
square = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n))


def test_rejects_floats():
    with pytest.raises(TypeError):
        linalg.matrix([[0.5]])


def test_inverse_of_known_matrix():
    m = linalg.matrix([[2, 1], [1, 1]])
    assert linalg.inverse(m) == linalg.matrix([[1, -1], [-1, 2]])


def test_singular_raises():
    with pytest.raises(linalg.SingularMatrixError):
        linalg.inverse(linalg.matrix([[1, 2], [2, 4]]))


@given(square)
def test_rank_and_inverse_agree_with_sympy(rows):
    m = linalg.matrix(rows)
    ref = sympy.Matrix(rows)
    assert linalg.rank(m) == ref.rank()
    if ref.det() != 0:
        inv = linalg.inverse(m)
        expected = ref.inv()
        assert inv == tuple(tuple(Fraction(int(x.p), int(x.q)) for x in expected.row(i)) for i in range(ref.rows))
    else:
        with pytest.raises(linalg.SingularMatrixError):
            linalg.inverse(m)


def test_independent_columns_picks_leftmost():
    m = linalg.matrix([[1, 2, 0], [0, 0, 1]])
    assert linalg.independent_columns(m) == [0, 2]
