from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from mukaidual.linalg import RationalMatrix, subspace_contains

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def rational_matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def to_sympy(m):
    entries = [sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for r in m.rows for x in r]
    return sympy.Matrix(m.nrows, m.ncols, entries)


@given(rational_matrices())
def test_rank_and_rref_match_sympy(rows):
    m = RationalMatrix(rows)
    ref, piv = to_sympy(m).rref()
    assert m.rank() == len(piv)
    r, pivots = m.rref()
    assert pivots == piv
    assert to_sympy(r) == ref[: len(piv), :]


@given(rational_matrices())
def test_nullspace_is_kernel(rows):
    m = RationalMatrix(rows)
    ns = m.nullspace()
    assert ns.nrows == m.nullity()
    if ns.nrows:
        assert (m @ ns.T).is_zero()
        assert ns.rank() == ns.nrows


@given(rational_matrices(4, 4), rational_matrices(4, 4))
def test_matmul_matches_sympy(a, b):
    a, b = RationalMatrix(a), RationalMatrix(b)
    # stack copies of b until it has enough rows, then cut to a's width
    b = RationalMatrix((b.rows * a.ncols)[: a.ncols], b.ncols)
    assert to_sympy(a @ b) == to_sympy(a) * to_sympy(b)


@given(rational_matrices())
def test_equality_is_canonical(rows):
    m = RationalMatrix(rows)
    scaled = m.scale(6).scale(Fraction(1, 6))
    assert scaled == m
    assert hash(scaled) == hash(m)
    assert (m + m) - m == m
    assert m.T.T == m


def test_int_form_reduced():
    m = RationalMatrix([[Fraction(1, 2), Fraction(1, 3)]])
    num, den = m.int_form()
    assert den == 6 and num == ((3, 2),)
    assert m.scale(6).is_integral()


def test_floats_rejected():
    with pytest.raises(TypeError):
        RationalMatrix([[0.5]])


def test_ragged_rejected():
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2], [3]])


def test_subspace_contains():
    basis = RationalMatrix([[1, 0, 1], [0, 1, 1]])
    assert subspace_contains(basis, RationalMatrix([[2, 3, 5]]))
    assert not subspace_contains(basis, RationalMatrix([[0, 0, 1]]))


def test_coker_rows():
    m = RationalMatrix([[1, 2], [2, 4], [3, 6]])
    assert m.coker_rows() == (1, 2)


def test_strings_parse_exactly():
    assert RationalMatrix([["1/3"]])[0, 0] == Fraction(1, 3)
