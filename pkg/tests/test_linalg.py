from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tests.strategies import small_rationals, symmetric_grams, vectors
from utils import linalg
from utils.errors import NotInvertibleError
from utils.rational import format_rational, parse_rational, to_rational


class TestRational:
    @pytest.mark.parametrize("text, value", [("3", 3), ("-1/2", Fraction(-1, 2)), (" 4/6 ", Fraction(2, 3))])
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("text", ["0.5", "1e3", "", "1/0", "x"])
    def test_rejects_inexact(self, text):
        with pytest.raises(ValueError):
            parse_rational(text)

    def test_format_and_coerce(self):
        assert format_rational(Fraction(4, 2)) == "2"
        assert format_rational("-3/6") == "-1/2"
        with pytest.raises(TypeError):
            to_rational(0.5)
        with pytest.raises(TypeError):
            to_rational(True)


class TestMatrices:
    def test_solve_and_inverse(self):
        M = linalg.as_matrix([[2, 1], [1, 1]])
        assert linalg.solve(M, (3, 2)) == (1, 1)
        assert linalg.freeze(M @ linalg.inverse(M)) == linalg.freeze(linalg.identity_matrix(2))
        assert linalg.determinant(M) == 1

    def test_singular(self):
        M = linalg.as_matrix([[1, 2], [2, 4]])
        assert linalg.rank(M) == 1
        assert linalg.determinant(M) == 0
        with pytest.raises(NotInvertibleError):
            linalg.inverse(M)
        (v,) = linalg.nullspace(M)
        assert linalg.mat_vec(M, v) == (0, 0)

    @settings(max_examples=100, deadline=None)
    @given(symmetric_grams(max_dim=5))
    def test_congruence_diagonalize(self, space):
        G = linalg.as_matrix(space.gram)
        diag, P = linalg.congruence_diagonalize(G)
        D = P.T @ G @ P
        n = space.dim
        assert all(D[i, j] == (diag[i] if i == j else 0) for i in range(n) for j in range(n))
        assert linalg.determinant(P) != 0
        assert isinstance(P, np.ndarray)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=1, max_value=4).flatmap(lambda n: st.lists(vectors(n, small_rationals), min_size=1, max_size=4)))
    def test_rank_nullity(self, rows):
        M = linalg.as_matrix(rows)
        kernel = linalg.nullspace(M)
        assert linalg.rank(M) + len(kernel) == M.shape[1]
        assert all(linalg.mat_vec(M, v) == (0,) * M.shape[0] for v in kernel)
        assert all(isinstance(x, Fraction) for v in kernel for x in v)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=1, max_value=4).flatmap(lambda n: st.lists(vectors(n, small_rationals), min_size=n, max_size=n)))
    def test_inverse_and_solve_are_exact(self, rows):
        M = linalg.as_matrix(rows)
        n = M.shape[0]
        det = linalg.determinant(M)
        assert isinstance(det, Fraction)
        if det == 0:
            with pytest.raises(NotInvertibleError):
                linalg.inverse(M)
            return
        M_inv = linalg.inverse(M)
        assert linalg.freeze(M @ M_inv) == linalg.freeze(linalg.identity_matrix(n))
        assert linalg.determinant(M_inv) == 1 / det
        b = tuple(Fraction(i + 1) for i in range(n))
        assert linalg.mat_vec(M, linalg.solve(M, b)) == b

    def test_inconsistent_system(self):
        M = linalg.as_matrix([[1, 1], [1, 1], [0, 1]])
        with pytest.raises(NotInvertibleError):
            linalg.solve(M, (1, 2, 0))
        assert linalg.solve(M, (1, 1, 1)) == (0, 1)

    def test_empty_matrices(self):
        assert linalg.determinant(linalg.zero_matrix(0, 0)) == 1
        assert linalg.nullspace(linalg.zero_matrix(0, 2)) == [(1, 0), (0, 1)]
