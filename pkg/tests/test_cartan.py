import pytest

from config import HYPERBOLIC_EXTENSIONS
from services.cartan import (
    CartanMatrix,
    affine_submatrix,
    automorphism_isometry,
    classify,
    diagram_automorphisms,
    double_extend,
    finite_cartan_matrix,
    highest_root,
    is_gcm,
    is_symmetrizable,
    simple_root_norms,
    symmetrize,
)
from services.exactform import quadratic
from utils.errors import (
    InvalidCartanMatrixError,
    InvalidTypeError,
    NotSymmetrizableError,
    ReducibleMatrixError,
)

B3_PLUS_PLUS = (
    (2, -1, 0, 0, 0),
    (-1, 2, 0, -1, 0),
    (0, 0, 2, -1, 0),
    (0, -1, -1, 2, -1),
    (0, 0, 0, -2, 2),
)

A1_PLUS_PLUS = ((2, -1, 0), (-1, 2, -2), (0, -2, 2))


class TestGeneralizedCartanMatrices:
    def test_axioms(self):
        assert is_gcm([[2, -1], [-1, 2]])
        assert not is_gcm([[2, 1], [1, 2]])
        assert not is_gcm([[2, -1], [0, 2]])
        assert not is_gcm([[1, 0], [0, 2]])
        with pytest.raises(InvalidCartanMatrixError):
            CartanMatrix(((2, 1), (1, 2)))

    def test_default_labels(self):
        assert CartanMatrix(((2, -1), (-1, 2))).labels == ("1", "2")

    def test_symmetrize_b3(self):
        sym = symmetrize(finite_cartan_matrix("B", 3))
        assert sym.D == (2, 2, 1)
        assert all(sym.B[i][j] == sym.B[j][i] for i in range(3) for j in range(3))

    def test_not_symmetrizable(self):
        C = CartanMatrix(((2, -1, -1), (-1, 2, -1), (-2, -1, 2)))
        with pytest.raises(NotSymmetrizableError):
            symmetrize(C)
        assert not is_symmetrizable(C)

    def test_reducible(self):
        C = CartanMatrix(((2, 0), (0, 2)))
        with pytest.raises(ReducibleMatrixError):
            symmetrize(C)
        with pytest.raises(ReducibleMatrixError):
            classify(C)
        assert is_symmetrizable(C)


class TestClassification:
    def test_kinds(self):
        assert classify(finite_cartan_matrix("A", 2)).kind == "finite"
        assert classify(CartanMatrix(((2, -2), (-2, 2)))).kind == "affine"
        result = classify(CartanMatrix(A1_PLUS_PLUS))
        assert result.kind == "indefinite"
        assert result.lorentzian and result.hyperbolic
        assert result.to_dict()["signature"] == [2, 1, 0]

    @pytest.mark.parametrize("base_type, rank", HYPERBOLIC_EXTENSIONS)
    def test_listed_extensions_are_hyperbolic(self, base_type, rank):
        ext = double_extend(base_type, rank)
        result = classify(ext.cartan)
        assert result.hyperbolic and result.lorentzian
        assert classify(affine_submatrix(ext)).kind == "affine"

    def test_a8_extension_is_lorentzian_but_not_hyperbolic(self):
        result = classify(double_extend("A", 8).cartan)
        assert result.lorentzian
        assert not result.hyperbolic


class TestFiniteTypes:
    @pytest.mark.parametrize(
        "base_type, rank, theta, m",
        [
            ("A", 3, (1, 1, 1), 2),
            ("B", 3, (1, 2, 2), 4),
            ("C", 3, (2, 2, 1), 4),
            ("D", 5, (1, 2, 2, 1, 1), 2),
            ("G", 2, (2, 3), 6),
            ("F", 4, (2, 3, 4, 2), 4),
            ("E", 6, (1, 2, 3, 2, 1, 2), 2),
            ("E", 7, (2, 3, 4, 3, 2, 1, 2), 2),
            ("E", 8, (2, 3, 4, 5, 6, 4, 2, 3), 2),
        ],
    )
    def test_highest_roots(self, base_type, rank, theta, m):
        assert highest_root(base_type, rank) == (theta, m)

    @pytest.mark.parametrize("base_type, rank", [("A", 0), ("C", 2), ("D", 3), ("E", 9), ("X", 3), ("G", 3)])
    def test_invalid_types(self, base_type, rank):
        with pytest.raises(InvalidTypeError):
            double_extend(base_type, rank)

    def test_conventions(self):
        assert finite_cartan_matrix("B", 3).entries[2][1] == -2
        assert finite_cartan_matrix("C", 3).entries[1][2] == -2
        assert finite_cartan_matrix("G", 2).entries[1][0] == -3
        assert finite_cartan_matrix("F", 4).entries[2][1] == -2
        E8 = finite_cartan_matrix("E", 8).entries
        assert E8[7][4] == -1 and E8[7][2] == 0


class TestDoubleExtension:
    def test_b3_golden_matrix(self, b3_ext):
        assert b3_ext.cartan.entries == B3_PLUS_PLUS
        assert b3_ext.labels == ("-1", "0", "1", "2", "3")
        assert b3_ext.m == 4 and not b3_ext.simply_laced

    def test_a1_golden_matrix(self, a1_ext):
        assert a1_ext.cartan.entries == A1_PLUS_PLUS
        assert a1_ext.simply_laced
        assert a1_ext.name == "A1++"

    def test_roots_have_norm_two_over_m(self, d4_ext):
        assert set(simple_root_norms(d4_ext)) == {1}
        f1, f2 = d4_ext.hyperbolic_pair.f1, d4_ext.hyperbolic_pair.f2
        assert quadratic(d4_ext.W, f1) == 0 and quadratic(d4_ext.W, f2) == 0

    def test_root_coordinates(self, a2_ext):
        for i, alpha in enumerate(a2_ext.simple_roots):
            coords = a2_ext.root_coordinates(alpha)
            assert coords == tuple(int(i == j) for j in range(4))

    def test_affine_submatrix(self, a1_ext):
        assert affine_submatrix(a1_ext).entries == ((2, -2), (-2, 2))


class TestDiagramAutomorphisms:
    @pytest.mark.parametrize(
        "base_type, rank, count",
        [("A", 1, 1), ("A", 2, 2), ("A", 5, 2), ("D", 4, 6), ("D", 5, 2), ("E", 6, 2), ("E", 7, 1), ("E", 8, 1)],
    )
    def test_counts(self, base_type, rank, count):
        auts = diagram_automorphisms(double_extend(base_type, rank).cartan)
        assert len(auts) == count
        assert auts[0].is_identity()
        assert auts[0].describe() == "id"

    def test_descriptions(self, d4_ext):
        names = {a.describe() for a in diagram_automorphisms(d4_ext.cartan) if not a.is_identity()}
        assert names == {"(1 3)", "(1 4)", "(3 4)", "(1 3 4)", "(1 4 3)"}
        e6 = diagram_automorphisms(double_extend("E", 6).cartan)[1]
        assert e6.describe() == "(1 5)(2 4)"
        a3 = diagram_automorphisms(double_extend("A", 3).cartan)[1]
        assert a3.describe() == "(1 3)"

    def test_automorphism_isometry_permutes_roots(self, d4_ext):
        for aut in diagram_automorphisms(d4_ext.cartan):
            sigma = automorphism_isometry(d4_ext, aut)
            for i, j in enumerate(aut.perm):
                assert sigma.apply(d4_ext.simple_roots[i]) == d4_ext.simple_roots[j]
