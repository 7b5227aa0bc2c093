from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from config import SIMPLY_LACED_HYPERBOLIC
from services.cartan import double_extend
from services.clifford import Multivector, conjugation, grade_involution, reversion
from services.exactform import QuadSpace, compose_reflections, quadratic, reflection, spinor_norm, squarefree_class
from services.vahlen import (
    CONDITION_GRADING,
    CONDITION_INTEGRALITY,
    CliffMat2,
    H2Element,
    VahlenFrame,
    _check_conditions,
    alpha,
    beta,
    canonical_sign,
    check_vahlen,
    eta,
    extension_frame,
    gamma,
    generator_matrices,
    generators,
    inverse,
    is_even,
    is_odd,
    is_vahlen,
    is_vahlen_order,
    is_vahlen_plus,
    lattice_identity_check,
    mat_involutions,
    phi,
    phi_vector,
    vahlen_lambda,
    vahlen_norm,
    vahlen_spinor_class,
    word_matrix,
)
from tests.strategies import mirror_lists, small_ints, vectors
from utils.errors import NotInGroupError, NotInvertibleError, UnsupportedSpaceError

PHI_TYPES = [(t, n) for t, n in SIMPLY_LACED_HYPERBOLIC if n <= 6]
E2_PLANE = QuadSpace.diagonal([1, 1])
E3_SPACE = QuadSpace.diagonal([1, 1, 1])


@st.composite
def w_elements(draw, frame, max_terms=3):
    size = 1 << frame.W.dim
    terms = draw(st.dictionaries(st.integers(min_value=0, max_value=size - 1), small_ints, max_size=max_terms))
    return Multivector(frame.W, terms)


def frame_for(base_type, rank):
    return extension_frame(double_extend(base_type, rank))


class TestPhi:
    @pytest.mark.parametrize("base_type, rank", PHI_TYPES)
    def test_homomorphism(self, base_type, rank):
        frame = frame_for(base_type, rank)

        @settings(max_examples=200, deadline=None)
        @given(w_elements(frame), w_elements(frame))
        def check(x, y):
            assert phi(frame, x * y) == phi(frame, x) * phi(frame, y)

        check()

    @pytest.mark.parametrize("base_type, rank", PHI_TYPES)
    def test_vectors_square_to_minus_q(self, base_type, rank):
        frame = frame_for(base_type, rank)

        @settings(max_examples=200, deadline=None)
        @given(vectors(frame.W.dim))
        def check(w):
            A = phi_vector(frame, w)
            assert A * A == CliffMat2.scalar(frame.V, -quadratic(frame.W, w))

        check()

    @pytest.mark.parametrize("base_type, rank", PHI_TYPES)
    def test_involutions_are_transported(self, base_type, rank):
        frame = frame_for(base_type, rank)

        @settings(max_examples=200, deadline=None)
        @given(w_elements(frame))
        def check(x):
            A = phi(frame, x)
            assert mat_involutions(A) == (alpha(A), beta(A), gamma(A))
            alpha_A, beta_A, gamma_A = mat_involutions(A)
            assert phi(frame, grade_involution(x)) == alpha_A
            assert phi(frame, reversion(x)) == beta_A
            assert phi(frame, conjugation(x)) == gamma_A

        check()

    def test_generator_images(self, a2_base):
        frame = VahlenFrame.over(a2_base)
        assert frame is VahlenFrame.over(a2_base)
        f1 = Multivector.generator(frame.W, 2)
        f2 = Multivector.generator(frame.W, 3)
        assert phi(frame, f1) == CliffMat2.from_entries(a2_base, 0, 1, 0, 0)
        assert phi(frame, f2) == CliffMat2.from_entries(a2_base, 0, 0, 1, 0)
        assert phi(frame, Multivector.one(frame.W)) == CliffMat2.identity(a2_base)

    def test_minus_identity_acts_trivially(self, a2_base):
        frame = VahlenFrame.over(a2_base)
        minus_one = -CliffMat2.identity(a2_base)
        assert is_vahlen(minus_one).lam == 1
        assert eta(frame, minus_one).is_identity()

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_images_of_group_elements_are_vahlen(self, a2_ext, data):
        frame = extension_frame(a2_ext)
        mirrors = data.draw(mirror_lists(frame.W, max_len=4))
        A = CliffMat2.identity(frame.V)
        for w in mirrors:
            A = A * phi_vector(frame, w)
        lam = prod((quadratic(frame.W, w) for w in mirrors), start=Fraction(1))
        verdict = is_vahlen(A)
        assert verdict.member and verdict.lam == lam
        assert vahlen_norm(A) == CliffMat2.scalar(frame.V, lam)
        assert eta(frame, A) == compose_reflections(frame.W, mirrors)


class TestGenerators:
    def test_a2_generators(self, a2_ext):
        X = generator_matrices(a2_ext)
        V = a2_ext.base
        assert X[0] == CliffMat2.from_entries(V, 0, 1, -1, 0)
        theta = Multivector.generator(V, 0) + Multivector.generator(V, 1)
        assert X[1] == CliffMat2.from_entries(V, -theta, -1, 0, theta)
        assert all(H2Element.from_matrix(M).Q() == 1 for M in X)

    @pytest.mark.parametrize("base_type, rank", SIMPLY_LACED_HYPERBOLIC)
    def test_eta_of_generators_is_reflection(self, base_type, rank):
        ext = double_extend(base_type, rank)
        frame = extension_frame(ext)
        for X, root in zip(generator_matrices(ext), ext.simple_roots):
            assert vahlen_lambda(X) == 1
            assert eta(frame, X) == reflection(ext.W, root)
            assert check_vahlen(X, order=True, plus=True).member
            assert is_odd(X)

    def test_generators_are_h2_elements(self, d4_ext):
        for X, root in zip(generators(d4_ext), d4_ext.simple_roots):
            assert X.to_w() == tuple(root)


class TestWords:
    @pytest.mark.parametrize("base_type, rank", [("A", 1), ("A", 2), ("D", 4)])
    def test_random_words_are_in_the_order_group(self, base_type, rank):
        ext = double_extend(base_type, rank)
        V = ext.base

        @settings(max_examples=100, deadline=None)
        @given(st.lists(st.integers(min_value=0, max_value=rank + 1), max_size=6))
        def check(word):
            A = word_matrix(ext, word)
            verdict = is_vahlen_order(A)
            assert verdict.member
            assert verdict.lam in (1, -1)
            assert gamma(A) * A == CliffMat2.scalar(V, verdict.lam)
            assert A * inverse(A) == CliffMat2.identity(V)
            if len(word) % 2 == 0:
                assert check_vahlen(A, order=True, plus=True, even=True).member

        check()

    def test_eta_is_multiplicative(self, a2_ext):
        frame = extension_frame(a2_ext)
        A, B = word_matrix(a2_ext, [0, 2]), word_matrix(a2_ext, [1, 3, 2])
        assert eta(frame, A * B) == eta(frame, A) @ eta(frame, B)


class TestMembership:
    def test_projection_fails_first_condition(self, a2_base):
        verdict = check_vahlen(CliffMat2.from_entries(a2_base, 1, 0, 0, 0))
        assert not verdict.member
        assert verdict.failed_condition == 1

    def test_bivector_corner_fails_second_condition(self):
        e01 = Multivector.generator(E2_PLANE, 0) * Multivector.generator(E2_PLANE, 1)
        verdict = check_vahlen(CliffMat2.from_entries(E2_PLANE, 1, e01, 0, 1))
        assert not verdict.member and verdict.failed_condition == 2

    def test_non_scalar_norm_fails_fourth_condition(self):
        e0, e1, e2 = (Multivector.generator(E3_SPACE, i) for i in range(3))
        P = e0 * e1 * e2
        A = CliffMat2.from_entries(E3_SPACE, 1 + P, 0, 0, 1 + P)
        assert vahlen_lambda(A) == 2
        verdict = check_vahlen(A)
        assert not verdict.member and verdict.failed_condition == 4

    def test_scalar_translation_fails_fifth_condition(self):
        verdict = check_vahlen(CliffMat2.from_entries(E2_PLANE, 1, 1, 0, 1))
        assert not verdict.member and verdict.failed_condition == 5

    def test_quantified_scalar_condition_uses_given_basis(self):
        e0, e1, e2 = (Multivector.generator(E3_SPACE, i) for i in range(3))
        translation = CliffMat2.from_entries(E3_SPACE, 1, e2, 0, 1)
        assert is_vahlen(translation).member
        verdict = _check_conditions(
            translation,
            [e0 * e1],
            in_subspace=lambda x: x.is_vector(),
            in_scalars=lambda x: x.is_scalar(),
            lambda_ok=lambda lam: True,
        )
        assert not verdict.member and verdict.failed_condition == 6

    def test_mixed_grade_diagonal_fails_seventh_condition(self):
        e0 = Multivector.generator(E2_PLANE, 0)
        A = CliffMat2.from_entries(E2_PLANE, 2 + e0, 0, 0, 2 - e0)
        assert vahlen_lambda(A) == 3
        verdict = check_vahlen(A)
        assert not verdict.member and verdict.failed_condition == 7

    def test_plus_membership(self, a2_ext):
        V = a2_ext.base
        assert is_vahlen_plus(CliffMat2.identity(V))
        assert not is_vahlen_plus(CliffMat2.scalar(V, 2))
        X = generator_matrices(a2_ext)
        assert all(is_vahlen_plus(M, order=True) for M in X)
        verdict = is_vahlen_plus(CliffMat2.from_entries(V, 1, 0, 0, -1), order=True)
        assert not verdict and verdict.failed_condition == 1
        assert check_vahlen(X[0] * X[1], order=True, plus=True) == is_vahlen_plus(X[0] * X[1], order=True)

    def test_half_identity_is_rational_but_not_integral(self, a2_base):
        A = CliffMat2.scalar(a2_base, Fraction(1, 2))
        assert is_vahlen(A).member and is_vahlen(A).lam == Fraction(1, 4)
        verdict = check_vahlen(A, order=True)
        assert not verdict.member
        assert verdict.failed_condition == CONDITION_INTEGRALITY

    def test_minus_lambda(self, a2_base):
        A = CliffMat2.from_entries(a2_base, 1, 0, 0, -1)
        assert check_vahlen(A, order=True).lam == -1
        verdict = check_vahlen(A, order=True, plus=True)
        assert not verdict.member and verdict.failed_condition == 1

    def test_grading(self, a2_ext):
        X = generator_matrices(a2_ext)[2]
        verdict = check_vahlen(X, even=True)
        assert not verdict.member
        assert verdict.failed_condition == CONDITION_GRADING
        assert is_even(X * X)

    def test_non_vahlen_matrix_rejected(self, a2_base):
        frame = VahlenFrame.over(a2_base)
        with pytest.raises(NotInGroupError):
            eta(frame, CliffMat2.from_entries(a2_base, 1, 0, 0, 0))
        with pytest.raises(NotInvertibleError):
            vahlen_lambda(CliffMat2.from_entries(a2_base, 1, 0, 0, 0))

    def test_order_needs_simply_laced_base(self, b3_ext):
        with pytest.raises(UnsupportedSpaceError):
            is_vahlen_order(CliffMat2.identity(b3_ext.base))

    def test_verdict_dict(self, a2_base):
        out = check_vahlen(CliffMat2.identity(a2_base), order=True).to_dict()
        assert out == {"member": True, "lambda": "1", "failed_condition": None, "reason": ""}


class TestSpinorClass:
    def test_lambda_matches_spinor_norm(self):
        V = QuadSpace.diagonal([1, 2])
        frame = VahlenFrame.over(V)
        w = (1, 1, 1, 1)
        A = phi_vector(frame, w)
        assert vahlen_lambda(A) == quadratic(frame.W, w) == 2
        sigma = eta(frame, A)
        assert sigma == reflection(frame.W, w)
        assert vahlen_spinor_class(A) == spinor_norm(frame.W, sigma) == squarefree_class(2)

    def test_canonical_sign(self, a2_ext):
        A = word_matrix(a2_ext, [0, 1])
        assert canonical_sign(-A) == canonical_sign(A)
        assert canonical_sign(A) in (A, -A)

    def test_h2_from_matrix_rejects_general_matrix(self, a2_base):
        with pytest.raises(NotInGroupError):
            H2Element.from_matrix(CliffMat2.identity(a2_base))


class TestLatticeIdentity:
    @pytest.mark.parametrize("base_type, rank", [("A", 1), ("A", 2), ("A", 4), ("D", 4), ("E", 8)])
    def test_generators_span_h2_lattice(self, base_type, rank):
        assert lattice_identity_check(double_extend(base_type, rank))

    def test_non_simply_laced_rejected(self, b3_ext):
        with pytest.raises(UnsupportedSpaceError):
            lattice_identity_check(b3_ext)
