"""
2x2 matrices over a Clifford algebra: the isomorphism phi: C(V + P) -> M2(C(V)),
the matrix involutions alpha/beta/gamma, H2(V) and the action eta, and
Vahlen-group membership over Q and over the integral order.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from services.cartan import ExtensionSpec
from services.clifford import (
    Multivector,
    conjugation,
    embed_vector,
    grade_involution,
    order_member,
    require_order_space,
    reversion,
)
from services.exactform import (
    HyperbolicPair,
    Isometry,
    QVector,
    QuadSpace,
    SquarefreeClass,
    orthogonal_sum,
    quadratic,
    squarefree_class,
)
from utils import linalg
from utils.cache_utils import gram_cache_key, get_memo
from utils.errors import (
    AlgebraError,
    DimensionMismatchError,
    NotInGroupError,
    NotInvertibleError,
    SpaceMismatchError,
    UnsupportedSpaceError,
)
from utils.rational import RationalLike, to_rational, to_vector

ZERO = Fraction(0)
ONE = Fraction(1)

# condition indices reported by verdicts besides the seven membership conditions
CONDITION_INTEGRALITY = 0
CONDITION_GRADING = 8


# ===========================
# Domain Types
# ===========================

@dataclass(frozen=True)
class VahlenFrame:
    """W = V + P with the hyperbolic pair f1, f2 as the last two generators."""

    V: QuadSpace
    W: QuadSpace
    pair: HyperbolicPair

    @classmethod
    def over(cls, V: QuadSpace) -> "VahlenFrame":
        return get_memo("vahlen_frames").get_or_compute(gram_cache_key(V.gram), lambda: cls._build(V))

    @classmethod
    def _build(cls, V: QuadSpace) -> "VahlenFrame":
        W = orthogonal_sum(V, QuadSpace.hyperbolic_plane())
        n = V.dim
        return cls(V=V, W=W, pair=HyperbolicPair(W, W.basis_vector(n), W.basis_vector(n + 1)))

    @property
    def n(self) -> int:
        return self.V.dim


@dataclass(frozen=True)
class CliffMat2:
    """(a b; c d) with entries in C(V)."""

    a: Multivector
    b: Multivector
    c: Multivector
    d: Multivector

    def __post_init__(self):
        space = self.a.space
        if any(x.space != space for x in (self.b, self.c, self.d)):
            raise SpaceMismatchError("matrix entries live in different Clifford algebras")

    @property
    def space(self) -> QuadSpace:
        return self.a.space

    @classmethod
    def from_entries(cls, space: QuadSpace, a, b, c, d) -> "CliffMat2":
        """Entries may be Multivectors or rationals."""
        def lift(x):
            return x if isinstance(x, Multivector) else Multivector.scalar(space, to_rational(x))
        return cls(lift(a), lift(b), lift(c), lift(d))

    @classmethod
    def identity(cls, space: QuadSpace) -> "CliffMat2":
        return cls.from_entries(space, 1, 0, 0, 1)

    @classmethod
    def scalar(cls, space: QuadSpace, lam: RationalLike) -> "CliffMat2":
        return cls.from_entries(space, lam, 0, 0, lam)

    def entries(self) -> Tuple[Multivector, Multivector, Multivector, Multivector]:
        return (self.a, self.b, self.c, self.d)

    def map(self, f: Callable[[Multivector], Multivector]) -> "CliffMat2":
        return CliffMat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def is_scalar_matrix(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a.is_scalar() and self.a == self.d

    def __add__(self, other: "CliffMat2") -> "CliffMat2":
        return CliffMat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __neg__(self) -> "CliffMat2":
        return self.map(lambda x: -x)

    def __sub__(self, other: "CliffMat2") -> "CliffMat2":
        return self + (-other)

    def __mul__(self, other: Union["CliffMat2", RationalLike]) -> "CliffMat2":
        if isinstance(other, CliffMat2):
            return CliffMat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        f = to_rational(other)
        return self.map(lambda x: x * f)

    def __rmul__(self, other: RationalLike) -> "CliffMat2":
        return self * other

    def __truediv__(self, other: RationalLike) -> "CliffMat2":
        f = to_rational(other)
        return self.map(lambda x: x / f)


@dataclass(frozen=True)
class H2Element:
    """X = (v, lam1; lam2, v-bar) with Q(X) = q(v) - lam1 lam2."""

    space: QuadSpace
    v: QVector
    lam1: Fraction
    lam2: Fraction

    def __post_init__(self):
        v = to_vector(self.v)
        if len(v) != self.space.dim:
            raise DimensionMismatchError(f"vector of length {len(v)} in a space of dimension {self.space.dim}")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "lam1", to_rational(self.lam1))
        object.__setattr__(self, "lam2", to_rational(self.lam2))

    def to_matrix(self) -> CliffMat2:
        v = embed_vector(self.space, self.v)
        return CliffMat2.from_entries(self.space, v, self.lam1, self.lam2, -v)

    @classmethod
    def from_matrix(cls, A: CliffMat2) -> "H2Element":
        if not (A.a.is_vector() and A.b.is_scalar() and A.c.is_scalar() and A.d == -A.a):
            raise NotInGroupError("matrix is not of the form (v, l1; l2, v-bar)")
        return cls(A.space, A.a.vector_part(), A.b.scalar_part(), A.c.scalar_part())

    def to_w(self) -> QVector:
        """Coordinates in W = V + P: (v, lam1, lam2)."""
        return self.v + (self.lam1, self.lam2)

    @classmethod
    def from_w(cls, space: QuadSpace, w: Sequence[RationalLike]) -> "H2Element":
        w = to_vector(w)
        if len(w) != space.dim + 2:
            raise DimensionMismatchError("W coordinates need dim(V) + 2 entries")
        return cls(space, w[:-2], w[-2], w[-1])

    def Q(self) -> Fraction:
        return quadratic(self.space, self.v) - self.lam1 * self.lam2


@dataclass(frozen=True)
class VahlenVerdict:
    member: bool
    lam: Optional[Fraction] = None
    failed_condition: Optional[int] = None
    reason: str = ""

    def to_dict(self) -> Dict:
        return {
            "member": self.member,
            "lambda": None if self.lam is None else str(self.lam),
            "failed_condition": self.failed_condition,
            "reason": self.reason,
        }

    def __bool__(self) -> bool:
        return self.member


# ===========================
# phi: C(W) -> M2(C(V))
# ===========================

def _generator_image(frame: VahlenFrame, i: int) -> CliffMat2:
    V = frame.V
    n = frame.n
    if i < n:
        g = Multivector.generator(V, i)
        return CliffMat2.from_entries(V, g, 0, 0, -g)
    if i == n:
        return CliffMat2.from_entries(V, 0, 1, 0, 0)
    if i == n + 1:
        return CliffMat2.from_entries(V, 0, 0, 1, 0)
    raise DimensionMismatchError(f"generator {i} outside W of dimension {n + 2}")


def _blade_image(frame: VahlenFrame, mask: int) -> CliffMat2:
    if mask == 0:
        return CliffMat2.identity(frame.V)
    key = (gram_cache_key(frame.V.gram), mask)

    def compute() -> CliffMat2:
        last = mask.bit_length() - 1
        return _blade_image(frame, mask ^ (1 << last)) * _generator_image(frame, last)

    return get_memo("phi_images").get_or_compute(key, compute)


def phi(frame: VahlenFrame, x: Multivector) -> CliffMat2:
    """
    The algebra isomorphism fixed by v -> (v, 0; 0, -v), f1 -> (0, 1; 0, 0),
    f2 -> (0, 0; 1, 0); blades map to products of generator images.
    """
    if x.space != frame.W:
        raise SpaceMismatchError("phi expects an element of C(V + P) built by VahlenFrame.over")
    out = CliffMat2.scalar(frame.V, 0)
    for mask, c in x.sorted_terms():
        out = out + _blade_image(frame, mask) * c
    return out


def phi_vector(frame: VahlenFrame, w: Sequence[RationalLike]) -> CliffMat2:
    return H2Element.from_w(frame.V, w).to_matrix()


# ===========================
# Involutions, lambda, inverses
# ===========================

def alpha(A: CliffMat2) -> CliffMat2:
    """(a', -b'; -c', d'), matching the grade involution of C(W)."""
    return CliffMat2(grade_involution(A.a), -grade_involution(A.b), -grade_involution(A.c), grade_involution(A.d))


def beta(A: CliffMat2) -> CliffMat2:
    """(d-bar, b-bar; c-bar, a-bar), matching reversion."""
    return CliffMat2(conjugation(A.d), conjugation(A.b), conjugation(A.c), conjugation(A.a))


def gamma(A: CliffMat2) -> CliffMat2:
    """(d*, -b*; -c*, a*), matching conjugation."""
    return CliffMat2(reversion(A.d), -reversion(A.b), -reversion(A.c), reversion(A.a))


def mat_involutions(A: CliffMat2) -> Tuple[CliffMat2, CliffMat2, CliffMat2]:
    return alpha(A), beta(A), gamma(A)


def _lambda_pair(A: CliffMat2) -> Tuple[Multivector, Multivector]:
    a, b, c, d = A.entries()
    return a * reversion(d) - b * reversion(c), reversion(d) * a - reversion(b) * c


def vahlen_lambda(A: CliffMat2) -> Fraction:
    """lambda = a d* - b c* = d* a - b* c; raises unless both agree and are a nonzero scalar."""
    left, right = _lambda_pair(A)
    if left != right or not left.is_scalar() or left.is_zero():
        raise NotInvertibleError("a d* - b c* and d* a - b* c are not the same nonzero scalar")
    return left.scalar_part()


def vahlen_norm(A: CliffMat2) -> CliffMat2:
    """N(A) = A gamma(A); lambda I2 on the Vahlen group."""
    return A * gamma(A)


def sharp(A: CliffMat2) -> CliffMat2:
    """A# = alpha(A)^{-1} = beta(A) / lambda."""
    return beta(A) / vahlen_lambda(A)


def inverse(A: CliffMat2) -> CliffMat2:
    """A^{-1} = gamma(A) / lambda."""
    lam = vahlen_lambda(A)
    inv = gamma(A) / lam
    if A * inv != CliffMat2.identity(A.space) or inv * A != CliffMat2.identity(A.space):
        raise NotInvertibleError("gamma(A) / lambda is not a two-sided inverse")
    return inv


# ===========================
# Membership
# ===========================

Predicate = Callable[[Multivector], bool]


def _is_rational_scalar(x: Multivector) -> bool:
    return x.is_scalar()


def _is_integral_scalar(x: Multivector) -> bool:
    return x.is_scalar() and x.scalar_part().denominator == 1


def _is_lattice_vector(x: Multivector) -> bool:
    return x.is_vector() and all(c.denominator == 1 for c in x.terms.values())


def _fail(index: int, reason: str) -> VahlenVerdict:
    logging.debug(f"Vahlen membership failed at condition {index}: {reason}")
    return VahlenVerdict(member=False, failed_condition=index, reason=reason)


def _check_conditions(
    A: CliffMat2,
    probes: Sequence[Multivector],
    in_subspace: Predicate,
    in_scalars: Predicate,
    lambda_ok: Callable[[Fraction], bool],
) -> VahlenVerdict:
    """
    The seven membership conditions in order; the quantified ones (6) and (7)
    are evaluated on ``probes``, a basis of the relevant subspace.
    """
    a, b, c, d = A.entries()
    a_bar, b_bar, c_bar, d_bar = (conjugation(x) for x in (a, b, c, d))
    a_rev, b_rev, c_rev, d_rev = (reversion(x) for x in (a, b, c, d))

    # (1)
    left = a * d_rev - b * c_rev
    right = d_rev * a - b_rev * c
    if left != right:
        return _fail(1, "a d* - b c* differs from d* a - b* c")
    if not left.is_scalar() or left.is_zero():
        return _fail(1, "a d* - b c* is not a nonzero scalar")
    lam = left.scalar_part()
    if not lambda_ok(lam):
        return _fail(1, f"lambda = {lam} is not allowed here")

    # (2)
    if not (b * a_rev - a * b_rev).is_zero() or not (c * d_rev - d * c_rev).is_zero():
        return _fail(2, "b a* - a b* or c d* - d c* is nonzero")
    # (3)
    if not (a_rev * c - c_rev * a).is_zero() or not (d_rev * b - b_rev * d).is_zero():
        return _fail(3, "a* c - c* a or d* b - b* d is nonzero")
    # (4)
    for name, x, x_bar in (("a", a, a_bar), ("b", b, b_bar), ("c", c, c_bar), ("d", d, d_bar)):
        if not in_scalars(x * x_bar):
            return _fail(4, f"{name} {name}-bar is not an admissible scalar")
    # (5)
    if not in_subspace(b * d_bar) or not in_subspace(a * c_bar):
        return _fail(5, "b d-bar or a c-bar leaves the vector subspace")
    # (6) and (7)
    for k, v in enumerate(probes):
        v_bar = conjugation(v)
        if not in_scalars(a * v * b_bar + b * v_bar * a_bar) or not in_scalars(c * v * d_bar + d * v_bar * c_bar):
            return _fail(6, f"scalar condition fails on basis vector {k}")
        if not in_subspace(a * v * d_bar + b * v_bar * c_bar):
            return _fail(7, f"vector condition fails on basis vector {k}")
    return VahlenVerdict(member=True, lam=lam)


def _vector_probes(V: QuadSpace) -> List[Multivector]:
    return [Multivector.generator(V, i) for i in range(V.dim)]


def is_vahlen(A: CliffMat2) -> VahlenVerdict:
    """Membership in the Vahlen group V(V) over Q."""
    return _check_conditions(
        A,
        _vector_probes(A.space),
        in_subspace=lambda x: x.is_vector(),
        in_scalars=_is_rational_scalar,
        lambda_ok=lambda lam: True,
    )


def is_even(A: CliffMat2) -> bool:
    """a, d even and b, c odd."""
    return A.a.is_even() and A.d.is_even() and A.b.is_odd() and A.c.is_odd()


def is_odd(A: CliffMat2) -> bool:
    return A.a.is_odd() and A.d.is_odd() and A.b.is_even() and A.c.is_even()


def is_vahlen_plus(A: CliffMat2, order: bool = False) -> VahlenVerdict:
    """Membership with lambda = 1; the verdict is truthy exactly for members."""
    verdict = is_vahlen_order(A) if order else is_vahlen(A)
    if verdict.member and verdict.lam != 1:
        return _fail(1, f"lambda = {verdict.lam}, not 1")
    return verdict


def is_vahlen_order(A: CliffMat2) -> VahlenVerdict:
    """
    Membership in V(O) for O = Z[alpha_1, ..., alpha_n] inside C(V^{1/2}).

    Entries must have integer blade coordinates (reported as condition 0);
    lambda must be +-1, scalars must be integers and vectors must lie in the
    root lattice.
    """
    require_order_space(A.space)
    for name, x in zip("abcd", A.entries()):
        if not order_member(x):
            return _fail(CONDITION_INTEGRALITY, f"entry {name} is not in the order")
    return _check_conditions(
        A,
        _vector_probes(A.space),
        in_subspace=_is_lattice_vector,
        in_scalars=_is_integral_scalar,
        lambda_ok=lambda lam: lam in (1, -1),
    )


def check_vahlen(A: CliffMat2, order: bool = False, plus: bool = False, even: bool = False) -> VahlenVerdict:
    """One verdict combining the order, plus (lambda = 1) and grading requirements."""
    if plus:
        verdict = is_vahlen_plus(A, order=order)
    else:
        verdict = is_vahlen_order(A) if order else is_vahlen(A)
    if not verdict.member:
        return verdict
    if even and not is_even(A):
        return _fail(CONDITION_GRADING, "a, d must be even and b, c odd")
    return verdict


def canonical_sign(A: CliffMat2) -> CliffMat2:
    """The representative of {A, -A} whose first nonzero coefficient is positive."""
    for entry in A.entries():
        terms = entry.sorted_terms()
        if terms:
            return A if terms[0][1] > 0 else -A
    return A


def vahlen_spinor_class(A: CliffMat2) -> SquarefreeClass:
    return squarefree_class(vahlen_lambda(A))


# ===========================
# The action on H2(V)
# ===========================

def eta(frame: VahlenFrame, A: CliffMat2, check: bool = True) -> Isometry:
    """
    The isometry X -> A X A# of H2(V), written in W coordinates
    (V generators, then the f1 and f2 slots).
    """
    if A.space != frame.V:
        raise SpaceMismatchError("matrix entries are not over the frame's V")
    if check:
        verdict = is_vahlen(A)
        if not verdict.member:
            raise NotInGroupError(f"not a Vahlen matrix (condition {verdict.failed_condition}: {verdict.reason})")
    A_sharp = sharp(A)
    n = frame.W.dim
    columns = []
    for j in range(n):
        X = H2Element.from_w(frame.V, frame.W.basis_vector(j)).to_matrix()
        columns.append(H2Element.from_matrix(A * X * A_sharp).to_w())
    return Isometry(frame.W, tuple(tuple(columns[j][i] for j in range(n)) for i in range(n)))


# ===========================
# Generators for T_n++
# ===========================

def generators(ext: ExtensionSpec) -> List[H2Element]:
    """X_-1, X_0, X_1, ..., X_n: the images of the simple roots in H2(V)."""
    return [H2Element.from_w(ext.base, alpha_i) for alpha_i in ext.simple_roots]


def generator_matrices(ext: ExtensionSpec) -> List[CliffMat2]:
    return [X.to_matrix() for X in generators(ext)]


def extension_frame(ext: ExtensionSpec) -> VahlenFrame:
    frame = VahlenFrame.over(ext.base)
    if frame.W != ext.W:
        raise AlgebraError("extension space does not match its Vahlen frame")
    return frame


def _h2_lattice_element(X: H2Element) -> bool:
    return all(c.denominator == 1 for c in X.to_w())


def lattice_identity_check(ext: ExtensionSpec) -> bool:
    """
    Check that the lattice spanned by the X_i equals H2(Lambda).

    Each X_i must have integral W coordinates, and each elementary element of
    H2(Lambda) must be an explicit integer combination of the X_i:
    (alpha_i, 0; 0, -alpha_i) = X_i and
    (0, n1; n2, 0) = -(n1 + n2) X_0 - n2 X_-1 - (n1 + n2) (theta, 0; 0, -theta).
    """
    if not ext.simply_laced:
        raise UnsupportedSpaceError("the lattice identity is stated for simply-laced extensions")
    gens = generators(ext)
    if not all(_h2_lattice_element(X) for X in gens):
        return False
    mats = [X.to_matrix() for X in gens]
    V = ext.base
    n = ext.rank

    def combine(coeffs: Sequence[int]) -> CliffMat2:
        out = CliffMat2.scalar(V, 0)
        for k, M in zip(coeffs, mats):
            if k:
                out = out + M * k
        return out

    targets = []
    for i in range(n):
        coeffs = [0] * (n + 2)
        coeffs[i + 2] = 1
        targets.append((coeffs, H2Element.from_w(V, ext.W.basis_vector(i))))
    for n1, n2 in ((1, 0), (0, 1)):
        coeffs = [-n2, -(n1 + n2)] + [-(n1 + n2) * t for t in ext.theta]
        targets.append((coeffs, H2Element(V, V.zero_vector(), n1, n2)))

    for coeffs, X in targets:
        if combine(coeffs) != X.to_matrix():
            logging.warning(f"lattice identity fails for {X}")
            return False
    unimodular = abs(linalg.determinant(ext.root_matrix)) == 1
    logging.debug(f"lattice identity for {ext.name}: unimodular root matrix = {unimodular}")
    return unimodular


def word_matrix(ext: ExtensionSpec, word: Sequence[int]) -> CliffMat2:
    """X_{w_1} X_{w_2} ... for a word of row indices into the simple roots (0 = alpha_-1)."""
    mats = generator_matrices(ext)
    out = CliffMat2.identity(ext.base)
    for i in word:
        out = out * mats[i]
    return out
