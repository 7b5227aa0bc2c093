"""
Universal Clifford algebras over the rationals.

Generators g_i satisfy g_i g_j + g_j g_i = -2 S(g_i, g_j), so v^2 = -q(v).
Basis elements are normal-ordered generator words e_I = g_{i1} ... g_{is}
(i1 < ... < is), stored as bitmasks. Products of words are normal-ordered
by the anticommutation rule and memoized per Gram matrix.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from config import CLIFFORD_DENSE_DIM_LIMIT
from services.exactform import (
    Isometry,
    QVector,
    QuadSpace,
    SquarefreeClass,
    compose_reflections,
    orthogonal_basis,
    quadratic,
    signature,
    squarefree_class,
)
from utils import linalg
from utils.cache_utils import gram_cache_key, get_memo
from utils.errors import (
    AlgebraError,
    DimensionMismatchError,
    NotInGroupError,
    NotInvertibleError,
    ResourceLimitError,
    SingularSpaceError,
    SpaceMismatchError,
    UnsupportedSpaceError,
)
from utils.rational import RationalLike, to_rational, to_vector

Blade = int
Terms = Tuple[Tuple[Blade, Fraction], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


# ===========================
# Blades
# ===========================

def blade_indices(mask: Blade) -> Tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def blade_mask(indices: Iterable[int]) -> Blade:
    indices = list(indices)
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise AlgebraError(f"blade indices must be strictly increasing: {indices}")
    if any(i < 0 or i >= 64 for i in indices):
        raise AlgebraError("blade indices must lie in [0, 64)")
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def blade_grade(mask: Blade) -> int:
    return bin(mask).count("1")


def blade_sort_key(mask: Blade) -> Tuple[int, ...]:
    """Lexicographic order on index tuples: () < (0,) < (0, 1) < (1,)."""
    return blade_indices(mask)


class BladeTable:
    """Memoized normal-ordered products of generator words for one Gram matrix."""

    def __init__(self, space: QuadSpace):
        self.space = space
        self.gram = space.gram
        self.key = gram_cache_key(space.gram)
        self._memo = get_memo("blade_products")

    def times_generator(self, mask: Blade, j: int) -> Terms:
        return self._memo.get_or_compute((self.key, "g", mask, j), lambda: self._times_generator(mask, j))

    def _times_generator(self, mask: Blade, j: int) -> Terms:
        bit = 1 << j
        if mask == 0:
            return ((bit, ONE),)
        last = mask.bit_length() - 1
        if last < j:
            return ((mask | bit, ONE),)
        rest = mask ^ (1 << last)
        if last == j:
            q = self.gram[j][j]
            return ((rest, -q),) if q != 0 else ()
        # e_rest g_last g_j = -(e_rest g_j) g_last - 2 S(g_last, g_j) e_rest
        acc: Dict[Blade, Fraction] = {}
        top = 1 << last
        for k, c in self.times_generator(rest, j):
            acc[k | top] = -c
        s = self.gram[last][j]
        if s != 0:
            acc[rest] = acc.get(rest, ZERO) - 2 * s
        return tuple((k, c) for k, c in acc.items() if c != 0)

    def _word(self, start: Blade, letters: Iterable[int]) -> Terms:
        current: Dict[Blade, Fraction] = {start: ONE}
        for j in letters:
            nxt: Dict[Blade, Fraction] = {}
            for k, c in current.items():
                for k2, c2 in self.times_generator(k, j):
                    nxt[k2] = nxt.get(k2, ZERO) + c * c2
            current = {k: c for k, c in nxt.items() if c != 0}
        return tuple(current.items())

    def product(self, left: Blade, right: Blade) -> Terms:
        if right == 0:
            return ((left, ONE),)
        if left == 0:
            return ((right, ONE),)
        return self._memo.get_or_compute(
            (self.key, "p", left, right), lambda: self._word(left, blade_indices(right))
        )

    def reverse(self, mask: Blade) -> Terms:
        """The reversed generator word g_is ... g_i1, normal-ordered."""
        if blade_grade(mask) <= 1:
            return ((mask, ONE),)
        return self._memo.get_or_compute(
            (self.key, "r", mask), lambda: self._word(0, reversed(blade_indices(mask)))
        )


def blade_table(space: QuadSpace) -> BladeTable:
    return get_memo("blade_tables").get_or_compute(gram_cache_key(space.gram), lambda: BladeTable(space))


# ===========================
# Multivectors
# ===========================

Scalar = Union[Fraction, int]


class Multivector:
    """Sparse map blade -> nonzero Fraction over a fixed QuadSpace. Immutable."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: QuadSpace, terms: Optional[Dict[Blade, RationalLike]] = None):
        limit = 1 << space.dim
        clean: Dict[Blade, Fraction] = {}
        for mask, coeff in (terms or {}).items():
            if mask < 0 or mask >= limit:
                raise DimensionMismatchError(f"blade {blade_indices(mask)} outside a {space.dim}-generator algebra")
            c = to_rational(coeff)
            if c != 0:
                clean[mask] = c
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors
    @classmethod
    def scalar(cls, space: QuadSpace, value: RationalLike) -> "Multivector":
        return cls(space, {0: value})

    @classmethod
    def zero(cls, space: QuadSpace) -> "Multivector":
        return cls(space, {})

    @classmethod
    def one(cls, space: QuadSpace) -> "Multivector":
        return cls(space, {0: ONE})

    @classmethod
    def blade(cls, space: QuadSpace, indices: Iterable[int], coeff: RationalLike = 1) -> "Multivector":
        return cls(space, {blade_mask(indices): coeff})

    @classmethod
    def generator(cls, space: QuadSpace, i: int) -> "Multivector":
        return cls(space, {1 << i: ONE})

    # predicates and parts
    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(mask == 0 for mask in self.terms)

    def is_vector(self) -> bool:
        """True iff every term is a single generator (the element lies in V)."""
        return all(blade_grade(mask) == 1 for mask in self.terms)

    def is_paravector(self) -> bool:
        return all(blade_grade(mask) <= 1 for mask in self.terms)

    def is_even(self) -> bool:
        return all(blade_grade(mask) % 2 == 0 for mask in self.terms)

    def is_odd(self) -> bool:
        return all(blade_grade(mask) % 2 == 1 for mask in self.terms)

    def scalar_part(self) -> Fraction:
        return self.terms.get(0, ZERO)

    def vector_part(self) -> QVector:
        return tuple(self.terms.get(1 << i, ZERO) for i in range(self.space.dim))

    def grade_part(self, k: int) -> "Multivector":
        return Multivector(self.space, {m: c for m, c in self.terms.items() if blade_grade(m) == k})

    def even_part(self) -> "Multivector":
        return Multivector(self.space, {m: c for m, c in self.terms.items() if blade_grade(m) % 2 == 0})

    def odd_part(self) -> "Multivector":
        return Multivector(self.space, {m: c for m, c in self.terms.items() if blade_grade(m) % 2 == 1})

    def sorted_terms(self) -> List[Tuple[Blade, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: blade_sort_key(t[0]))

    # arithmetic
    def _check(self, other: "Multivector") -> None:
        if other.space != self.space:
            raise SpaceMismatchError("multivectors live in different Clifford algebras")

    def _lift(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            self._check(other)
            return other
        return Multivector.scalar(self.space, to_rational(other))

    def __add__(self, other) -> "Multivector":
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return Multivector(self.space, out)

    __radd__ = __add__

    def __neg__(self) -> "Multivector":
        return Multivector(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Multivector":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Multivector":
        return self._lift(other) - self

    def __mul__(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            return multiply(self, other)
        f = to_rational(other)
        return Multivector(self.space, {m: c * f for m, c in self.terms.items()})

    def __rmul__(self, other) -> "Multivector":
        f = to_rational(other)
        return Multivector(self.space, {m: f * c for m, c in self.terms.items()})

    def __truediv__(self, other) -> "Multivector":
        f = to_rational(other)
        if f == 0:
            raise ZeroDivisionError("division of a multivector by 0")
        return Multivector(self.space, {m: c / f for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Multivector):
            return self.space == other.space and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_scalar() and self.scalar_part() == other
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.space, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        if not self.terms:
            return "Multivector(0)"
        parts = []
        for mask, c in self.sorted_terms():
            name = "e" + "".join(f"_{i}" for i in blade_indices(mask)) if mask else "1"
            parts.append(f"{c}*{name}")
        return "Multivector(" + " + ".join(parts) + ")"


def embed_vector(space: QuadSpace, v: Sequence[RationalLike]) -> Multivector:
    vec = to_vector(v)
    if len(vec) != space.dim:
        raise DimensionMismatchError(f"vector of length {len(vec)} in a space of dimension {space.dim}")
    return Multivector(space, {1 << i: c for i, c in enumerate(vec)})


def multiply(x: Multivector, y: Multivector) -> Multivector:
    if x.space != y.space:
        raise SpaceMismatchError("cannot multiply multivectors from different algebras")
    table = blade_table(x.space)
    acc: Dict[Blade, Fraction] = {}
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            c12 = c1 * c2
            for m, c in table.product(m1, m2):
                acc[m] = acc.get(m, ZERO) + c12 * c
    return Multivector(x.space, acc)


def product(factors: Sequence[Multivector], space: Optional[QuadSpace] = None) -> Multivector:
    if not factors:
        if space is None:
            raise AlgebraError("empty product needs an explicit space")
        return Multivector.one(space)
    out = factors[0]
    for f in factors[1:]:
        out = multiply(out, f)
    return out


# ===========================
# Involutions
# ===========================

def grade_involution(x: Multivector) -> Multivector:
    """x', the automorphism with v' = -v."""
    return Multivector(x.space, {m: (-c if blade_grade(m) % 2 else c) for m, c in x.terms.items()})


def reversion(x: Multivector) -> Multivector:
    """
    x*, the anti-automorphism with v* = v.

    On an orthogonal generator basis this is the sign (-1)^{k(k-1)/2} on
    grade k; for a general Gram matrix each word is reversed and re-ordered.
    """
    table = blade_table(x.space)
    acc: Dict[Blade, Fraction] = {}
    for m, c in x.terms.items():
        for m2, c2 in table.reverse(m):
            acc[m2] = acc.get(m2, ZERO) + c * c2
    return Multivector(x.space, acc)


def conjugation(x: Multivector) -> Multivector:
    """x-bar = (x')*, with v-bar = -v."""
    return reversion(grade_involution(x))


# ===========================
# Center and inverses
# ===========================

@dataclass(frozen=True)
class CenterDescription:
    dim: int
    basis: Tuple[Multivector, ...]
    pseudoscalar: Optional[Multivector]

    def describe(self) -> str:
        return "scalars + pseudoscalar" if self.pseudoscalar is not None else "scalars"


def _check_dense(space: QuadSpace, allow_large: bool) -> None:
    if space.dim > CLIFFORD_DENSE_DIM_LIMIT and not allow_large:
        raise ResourceLimitError(
            f"dense solve over a {2 ** space.dim}-dimensional algebra exceeds CLIFFORD_DENSE_DIM_LIMIT"
        )


def center_check(space: QuadSpace, allow_large: bool = False) -> CenterDescription:
    """
    Compute Z(C) as the common kernel of x -> x g_i - g_i x.

    Expected: the scalars for even dim, scalars plus the product of an
    orthogonal basis for odd dim.
    """
    if not space.nonsingular:
        raise SingularSpaceError("center description needs a nonsingular space")
    _check_dense(space, allow_large)
    n = space.dim
    size = 1 << n
    gens = [Multivector.generator(space, i) for i in range(n)]
    rows = []
    for g in gens:
        block = [[ZERO] * size for _ in range(size)]
        for J in range(size):
            eJ = Multivector(space, {J: ONE})
            comm = eJ * g - g * eJ
            for K, c in comm.terms.items():
                block[K][J] = c
        rows.extend(block)
    kernel = linalg.nullspace(linalg.as_matrix(rows, size)) if rows else [(ONE,)]
    basis = tuple(Multivector(space, dict(enumerate(vec))) for vec in kernel)

    pseudoscalar = None
    if n % 2 == 1:
        pseudoscalar = product([embed_vector(space, v) for v in orthogonal_basis(space)])
        if any(pseudoscalar * g != g * pseudoscalar for g in gens):
            raise AlgebraError("pseudoscalar fails to commute with the generators")
    expected = 2 if n % 2 == 1 else 1
    if len(basis) != expected:
        raise AlgebraError(f"center has dimension {len(basis)}, expected {expected}")
    return CenterDescription(dim=n, basis=basis, pseudoscalar=pseudoscalar)


def inverse(x: Multivector, allow_large: bool = False) -> Multivector:
    """Two-sided inverse; raises NotInvertibleError for non-units."""
    if x.is_zero():
        raise NotInvertibleError("0 is not invertible")
    if x.is_scalar():
        return Multivector.scalar(x.space, 1 / x.scalar_part())
    xbar = conjugation(x)
    n = x * xbar
    if n.is_scalar() and not n.is_zero():
        return xbar / n.scalar_part()

    space = x.space
    _check_dense(space, allow_large)
    size = 1 << space.dim
    logging.debug(f"Dense inverse: solving a {size}x{size} left-regular system")
    L = [[ZERO] * size for _ in range(size)]
    for J in range(size):
        col = x * Multivector(space, {J: ONE})
        for K, c in col.terms.items():
            L[K][J] = c
    rhs = [ONE] + [ZERO] * (size - 1)
    try:
        sol = linalg.solve(linalg.as_matrix(L, size), rhs)
    except NotInvertibleError as e:
        raise NotInvertibleError("left multiplication is singular: element is not a unit") from e
    return Multivector(space, dict(enumerate(sol)))


# ===========================
# Clifford group
# ===========================

@dataclass(frozen=True)
class GroupElement:
    """
    Element of the Clifford group, optionally certified by mirrors with
    value = v_1 v_2 ... v_m.
    """

    value: Multivector
    mirrors: Optional[Tuple[QVector, ...]] = None

    def __post_init__(self):
        if self.mirrors is not None:
            space = self.value.space
            mirrors = tuple(to_vector(v) for v in self.mirrors)
            object.__setattr__(self, "mirrors", mirrors)
            for v in mirrors:
                if quadratic(space, v) == 0:
                    raise NotInGroupError("certificate mirrors must be non-isotropic")
            if product([embed_vector(space, v) for v in mirrors], space) != self.value:
                raise NotInGroupError("certificate does not expand to the stored value")

    @classmethod
    def from_mirrors(cls, space: QuadSpace, mirrors: Sequence[Sequence[RationalLike]]) -> "GroupElement":
        mirrors = tuple(to_vector(v) for v in mirrors)
        value = product([embed_vector(space, v) for v in mirrors], space)
        return cls(value, mirrors)

    @property
    def certified(self) -> bool:
        return self.mirrors is not None

    @property
    def space(self) -> QuadSpace:
        return self.value.space

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        value = self.value * other.value
        if self.certified and other.certified:
            return GroupElement(value, self.mirrors + other.mirrors)
        return GroupElement(value)

    def inverse(self) -> "GroupElement":
        if not self.certified:
            return GroupElement(inverse(self.value))
        space = self.space
        # v^{-1} = -v / q(v)
        mirrors = tuple(
            tuple(-c / quadratic(space, v) for c in v) for v in reversed(self.mirrors)
        )
        return GroupElement.from_mirrors(space, mirrors)


ElementLike = Union[Multivector, GroupElement]


def _value(x: ElementLike) -> Multivector:
    return x.value if isinstance(x, GroupElement) else x


def _twisted_images(x: Multivector) -> List[Multivector]:
    """x g_i (x')^{-1} for every generator g_i."""
    twist = inverse(grade_involution(x))
    return [x * Multivector.generator(x.space, i) * twist for i in range(x.space.dim)]


def in_clifford_group(x: ElementLike) -> bool:
    if isinstance(x, GroupElement) and x.certified:
        return True
    x = _value(x)
    try:
        return all(img.is_vector() for img in _twisted_images(x))
    except NotInvertibleError:
        return False


def _columns_to_isometry(space: QuadSpace, images: List[Multivector]) -> Isometry:
    n = space.dim
    M = [[img.vector_part()[i] for img in images] for i in range(n)]
    return Isometry(space, tuple(tuple(row) for row in M))


def rho(x: ElementLike) -> Isometry:
    """The twisted action v -> x v (x')^{-1}; rho(v) = r_v."""
    if isinstance(x, GroupElement) and x.certified:
        return compose_reflections(x.space, x.mirrors)
    x = _value(x)
    images = _twisted_images(x)
    if not all(img.is_vector() for img in images):
        raise NotInGroupError("twisted conjugation leaves V: element is not in the Clifford group")
    return _columns_to_isometry(x.space, images)


def chi(x: ElementLike) -> Isometry:
    """The plain conjugation v -> x v x^{-1}; chi(v) = -r_v."""
    x = _value(x)
    x_inv = inverse(x)
    images = [x * Multivector.generator(x.space, i) * x_inv for i in range(x.space.dim)]
    if not all(img.is_vector() for img in images):
        raise NotInGroupError("conjugation leaves V")
    return _columns_to_isometry(x.space, images)


def norm_N(x: ElementLike) -> Fraction:
    """N(x) = x x-bar, a nonzero scalar on the Clifford group."""
    x = _value(x)
    n = x * conjugation(x)
    if not n.is_scalar():
        raise NotInGroupError("x x-bar is not a scalar")
    return n.scalar_part()


def spinor_class(x: ElementLike) -> SquarefreeClass:
    return squarefree_class(norm_N(x))


def group_parity(x: ElementLike) -> int:
    """0 on the even Clifford group, 1 on the odd part; det rho(x) = (-1)^parity."""
    x = _value(x)
    if x.is_even():
        return 0
    if x.is_odd():
        return 1
    raise NotInGroupError("element is neither even nor odd")


def pin_plus_member(x: ElementLike) -> bool:
    if not in_clifford_group(x):
        return False
    try:
        return norm_N(x) == 1
    except NotInGroupError:
        return False


def spin_plus_member(x: ElementLike) -> bool:
    return pin_plus_member(x) and _value(x).is_even()


# ===========================
# Orders and morphisms
# ===========================

def is_order_space(space: QuadSpace) -> bool:
    """True for V^{1/2} of a simply-laced finite type: 2*gram is a positive-definite symmetric GCM."""
    for i, row in enumerate(space.gram):
        for j, x in enumerate(row):
            if i == j and x != 1:
                return False
            if i != j and x not in (ZERO, Fraction(-1, 2)):
                return False
    sig = signature(space)
    return sig.positive == space.dim


def require_order_space(space: QuadSpace) -> None:
    if not is_order_space(space):
        raise UnsupportedSpaceError("integral order checks need V^{1/2} of a simply-laced finite type (m = 2)")


def order_member(x: Multivector) -> bool:
    """Integer coefficients in the alpha-blade basis."""
    require_order_space(x.space)
    return all(c.denominator == 1 for c in x.terms.values())


def induced_morphism(x: Multivector, target: QuadSpace, images: Sequence[Multivector]) -> Multivector:
    """
    Extend g_i -> images[i] to an algebra map C(source) -> C(target).

    The images must satisfy the Clifford relations of the source Gram matrix.
    """
    source = x.space
    if len(images) != source.dim:
        raise DimensionMismatchError("need one image per generator")
    for img in images:
        if img.space != target:
            raise SpaceMismatchError("images must live in the target algebra")
    for i in range(source.dim):
        for j in range(i, source.dim):
            anti = images[i] * images[j] + images[j] * images[i]
            if anti != Multivector.scalar(target, -2 * source.gram[i][j]):
                raise AlgebraError(f"images of g_{i}, g_{j} violate the Clifford relation")
    out = Multivector.zero(target)
    for mask, c in x.terms.items():
        term = Multivector.scalar(target, c)
        for i in blade_indices(mask):
            term = term * images[i]
        out = out + term
    return out
