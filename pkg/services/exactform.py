"""
Exact quadratic spaces over the rationals.

Bilinear/quadratic forms, reflections, signatures, orthogonal bases, the
Cartan-Dieudonne factorization of an isometry into reflections, spinor norms
and the time-cone test for O+ membership.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from utils import linalg
from utils.errors import (
    AlgebraError,
    DimensionMismatchError,
    IsotropicVectorError,
    NotAnIsometryError,
    SingularSpaceError,
    SpaceMismatchError,
    UnsupportedSpaceError,
)
from utils.rational import RationalLike, to_rational, to_rows, to_vector

QVector = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


# ===========================
# Domain Types
# ===========================

@dataclass(frozen=True)
class QuadSpace:
    """Symmetric Gram matrix of a rational quadratic space; G[i][j] = S(g_i, g_j)."""

    gram: Tuple[Tuple[Fraction, ...], ...]
    nonsingular: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        gram = to_rows(self.gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise DimensionMismatchError("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise AlgebraError(f"Gram matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "nonsingular", linalg.determinant(linalg.as_matrix(gram, n)) != 0)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "QuadSpace":
        return cls(to_rows(rows))

    @classmethod
    def diagonal(cls, values: Sequence[RationalLike]) -> "QuadSpace":
        n = len(values)
        return cls(tuple(tuple(to_rational(values[i]) if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def hyperbolic_plane(cls) -> "QuadSpace":
        return cls(((ZERO, -HALF), (-HALF, ZERO)))

    @property
    def dim(self) -> int:
        return len(self.gram)

    @cached_property
    def matrix(self) -> np.ndarray:
        return linalg.as_matrix(self.gram, self.dim)

    def basis_vector(self, i: int) -> QVector:
        return tuple(ONE if j == i else ZERO for j in range(self.dim))

    def zero_vector(self) -> QVector:
        return (ZERO,) * self.dim


class Signature(NamedTuple):
    positive: int
    negative: int
    zero: int


@dataclass(frozen=True, order=True)
class SquarefreeClass:
    """Signed squarefree integer standing for a class in Q^x / Q^x2."""

    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or self.value == 0:
            raise AlgebraError("squarefree class must be a nonzero integer")
        if any(e > 1 for e in factorint(abs(self.value)).values()):
            raise AlgebraError(f"{self.value} is not squarefree")

    def __mul__(self, other: "SquarefreeClass") -> "SquarefreeClass":
        return squarefree_class(Fraction(self.value * other.value))

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Isometry:
    """Matrix acting on generator coordinates with M^T G M = G."""

    space: QuadSpace
    matrix: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        M = to_rows(self.matrix)
        n = self.space.dim
        if len(M) != n or any(len(row) != n for row in M):
            raise DimensionMismatchError(f"isometry matrix must be {n}x{n}")
        object.__setattr__(self, "matrix", M)
        A = linalg.as_matrix(M, n)
        if linalg.freeze(A.T @ self.space.matrix @ A) != self.space.gram:
            raise NotAnIsometryError("matrix does not preserve the Gram matrix")

    @classmethod
    def from_array(cls, space: QuadSpace, M: np.ndarray) -> "Isometry":
        return cls(space, linalg.freeze(M))

    @classmethod
    def identity(cls, space: QuadSpace) -> "Isometry":
        return cls.from_array(space, linalg.identity_matrix(space.dim))

    @cached_property
    def array(self) -> np.ndarray:
        return linalg.as_matrix(self.matrix, self.space.dim)

    def apply(self, v: Sequence[RationalLike]) -> QVector:
        return linalg.mat_vec(self.array, _coerce(self.space, v))

    def __matmul__(self, other: "Isometry") -> "Isometry":
        """Composition self o other."""
        if other.space != self.space:
            raise SpaceMismatchError("cannot compose isometries of different spaces")
        return Isometry.from_array(self.space, self.array @ other.array)

    def __neg__(self) -> "Isometry":
        return Isometry.from_array(self.space, -self.array)

    def inverse(self) -> "Isometry":
        return Isometry.from_array(self.space, linalg.inverse(self.array))

    def is_identity(self) -> bool:
        return self.matrix == Isometry.identity(self.space).matrix

    def determinant(self) -> Fraction:
        return linalg.determinant(self.array)


@dataclass(frozen=True)
class HyperbolicPair:
    space: QuadSpace
    f1: QVector
    f2: QVector

    def __post_init__(self):
        f1, f2 = _coerce(self.space, self.f1), _coerce(self.space, self.f2)
        object.__setattr__(self, "f1", f1)
        object.__setattr__(self, "f2", f2)
        if quadratic(self.space, f1) != 0 or quadratic(self.space, f2) != 0:
            raise AlgebraError("hyperbolic pair vectors must be isotropic")
        if bilinear(self.space, f1, f2) != -HALF:
            raise AlgebraError("hyperbolic pair must satisfy S(f1, f2) = -1/2")


# ===========================
# Forms and Spaces
# ===========================

def _coerce(space: QuadSpace, v: Sequence[RationalLike]) -> QVector:
    vec = to_vector(v)
    if len(vec) != space.dim:
        raise DimensionMismatchError(f"vector of length {len(vec)} in a space of dimension {space.dim}")
    return vec


def vector(space: QuadSpace, coords: Sequence[RationalLike]) -> QVector:
    return _coerce(space, coords)


def bilinear(space: QuadSpace, v: Sequence[RationalLike], w: Sequence[RationalLike]) -> Fraction:
    return linalg.bilinear_form(space.matrix, _coerce(space, v), _coerce(space, w))


def quadratic(space: QuadSpace, v: Sequence[RationalLike]) -> Fraction:
    v = _coerce(space, v)
    return linalg.bilinear_form(space.matrix, v, v)


def cartan_bracket(space: QuadSpace, v: Sequence[RationalLike], w: Sequence[RationalLike]) -> Fraction:
    """<v, w> = 2 S(v, w) / S(v, v), the root-system pairing."""
    qv = quadratic(space, v)
    if qv == 0:
        raise IsotropicVectorError("cartan bracket needs a non-isotropic first argument")
    return 2 * bilinear(space, v, w) / qv


def rescale(space: QuadSpace, lam: RationalLike) -> QuadSpace:
    lam = to_rational(lam)
    if lam == 0:
        raise AlgebraError("cannot rescale a quadratic space by 0")
    return QuadSpace(tuple(tuple(lam * x for x in row) for row in space.gram))


def orthogonal_sum(a: QuadSpace, b: QuadSpace) -> QuadSpace:
    if a.dim == 0:
        return b
    if b.dim == 0:
        return a
    n = a.dim + b.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < a.dim and j < a.dim:
                row.append(a.gram[i][j])
            elif i >= a.dim and j >= a.dim:
                row.append(b.gram[i - a.dim][j - a.dim])
            else:
                row.append(ZERO)
        rows.append(tuple(row))
    return QuadSpace(tuple(rows))


def radical(space: QuadSpace) -> List[QVector]:
    if space.dim == 0:
        return []
    return linalg.nullspace(space.matrix)


def is_nonsingular(space: QuadSpace) -> bool:
    return space.nonsingular


def signature(space: QuadSpace) -> Signature:
    diag, _ = linalg.congruence_diagonalize(space.matrix)
    return Signature(
        positive=sum(1 for d in diag if d > 0),
        negative=sum(1 for d in diag if d < 0),
        zero=sum(1 for d in diag if d == 0),
    )


def is_lorentzian(space: QuadSpace) -> bool:
    """Exactly one negative and no zero diagonal entry."""
    sig = signature(space)
    return sig.negative == 1 and sig.zero == 0


def orthogonal_basis(space: QuadSpace) -> List[QVector]:
    """
    Exact orthogonal basis, non-isotropic vectors first.

    For a nonsingular space every returned vector is non-isotropic; the
    isotropic tail (if any) spans the radical.
    """
    _, P = linalg.congruence_diagonalize(space.matrix)
    return [tuple(P[i, j] for i in range(space.dim)) for j in range(space.dim)]


def timelike_witness(space: QuadSpace) -> QVector:
    for v in orthogonal_basis(space):
        if quadratic(space, v) < 0:
            return v
    raise AlgebraError("space has no time-like vector")


# ===========================
# Reflections
# ===========================

def reflect(space: QuadSpace, v: Sequence[RationalLike], w: Sequence[RationalLike]) -> QVector:
    """r_v(w) = w - 2 S(w, v) / S(v, v) v."""
    v, w = _coerce(space, v), _coerce(space, w)
    qv = quadratic(space, v)
    if qv == 0:
        raise IsotropicVectorError(f"cannot reflect in isotropic vector {list(map(str, v))}")
    f = 2 * bilinear(space, w, v) / qv
    return tuple(wi - f * vi for wi, vi in zip(w, v))


def reflection(space: QuadSpace, v: Sequence[RationalLike]) -> Isometry:
    v = _coerce(space, v)
    qv = quadratic(space, v)
    if qv == 0:
        raise IsotropicVectorError("reflection mirror must be non-isotropic")
    Gv = linalg.mat_vec(space.matrix, v)
    n = space.dim
    M = [[(ONE if i == j else ZERO) - 2 * v[i] * Gv[j] / qv for j in range(n)] for i in range(n)]
    return Isometry(space, to_rows(M))


def compose_reflections(space: QuadSpace, mirrors: Sequence[Sequence[RationalLike]]) -> Isometry:
    """r_{v1} o r_{v2} o ... o r_{vk}; the identity for an empty list."""
    M = linalg.identity_matrix(space.dim)
    for v in mirrors:
        M = M @ reflection(space, v).array
    return Isometry.from_array(space, M)


def determinant(sigma: Isometry) -> Fraction:
    return sigma.determinant()


def is_rotation(sigma: Isometry) -> bool:
    """Membership in SO(V)."""
    return sigma.determinant() == 1


# ===========================
# Cartan-Dieudonne and spinor norms
# ===========================

def _check_orthogonal_basis(space: QuadSpace, basis: Sequence[Sequence[RationalLike]]) -> List[QVector]:
    basis = [_coerce(space, b) for b in basis]
    if len(basis) != space.dim:
        raise DimensionMismatchError("orthogonal basis must have dim(space) vectors")
    for i, b in enumerate(basis):
        if quadratic(space, b) == 0:
            raise IsotropicVectorError("orthogonal basis vectors must be non-isotropic")
        for c in basis[i + 1:]:
            if bilinear(space, b, c) != 0:
                raise AlgebraError("basis vectors are not mutually orthogonal")
    return basis


def cartan_dieudonne(
    space: QuadSpace,
    sigma: Isometry,
    basis: Optional[Sequence[Sequence[RationalLike]]] = None,
    verify: bool = True,
) -> List[QVector]:
    """
    Factor an isometry into at most 2*dim reflections.

    Walks an orthogonal basis e_1..e_n keeping psi_i = (reflections so far) o sigma.
    With u = psi_{i-1}(e_i): nothing is added when u = e_i; r_{u-e_i} is added
    when u - e_i is non-isotropic; otherwise r_{u+e_i} followed by r_{e_i}.
    Every added reflection fixes e_1..e_{i-1}.

    Args:
        space: nonsingular quadratic space.
        sigma: isometry of ``space``.
        basis: optional orthogonal basis driving the construction.
        verify: raise AlgebraError when the mirrors do not recompose sigma.
            Callers that report the mismatch themselves pass False.

    Returns:
        Mirrors v_1..v_k with sigma = r_{v_1} o ... o r_{v_k}.
    """
    if not space.nonsingular:
        raise SingularSpaceError("Cartan-Dieudonne needs a nonsingular space")
    if sigma.space != space:
        raise SpaceMismatchError("isometry belongs to a different space")
    basis = orthogonal_basis(space) if basis is None else _check_orthogonal_basis(space, basis)

    psi = sigma.array
    mirrors: List[QVector] = []

    def apply_mirror(v: QVector) -> None:
        nonlocal psi
        mirrors.append(v)
        psi = reflection(space, v).array @ psi

    for e in basis:
        u = linalg.mat_vec(psi, e)
        if u == e:
            continue
        diff = tuple(a - b for a, b in zip(u, e))
        if quadratic(space, diff) != 0:
            apply_mirror(diff)
        else:
            apply_mirror(tuple(a + b for a, b in zip(u, e)))
            apply_mirror(e)

    if verify and compose_reflections(space, mirrors) != sigma:
        raise AlgebraError("reflection factorization failed to recompose")
    logging.debug(f"Cartan-Dieudonne: {len(mirrors)} mirrors in dimension {space.dim}")
    return mirrors


def squarefree_class(x: RationalLike) -> SquarefreeClass:
    """Squarefree part of numerator*denominator, sign kept."""
    x = to_rational(x)
    if x == 0:
        raise AlgebraError("0 has no square class")
    n = x.numerator * x.denominator
    core = prod(p for p, e in factorint(abs(n)).items() if e % 2)
    return SquarefreeClass(core if n > 0 else -core)


def spinor_norm(
    space: QuadSpace,
    sigma: Isometry,
    basis: Optional[Sequence[Sequence[RationalLike]]] = None,
) -> SquarefreeClass:
    mirrors = cartan_dieudonne(space, sigma, basis)
    return squarefree_class(prod((quadratic(space, v) for v in mirrors), start=ONE))


def o_plus_member(space: QuadSpace, sigma: Isometry, witness: Sequence[RationalLike]) -> bool:
    """True iff sigma keeps the time cone of ``witness``: S(sigma(w), w) < 0."""
    sig = signature(space)
    if sig.negative != 1 or sig.zero != 0:
        raise UnsupportedSpaceError(f"O+ test needs signature (k,1,0), got {tuple(sig)}")
    w = _coerce(space, witness)
    if quadratic(space, w) >= 0:
        raise AlgebraError("witness vector must be time-like")
    return bilinear(space, sigma.apply(w), w) < 0
