"""
Paravectors and their Vahlen groups.

U_para = Q + U inside C(U) with q_para(x) = x x-bar. The twisted action
rho_para, the isomorphism xi: C(U) -> C0(U + L) onto the even part, the
induced map Xi on 2x2 matrices, the Hermitian picture (lam1, x; x-bar, lam2)
and the worked A1++ / A2++ correspondences live here.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from services.cartan import ExtensionSpec, double_extend
from services.clifford import (
    Multivector,
    conjugation,
    embed_vector,
    grade_involution,
    induced_morphism,
    inverse as mv_inverse,
    order_member,
    reversion,
    rho,
)
from services.exactform import (
    Isometry,
    QVector,
    QuadSpace,
    bilinear,
    orthogonal_sum,
    quadratic,
)
from services.vahlen import (
    CliffMat2,
    VahlenFrame,
    VahlenVerdict,
    _check_conditions,
    check_vahlen,
    eta,
    sharp,
    vahlen_lambda,
)
from services.weyl_enumeration import enumerate_weyl
from utils import linalg
from utils.errors import (
    DimensionMismatchError,
    InvalidTypeError,
    NotInGroupError,
    NotInvertibleError,
    SpaceMismatchError,
)
from utils.rational import RationalLike, format_rational, to_rational, to_vector

ZERO = Fraction(0)
ONE = Fraction(1)


# ===========================
# Spaces
# ===========================

def para_space(U: QuadSpace) -> QuadSpace:
    """U_para = F + U with basis (1, u_1, ..., u_n)."""
    return orthogonal_sum(QuadSpace.diagonal([1]), U)


def line_space(U: QuadSpace) -> QuadSpace:
    """V = U + L with q(e) = 1; e is the last generator."""
    return orthogonal_sum(U, QuadSpace.diagonal([1]))


def h2_para_space(U: QuadSpace) -> QuadSpace:
    """Coordinates (x_0, u_1..u_n, lam1, lam2) with Q = q_para(x) - lam1 lam2."""
    return orthogonal_sum(para_space(U), QuadSpace.hyperbolic_plane())


# ===========================
# Domain Types
# ===========================

@dataclass(frozen=True)
class Paravector:
    space: QuadSpace  # U
    scalar: Fraction
    vec: QVector

    def __post_init__(self):
        vec = to_vector(self.vec)
        if len(vec) != self.space.dim:
            raise DimensionMismatchError(f"paravector part of length {len(vec)} in a space of dimension {self.space.dim}")
        object.__setattr__(self, "scalar", to_rational(self.scalar))
        object.__setattr__(self, "vec", vec)

    @classmethod
    def from_coords(cls, U: QuadSpace, coords: Sequence[RationalLike]) -> "Paravector":
        coords = to_vector(coords)
        if len(coords) != U.dim + 1:
            raise DimensionMismatchError("paravector coordinates need dim(U) + 1 entries")
        return cls(U, coords[0], coords[1:])

    @classmethod
    def from_multivector(cls, x: Multivector) -> "Paravector":
        if not x.is_paravector():
            raise NotInGroupError("element is not a paravector")
        return cls(x.space, x.scalar_part(), x.vector_part())

    def coords(self) -> QVector:
        return (self.scalar,) + self.vec

    def to_multivector(self) -> Multivector:
        return embed_vector(self.space, self.vec) + self.scalar

    def conjugate(self) -> "Paravector":
        return Paravector(self.space, self.scalar, tuple(-c for c in self.vec))


def q_para(x: Paravector) -> Fraction:
    """x x-bar = x_0^2 + q(u)."""
    return x.scalar * x.scalar + quadratic(x.space, x.vec)


def S_para(x: Paravector, y: Paravector) -> Fraction:
    if x.space != y.space:
        raise SpaceMismatchError("paravectors over different spaces")
    return x.scalar * y.scalar + bilinear(x.space, x.vec, y.vec)


def _para_basis(U: QuadSpace) -> List[Multivector]:
    return [Multivector.one(U)] + [Multivector.generator(U, i) for i in range(U.dim)]


# ===========================
# rho_para
# ===========================

def rho_para(x: Multivector, y: Paravector) -> Paravector:
    """x y (x')^{-1}; for a non-isotropic paravector x this is -r_x(y-bar)."""
    if x.space != y.space:
        raise SpaceMismatchError("element and paravector live over different spaces")
    image = x * y.to_multivector() * mv_inverse(grade_involution(x))
    if not image.is_paravector():
        raise NotInGroupError("twisted action leaves the paravectors")
    return Paravector.from_multivector(image)


def in_para_clifford_group(x: Multivector) -> bool:
    try:
        twist = mv_inverse(grade_involution(x))
    except NotInvertibleError:
        return False
    return all((x * b * twist).is_paravector() for b in _para_basis(x.space))


def rho_para_isometry(x: Multivector) -> Isometry:
    """Matrix of rho_para(x) on (1, u_1, ..., u_n)."""
    U = x.space
    cols = [rho_para(x, Paravector.from_multivector(b)).coords() for b in _para_basis(U)]
    n = U.dim + 1
    return Isometry(para_space(U), tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))


# ===========================
# xi, sigma and Xi
# ===========================

def _lift(x: Multivector, V: QuadSpace) -> Multivector:
    """C(U) -> C(U + L) on blade masks; U generators keep their indices."""
    return Multivector(V, dict(x.terms))


def line_generator(U: QuadSpace) -> Multivector:
    return Multivector.generator(line_space(U), U.dim)


def xi(x: Multivector) -> Multivector:
    """xi(x) = x_0 + e x_1, the algebra isomorphism fixed by u -> e u."""
    V = line_space(x.space)
    e = Multivector.generator(V, x.space.dim)
    return _lift(x.even_part(), V) + e * _lift(x.odd_part(), V)


def sigma(y: Paravector) -> QVector:
    """The isometry U_para -> V, lam + u -> lam e + u, in V coordinates."""
    return y.vec + (y.scalar,)


def sigma_matrix(U: QuadSpace) -> np.ndarray:
    n = U.dim
    S = linalg.zero_matrix(n + 1, n + 1)
    S[n, 0] = ONE
    for i in range(n):
        S[i, i + 1] = ONE
    return S


def big_sigma_matrix(U: QuadSpace) -> np.ndarray:
    """sigma extended to H2(U_para) -> H2(V), identity on the lam slots."""
    n = U.dim
    S = linalg.zero_matrix(n + 3, n + 3)
    S[: n + 1, : n + 1] = sigma_matrix(U)
    S[n + 1, n + 1] = ONE
    S[n + 2, n + 2] = ONE
    return S


def Xi(A: CliffMat2) -> CliffMat2:
    """
    (g1 a + g2 a', g1 b - g2 b'; g2 c - g1 c', g2 d + g1 d') with
    g1 = (1 + e)/2, g2 = (1 - e)/2, entries read inside C(U + L).
    """
    U = A.space
    V = line_space(U)
    e = Multivector.generator(V, U.dim)
    g1 = (e + 1) / 2
    g2 = (1 - e) / 2
    a, b, c, d = (_lift(x, V) for x in A.entries())
    return CliffMat2(
        g1 * a + g2 * grade_involution(a),
        g1 * b - g2 * grade_involution(b),
        g2 * c - g1 * grade_involution(c),
        g2 * d + g1 * grade_involution(d),
    )


def xi_intertwines(x: Multivector) -> bool:
    """rho(xi(x)) o sigma = sigma o rho_para(x)."""
    S = sigma_matrix(x.space)
    return linalg.freeze(rho(xi(x)).array @ S) == linalg.freeze(S @ rho_para_isometry(x).array)


# ===========================
# Vahlen groups for paravectors
# ===========================

def is_vahlen_para(A: CliffMat2) -> VahlenVerdict:
    """The seven membership conditions with U_para in place of V."""
    return _check_conditions(
        A,
        _para_basis(A.space),
        in_subspace=lambda x: x.is_paravector(),
        in_scalars=lambda x: x.is_scalar(),
        lambda_ok=lambda lam: True,
    )


def _require_para(A: CliffMat2) -> None:
    verdict = is_vahlen_para(A)
    if not verdict.member:
        raise NotInGroupError(f"not a paravector Vahlen matrix (condition {verdict.failed_condition}: {verdict.reason})")


@dataclass(frozen=True)
class ParaH2Element:
    """(x, lam1; lam2, x-bar) with x a paravector."""

    x: Paravector
    lam1: Fraction
    lam2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam1", to_rational(self.lam1))
        object.__setattr__(self, "lam2", to_rational(self.lam2))

    @property
    def space(self) -> QuadSpace:
        return self.x.space

    def coords(self) -> QVector:
        return self.x.coords() + (self.lam1, self.lam2)

    @classmethod
    def from_coords(cls, U: QuadSpace, coords: Sequence[RationalLike]) -> "ParaH2Element":
        coords = to_vector(coords)
        return cls(Paravector.from_coords(U, coords[:-2]), coords[-2], coords[-1])

    def to_matrix(self) -> CliffMat2:
        x = self.x.to_multivector()
        return CliffMat2.from_entries(self.space, x, self.lam1, self.lam2, conjugation(x))

    @classmethod
    def from_matrix(cls, A: CliffMat2) -> "ParaH2Element":
        if not (A.a.is_paravector() and A.b.is_scalar() and A.c.is_scalar() and A.d == conjugation(A.a)):
            raise NotInGroupError("matrix is not of the form (x, l1; l2, x-bar)")
        return cls(Paravector.from_multivector(A.a), A.b.scalar_part(), A.c.scalar_part())

    def Q(self) -> Fraction:
        return q_para(self.x) - self.lam1 * self.lam2


@dataclass(frozen=True)
class HermitianElement:
    """(lam1, x; x-bar, lam2) with Q(X) = q_para(x) - lam1 lam2."""

    lam1: Fraction
    x: Paravector
    lam2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam1", to_rational(self.lam1))
        object.__setattr__(self, "lam2", to_rational(self.lam2))

    @property
    def space(self) -> QuadSpace:
        return self.x.space

    def coords(self) -> QVector:
        """Same coordinate order as ParaH2Element: (x, lam1, lam2)."""
        return self.x.coords() + (self.lam1, self.lam2)

    @classmethod
    def from_coords(cls, U: QuadSpace, coords: Sequence[RationalLike]) -> "HermitianElement":
        coords = to_vector(coords)
        return cls(coords[-2], Paravector.from_coords(U, coords[:-2]), coords[-1])

    def to_matrix(self) -> CliffMat2:
        x = self.x.to_multivector()
        return CliffMat2.from_entries(self.space, self.lam1, x, conjugation(x), self.lam2)

    @classmethod
    def from_matrix(cls, A: CliffMat2) -> "HermitianElement":
        if not (A.a.is_scalar() and A.d.is_scalar() and A.b.is_paravector() and A.c == conjugation(A.b)):
            raise NotInGroupError("matrix is not Hermitian (l1, x; x-bar, l2)")
        return cls(A.a.scalar_part(), Paravector.from_multivector(A.b), A.d.scalar_part())

    def Q(self) -> Fraction:
        return q_para(self.x) - self.lam1 * self.lam2


def _coords_to_isometry(space: QuadSpace, columns: List[QVector]) -> Isometry:
    n = space.dim
    return Isometry(space, tuple(tuple(columns[j][i] for j in range(n)) for i in range(n)))


def eta_para(A: CliffMat2, check: bool = True) -> Isometry:
    """X -> A X A# on H2(U_para)."""
    if check:
        _require_para(A)
    U = A.space
    space = h2_para_space(U)
    A_sharp = sharp(A)
    cols = []
    for j in range(space.dim):
        X = ParaH2Element.from_coords(U, space.basis_vector(j)).to_matrix()
        cols.append(ParaH2Element.from_matrix(A * X * A_sharp).coords())
    return _coords_to_isometry(space, cols)


def E2(U: QuadSpace) -> CliffMat2:
    return CliffMat2.from_entries(U, 0, 1, 1, 0)


def psi(X: CliffMat2) -> CliffMat2:
    """(x, l1; l2, x-bar) -> (l1, x; x-bar, l2), i.e. X E2."""
    return X * E2(X.space)


def dagger(A: CliffMat2) -> CliffMat2:
    """A^dagger = (a-bar, c-bar; b-bar, d-bar) / lambda = E2 A# E2."""
    lam = vahlen_lambda(A)
    return CliffMat2(conjugation(A.a), conjugation(A.c), conjugation(A.b), conjugation(A.d)) / lam


def hermitian_transport(A: CliffMat2, X: HermitianElement, check: bool = True) -> HermitianElement:
    """A . X = A X A^dagger."""
    if check:
        _require_para(A)
    return HermitianElement.from_matrix(A * X.to_matrix() * dagger(A))


def eta_tilde(A: CliffMat2, check: bool = True) -> Isometry:
    """Matrix of the Hermitian action in (x, lam1, lam2) coordinates."""
    if check:
        _require_para(A)
    U = A.space
    space = h2_para_space(U)
    cols = [
        hermitian_transport(A, HermitianElement.from_coords(U, space.basis_vector(j)), check=False).coords()
        for j in range(space.dim)
    ]
    return _coords_to_isometry(space, cols)


def Xi_intertwines(A: CliffMat2) -> bool:
    """eta(Xi(A)) o Sigma = Sigma o eta_para(A)."""
    U = A.space
    S = big_sigma_matrix(U)
    frame = VahlenFrame.over(line_space(U))
    left = eta(frame, Xi(A)).array @ S
    right = S @ eta_para(A).array
    return linalg.freeze(left) == linalg.freeze(right)


# ===========================
# Worked examples
# ===========================

Report = Dict[str, Dict[str, object]]


def _entry(passed: Optional[bool], witness: str) -> Dict[str, object]:
    return {"pass": passed, "witness": witness}


def _format_mv(x: Multivector) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for mask, c in x.sorted_terms():
        name = "*".join(f"a{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1)
        parts.append(format_rational(c) if not mask else f"{format_rational(c)}*{name}")
    return " + ".join(parts)


def _format_matrix(A: CliffMat2) -> str:
    return "(" + ", ".join(_format_mv(x) for x in (A.a, A.b)) + "; " + ", ".join(_format_mv(x) for x in (A.c, A.d)) + ")"


def _require_extension(ext: Optional[ExtensionSpec], base_type: str, rank: int) -> ExtensionSpec:
    ext = ext or double_extend(base_type, rank)
    if (ext.base_type, ext.rank) != (base_type, rank):
        raise InvalidTypeError(f"this worked example needs {base_type}{rank}++, got {ext.name}")
    return ext


def _word_label(ext: ExtensionSpec, word: Sequence[int]) -> str:
    return " ".join(f"r{ext.labels[i]}" for i in word) or "id"


def _sl2z_word(rng: np.random.Generator, U: QuadSpace, length: int) -> CliffMat2:
    letters = [
        CliffMat2.from_entries(U, 1, 1, 0, 1),
        CliffMat2.from_entries(U, 1, -1, 0, 1),
        CliffMat2.from_entries(U, 0, -1, 1, 0),
    ]
    out = CliffMat2.identity(U)
    for _ in range(length):
        out = out * letters[int(rng.integers(len(letters)))]
    return out


def worked_example_A1(ext: Optional[ExtensionSpec] = None, samples: int = 20, seed: int = 0) -> Report:
    """
    A1++ with U = 0: C(U) = Q, V = L = Q e and Xi(a, b; c, d) = (a, e b; -e c, d).

    Checks the display, that Xi of the unimodular generators lands in the
    integral even plus group, that their eta images are even Weyl elements,
    and the same inclusion on random words.
    """
    ext = _require_extension(ext, "A", 1)
    U = QuadSpace(())
    V = line_space(U)
    report: Report = {}
    report["line_matches_root_space"] = _entry(V == ext.base, f"gram {V.gram[0][0]}")

    e = Multivector.generator(ext.base, 0)
    sample = CliffMat2.from_entries(U, 2, 3, 5, 7)
    expected = CliffMat2.from_entries(ext.base, 2, e * 3, -(e * 5), 7)
    image = Xi(sample)
    report["xi_display"] = _entry(image == expected, _format_matrix(image))

    T = CliffMat2.from_entries(U, 1, 1, 0, 1)
    S = CliffMat2.from_entries(U, 0, -1, 1, 0)
    verdicts = {name: check_vahlen(Xi(M), order=True, plus=True, even=True) for name, M in (("T", T), ("S", S))}
    report["generators_in_integral_spin_group"] = _entry(
        all(v.member for v in verdicts.values()),
        "; ".join(f"{k}: lambda={v.lam}" for k, v in verdicts.items()),
    )

    elements = enumerate_weyl(ext, 2, verify=False)
    frame = VahlenFrame.over(ext.base)
    found = []
    for name, M in (("T", T), ("S", S)):
        sigma_M = eta(frame, Xi(M))
        match = next((el for el in elements if el.isometry == sigma_M), None)
        found.append((name, match))
    report["eta_images_are_even_weyl_elements"] = _entry(
        all(m is not None and m.length % 2 == 0 for _, m in found),
        "; ".join(f"{n}: {_word_label(ext, m.word) if m else 'not found'}" for n, m in found),
    )

    rng = np.random.default_rng(seed)
    words = [_sl2z_word(rng, U, int(rng.integers(1, 7))) for _ in range(samples)]
    ok = all(check_vahlen(Xi(M), order=True, plus=True, even=True).member for M in words)
    report["random_words_in_integral_spin_group"] = _entry(ok, f"{samples} words of length <= 6")
    report["converse_inclusion"] = _entry(None, "unverified: only the inclusion of Xi(SL(2,Z)) is checked")
    logging.info(f"A1++ worked example: {sum(1 for r in report.values() if r['pass'])} checks passed")
    return report


def _a2_embedding(ext: ExtensionSpec) -> Tuple[QuadSpace, List[Multivector]]:
    """U = Q u with q(u) = 3; u -> beta2 = a1 + 2 a2 and e -> beta1 = a1."""
    U = QuadSpace.diagonal([3])
    a1 = Multivector.generator(ext.base, 0)
    a2 = Multivector.generator(ext.base, 1)
    return U, [a1 + a2 * 2, a1]


def _blade_coords(x: Multivector) -> QVector:
    return tuple(x.terms.get(mask, ZERO) for mask in range(1 << x.space.dim))


def worked_example_A2(ext: Optional[ExtensionSpec] = None) -> Report:
    """
    A2++ through the quaternion algebra (-1, -3): i = beta1, j = beta2, k = i j.

    The order Z[a1, a2] has Z-basis (1, i, (j - i)/2, (k + 1)/2); the report
    checks integrality, unimodularity, closure, the Xi display and that Xi of
    the generators of SL(2, O_-3) lands in the integral even plus group.
    """
    ext = _require_extension(ext, "A", 2)
    U, images = _a2_embedding(ext)
    V = line_space(U)
    report: Report = {}

    def embed(x: Multivector) -> Multivector:
        return induced_morphism(x, ext.base, images)

    def embed_matrix(A: CliffMat2) -> CliffMat2:
        return A.map(embed)

    i = images[1]
    j = images[0]
    k = i * j
    basis = [Multivector.one(ext.base), i, (j - i) / 2, (k + 1) / 2]
    report["quaternion_relations"] = _entry(
        i * i == -1 and j * j == -3 and i * j == -(j * i),
        "i^2 = -1, j^2 = -3, ij = -ji",
    )
    report["order_basis_integral"] = _entry(
        all(order_member(b) for b in basis), "; ".join(_format_mv(b) for b in basis)
    )

    M = linalg.as_matrix([_blade_coords(b) for b in basis], 4).T
    det = linalg.determinant(M)
    report["order_basis_unimodular"] = _entry(abs(det) == 1, f"det = {det}")

    def in_order_span(x: Multivector) -> bool:
        return all(c.denominator == 1 for c in linalg.solve(M, _blade_coords(x)))

    products_ok = all(in_order_span(x * y) for x in basis for y in basis)
    report["order_closed_under_products"] = _entry(products_ok, "16 products")
    involutions_ok = all(
        in_order_span(f(b)) for b in basis for f in (grade_involution, reversion, conjugation)
    )
    report["order_closed_under_involutions"] = _entry(involutions_ok, "', * and bar")

    xs = [(1, 2), (3, 4), (5, 6), (7, 8)]
    u = Multivector.generator(U, 0)
    sample = CliffMat2(*(u * y + x for x, y in xs))
    (x1, y1), (x2, y2), (x3, y3), (x4, y4) = xs
    expected = CliffMat2(k * y1 + x1, i * x2 + j * y2, -(i * x3) + j * y3, x4 - k * y4)
    report["xi_display"] = _entry(
        embed_matrix(Xi(sample)) == expected and Xi(sample).space == V,
        "(x1 + y1 k, x2 i + y2 j; -x3 i + y3 j, x4 - y4 k)",
    )

    omega = (u + 1) / 2
    gens = {
        "T": CliffMat2.from_entries(U, 1, 1, 0, 1),
        "S": CliffMat2.from_entries(U, 0, -1, 1, 0),
        "T_omega": CliffMat2.from_entries(U, 1, omega, 0, 1),
    }
    para_ok = all(is_vahlen_para(A).member for A in gens.values())
    report["generators_in_para_vahlen_group"] = _entry(para_ok, ", ".join(gens))
    images_in_order = {name: embed_matrix(Xi(A)) for name, A in gens.items()}
    verdicts = {name: check_vahlen(A, order=True, plus=True, even=True) for name, A in images_in_order.items()}
    report["generators_in_integral_spin_group"] = _entry(
        all(v.member for v in verdicts.values()),
        f"Xi(T_omega) = {_format_matrix(images_in_order['T_omega'])}",
    )
    report["converse_inclusion"] = _entry(None, "unverified: only the inclusion of Xi(SL(2, O_-3)) is checked")
    logging.info(f"A2++ worked example: {sum(1 for r in report.values() if r['pass'])} checks passed")
    return report
