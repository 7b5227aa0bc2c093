"""
Generalized Cartan matrices: axioms, normalized symmetrization, classification,
highest roots, the canonical double extension T_n++ and diagram automorphisms.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import FINITE_TYPE_RANKS, MAX_WORKERS
from services.exactform import (
    HyperbolicPair,
    Isometry,
    QVector,
    QuadSpace,
    Signature,
    cartan_bracket,
    orthogonal_sum,
    quadratic,
    rescale,
    signature,
)
from utils import linalg
from utils.errors import (
    InvalidCartanMatrixError,
    InvalidTypeError,
    NotSymmetrizableError,
    ReducibleMatrixError,
)

IntMatrix = Tuple[Tuple[int, ...], ...]


# ===========================
# Domain Types
# ===========================

def is_gcm(M: Sequence[Sequence[int]]) -> bool:
    """c_ii = 2, c_ij <= 0 off the diagonal, c_ij = 0 iff c_ji = 0."""
    n = len(M)
    if any(len(row) != n for row in M):
        return False
    for i in range(n):
        for j in range(n):
            c = M[i][j]
            if isinstance(c, bool) or not isinstance(c, int):
                return False
            if i == j and c != 2:
                return False
            if i != j and (c > 0 or (c == 0) != (M[j][i] == 0)):
                return False
    return True


@dataclass(frozen=True)
class CartanMatrix:
    entries: IntMatrix
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        if not is_gcm(entries):
            raise InvalidCartanMatrixError(f"not a generalized Cartan matrix: {entries}")
        labels = tuple(self.labels) or tuple(str(i + 1) for i in range(len(entries)))
        if len(labels) != len(entries):
            raise InvalidCartanMatrixError("one label per row is required")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_symmetric(self) -> bool:
        return all(self.entries[i][j] == self.entries[j][i] for i in range(self.n) for j in range(self.n))

    def neighbors(self, i: int) -> List[int]:
        return [j for j in range(self.n) if j != i and self.entries[i][j] != 0]

    def submatrix(self, nodes: Sequence[int]) -> "CartanMatrix":
        nodes = list(nodes)
        return CartanMatrix(
            tuple(tuple(self.entries[i][j] for j in nodes) for i in nodes),
            tuple(self.labels[i] for i in nodes),
        )


@dataclass(frozen=True)
class Symmetrization:
    D: Tuple[int, ...]
    B: IntMatrix


@dataclass(frozen=True)
class Classification:
    kind: str  # finite | affine | indefinite
    lorentzian: bool
    hyperbolic: bool
    signature: Signature

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "lorentzian": self.lorentzian,
            "hyperbolic": self.hyperbolic,
            "signature": list(self.signature),
        }


@dataclass(frozen=True)
class DiagramAutomorphism:
    perm: Tuple[int, ...]
    labels: Tuple[str, ...]

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(len(self.perm)):
            if start in seen or self.perm[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            j = self.perm[start]
            while j != start:
                cycle.append(j)
                seen.add(j)
                j = self.perm[j]
            out.append(tuple(cycle))
        return out

    def describe(self) -> str:
        """Cycle notation in diagram labels, e.g. "(1 4)(2 3)"; "id" for the identity."""
        if self.is_identity():
            return "id"
        return "".join("(" + " ".join(self.labels[i] for i in c) + ")" for c in self.cycles())


@dataclass(frozen=True)
class ExtensionSpec:
    """The double extension T_n++ realized in W = V^{1/m} + P."""

    base_type: str
    rank: int
    theta: Tuple[int, ...]
    m: int
    finite: CartanMatrix
    symmetrization: Symmetrization
    base: QuadSpace  # V^{1/m}
    W: QuadSpace
    simple_roots: Tuple[QVector, ...]  # alpha_-1, alpha_0, alpha_1..alpha_n
    hyperbolic_pair: HyperbolicPair
    cartan: CartanMatrix  # C++

    @property
    def name(self) -> str:
        return f"{self.base_type}{self.rank}++"

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.cartan.labels

    @property
    def simply_laced(self) -> bool:
        return self.m == 2 and self.finite.is_symmetric()

    @cached_property
    def root_matrix(self) -> np.ndarray:
        """Columns are the simple roots in W coordinates."""
        n = self.W.dim
        return linalg.as_matrix([[self.simple_roots[j][i] for j in range(n)] for i in range(n)], n)

    def root_coordinates(self, w: Sequence[Fraction]) -> QVector:
        return linalg.solve(self.root_matrix, list(w))


# ===========================
# Symmetrization and classification
# ===========================

def connected_components(C: Sequence[Sequence[int]]) -> List[List[int]]:
    n = len(C)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j != i and C[i][j] != 0 and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def is_irreducible(C: CartanMatrix) -> bool:
    return len(connected_components(C.entries)) <= 1


def symmetrize(C: CartanMatrix) -> Symmetrization:
    """
    The diagonal D with D*C symmetric, positive integer entries and gcd 1.

    Ratios are propagated along the diagram: eps_j = eps_i c_ij / c_ji.
    """
    if not is_irreducible(C):
        raise ReducibleMatrixError("symmetrize expects an irreducible matrix; split it into components first")
    c = C.entries
    n = C.n
    eps: List[Optional[Fraction]] = [None] * n
    eps[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in C.neighbors(i):
            value = eps[i] * c[i][j] / c[j][i]
            if eps[j] is None:
                eps[j] = value
                stack.append(j)
            elif eps[j] != value:
                raise NotSymmetrizableError(f"inconsistent ratios around node {C.labels[j]}")
    for i in range(n):
        for j in range(n):
            if eps[i] * c[i][j] != eps[j] * c[j][i]:
                raise NotSymmetrizableError("D*C is not symmetric")
    scale = reduce(lcm, (e.denominator for e in eps), 1)
    D = [int(e * scale) for e in eps]
    g = reduce(gcd, D)
    D = tuple(d // g for d in D)
    B = tuple(tuple(D[i] * c[i][j] for j in range(n)) for i in range(n))
    return Symmetrization(D=D, B=B)


def is_symmetrizable(C: CartanMatrix) -> bool:
    try:
        for comp in connected_components(C.entries):
            symmetrize(C.submatrix(comp))
    except NotSymmetrizableError:
        return False
    return True


def _kind(C: CartanMatrix) -> Tuple[str, Signature]:
    B = symmetrize(C).B
    sig = signature(QuadSpace.from_rows(B))
    if sig == (C.n, 0, 0):
        return "finite", sig
    if sig == (C.n - 1, 0, 1):
        return "affine", sig
    return "indefinite", sig


def _vertex_deleted_kinds(C: CartanMatrix, vertex: int) -> List[str]:
    rest = [i for i in range(C.n) if i != vertex]
    sub = C.submatrix(rest)
    return [_kind(sub.submatrix(comp))[0] for comp in connected_components(sub.entries)]


def classify(C: CartanMatrix) -> Classification:
    """
    Finite / affine / indefinite by definiteness of B = D*C, plus the
    Lorentzian and hyperbolic flags.

    Every proper connected subdiagram lies inside a component of some
    vertex-deleted diagram, so the hyperbolic sweep runs over the n
    vertex deletions.
    """
    if not is_irreducible(C):
        raise ReducibleMatrixError("classify expects an irreducible matrix")
    kind, sig = _kind(C)
    lorentzian = sig.negative == 1 and sig.zero == 0
    hyperbolic = False
    if kind == "indefinite":
        hyperbolic = True
        with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
            futures = {executor.submit(_vertex_deleted_kinds, C, v): v for v in range(C.n)}
            for future in as_completed(futures):
                if any(k == "indefinite" for k in future.result()):
                    hyperbolic = False
    logging.debug(f"classify: kind={kind} signature={tuple(sig)} hyperbolic={hyperbolic}")
    return Classification(kind=kind, lorentzian=lorentzian, hyperbolic=hyperbolic, signature=sig)


# ===========================
# Finite types
# ===========================

def _validate_type(base_type: str, rank: int) -> None:
    if base_type not in FINITE_TYPE_RANKS:
        raise InvalidTypeError(f"unknown finite type {base_type!r}")
    low, high = FINITE_TYPE_RANKS[base_type]
    if rank < low or (high is not None and rank > high):
        raise InvalidTypeError(f"type {base_type} needs rank in [{low}, {high or 'inf'}], got {rank}")


def finite_cartan_matrix(base_type: str, rank: int) -> CartanMatrix:
    """
    Finite-type Cartan matrices with c_ij = <alpha_i, alpha_j>.

    B_n: alpha_n short (c_{n,n-1} = -2); C_n: alpha_n long (c_{n-1,n} = -2);
    D_n: alpha_{n-1}, alpha_n attached to alpha_{n-2}; E_n: chain with the
    last node attached to alpha_3 (E6, E7) or alpha_5 (E8); F4: c_32 = -2;
    G2: c_21 = -3.
    """
    _validate_type(base_type, rank)
    n = rank
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def edge(i: int, j: int, cij: int = -1, cji: int = -1) -> None:
        # 1-indexed
        c[i - 1][j - 1] = cij
        c[j - 1][i - 1] = cji

    if base_type in "ABC":
        for i in range(1, n):
            edge(i, i + 1)
        if base_type == "B":
            edge(n - 1, n, -1, -2)
        elif base_type == "C":
            edge(n - 1, n, -2, -1)
    elif base_type == "D":
        for i in range(1, n - 1):
            edge(i, i + 1)
        edge(n - 2, n)
    elif base_type == "E":
        for i in range(1, n - 1):
            edge(i, i + 1)
        edge(5 if n == 8 else 3, n)
    elif base_type == "F":
        edge(1, 2)
        edge(2, 3, -1, -2)
        edge(3, 4)
    elif base_type == "G":
        edge(1, 2, -1, -3)
    return CartanMatrix(tuple(tuple(row) for row in c))


_HIGHEST_ROOTS = {
    "E6": (1, 2, 3, 2, 1, 2),
    "E7": (2, 3, 4, 3, 2, 1, 2),
    "E8": (2, 3, 4, 5, 6, 4, 2, 3),
    "F4": (2, 3, 4, 2),
    "G2": (2, 3),
}


def highest_root(base_type: str, rank: int) -> Tuple[Tuple[int, ...], int]:
    """(theta coefficients, m = kappa(theta, theta)) with kappa from the normalized B."""
    _validate_type(base_type, rank)
    n = rank
    if base_type == "A":
        theta = (1,) * n
    elif base_type == "B":
        theta = (1,) + (2,) * (n - 1)
    elif base_type == "C":
        theta = (2,) * (n - 1) + (1,)
    elif base_type == "D":
        theta = (1,) + (2,) * (n - 3) + (1, 1)
    else:
        theta = _HIGHEST_ROOTS[f"{base_type}{n}"]
    B = symmetrize(finite_cartan_matrix(base_type, rank)).B
    m = sum(theta[i] * B[i][j] * theta[j] for i in range(n) for j in range(n))
    return theta, m


# ===========================
# Double extension
# ===========================

def double_extend(base_type: str, rank: int) -> ExtensionSpec:
    """
    Build T_n++: W = V^{1/m} + P with alpha_-1 = f1 - f2, alpha_0 = -f1 - theta.

    W coordinates: alpha_1..alpha_n, then f1, f2. Cartan rows follow
    (-1, 0, 1, ..., n).
    """
    finite = finite_cartan_matrix(base_type, rank)
    sym = symmetrize(finite)
    theta, m = highest_root(base_type, rank)
    n = rank

    base = rescale(QuadSpace.from_rows(sym.B), Fraction(1, m))
    W = orthogonal_sum(base, QuadSpace.hyperbolic_plane())
    f1 = W.basis_vector(n)
    f2 = W.basis_vector(n + 1)
    pair = HyperbolicPair(W, f1, f2)

    alpha_m1 = tuple(a - b for a, b in zip(f1, f2))
    alpha_0 = tuple(-a - Fraction(t) for a, t in zip(f1, tuple(theta) + (0, 0)))
    roots = (alpha_m1, alpha_0) + tuple(W.basis_vector(i) for i in range(n))

    entries = []
    for a in roots:
        row = []
        for b in roots:
            value = cartan_bracket(W, a, b)
            if value.denominator != 1:
                raise InvalidCartanMatrixError(f"non-integral Cartan entry {value}")
            row.append(int(value))
        entries.append(tuple(row))
    labels = ("-1", "0") + tuple(str(i) for i in range(1, n + 1))
    cartan = CartanMatrix(tuple(entries), labels)

    logging.info(f"Built {base_type}{rank}++ (m={m}, dim W={W.dim})")
    return ExtensionSpec(
        base_type=base_type,
        rank=rank,
        theta=tuple(theta),
        m=m,
        finite=finite,
        symmetrization=sym,
        base=base,
        W=W,
        simple_roots=roots,
        hyperbolic_pair=pair,
        cartan=cartan,
    )


def affine_submatrix(ext: ExtensionSpec) -> CartanMatrix:
    """The T_n^(1) block: C++ without the alpha_-1 node."""
    return ext.cartan.submatrix(range(1, ext.cartan.n))


# ===========================
# Diagram automorphisms
# ===========================

def _node_invariant(c: IntMatrix, i: int) -> Tuple:
    n = len(c)
    return (tuple(sorted(c[i][j] for j in range(n))), tuple(sorted(c[j][i] for j in range(n))))


def diagram_automorphisms(C: CartanMatrix) -> List[DiagramAutomorphism]:
    """
    All permutations p with c[p(i)][p(j)] = c[i][j], identity first.

    Backtracking over a BFS order of the diagram so every new node has an
    already-placed neighbour; candidates are pruned by row/column multisets.
    """
    c = C.entries
    n = C.n
    order: List[int] = []
    for comp in connected_components(c):
        queue = [comp[0]]
        placed = {comp[0]}
        while queue:
            i = queue.pop(0)
            order.append(i)
            for j in C.neighbors(i):
                if j not in placed:
                    placed.add(j)
                    queue.append(j)
    invariants = [_node_invariant(c, i) for i in range(n)]

    results: List[Tuple[int, ...]] = []
    image: Dict[int, int] = {}
    used = [False] * n

    def extend(k: int) -> None:
        if k == n:
            results.append(tuple(image[i] for i in range(n)))
            return
        i = order[k]
        for cand in range(n):
            if used[cand] or invariants[cand] != invariants[i]:
                continue
            if all(c[cand][image[j]] == c[i][j] and c[image[j]][cand] == c[j][i] for j in image):
                image[i] = cand
                used[cand] = True
                extend(k + 1)
                used[cand] = False
                del image[i]

    extend(0)
    results.sort(key=lambda p: (any(i != x for i, x in enumerate(p)), p))
    logging.debug(f"{len(results)} diagram automorphisms")
    return [DiagramAutomorphism(perm=p, labels=C.labels) for p in results]


def automorphism_isometry(ext: ExtensionSpec, aut: DiagramAutomorphism) -> Isometry:
    """The isometry of W with alpha_i -> alpha_{perm(i)}: R P R^{-1}."""
    n = ext.W.dim
    P = linalg.zero_matrix(n, n)
    for i, j in enumerate(aut.perm):
        P[j, i] = Fraction(1)
    R = ext.root_matrix
    return Isometry.from_array(ext.W, R @ P @ linalg.inverse(R))


def simple_root_norms(ext: ExtensionSpec) -> Tuple[Fraction, ...]:
    return tuple(quadratic(ext.W, a) for a in ext.simple_roots)
