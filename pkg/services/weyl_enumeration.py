"""
Breadth-first enumeration of the Weyl group of a simply-laced T_n++ by word
length, carrying for every element its reflection matrix on W and the
matching product of generator matrices X_i.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config import ENUMERATION_MAX_ELEMENTS, ENUMERATION_MAX_LEN, MAX_WORKERS
from services.cartan import ExtensionSpec
from services.exactform import Isometry, SquarefreeClass, o_plus_member, reflection
from services.vahlen import (
    CliffMat2,
    canonical_sign,
    eta,
    extension_frame,
    generator_matrices,
    vahlen_lambda,
    vahlen_spinor_class,
)
from utils import linalg
from utils.errors import AlgebraError, ResourceLimitError, UnsupportedSpaceError

Word = Tuple[int, ...]
FrozenMatrix = Tuple[Tuple[Fraction, ...], ...]

FRONTIER_CHUNK = 64


@dataclass(frozen=True)
class WeylElement:
    word: Word  # row indices into the simple roots: 0 is alpha_-1, 1 is alpha_0, ...
    isometry: Isometry
    vahlen: CliffMat2  # sign-normalized
    lam: Fraction
    spinor_class: SquarefreeClass
    o_plus: bool

    @property
    def length(self) -> int:
        return len(self.word)


def _expand_chunk(
    chunk: List[Tuple[Word, np.ndarray, CliffMat2]],
    reflections: List[np.ndarray],
    gens: List[CliffMat2],
) -> Dict[FrozenMatrix, Tuple[Word, np.ndarray, CliffMat2]]:
    found: Dict[FrozenMatrix, Tuple[Word, np.ndarray, CliffMat2]] = {}
    for word, M, X in chunk:
        last = word[-1] if word else None
        for i, r in enumerate(reflections):
            if i == last:
                continue
            child_word = word + (i,)
            child_M = M @ r
            key = linalg.freeze(child_M)
            held = found.get(key)
            if held is None or child_word < held[0]:
                found[key] = (child_word, child_M, X * gens[i])
    return found


def enumerate_weyl(
    ext: ExtensionSpec,
    max_len: int,
    unsafe: bool = False,
    verify: bool = True,
    progress_callback: Optional[Callable[[int, int, int], None]] = None,
) -> List[WeylElement]:
    """
    All Weyl group elements of length <= max_len, in (length, word) order.

    Elements are deduplicated by their exact isometry matrix and keep the
    lexicographically smallest word reaching them at their first level.
    With ``verify`` every element checks eta(X_word) == r_word.

    Args:
        ext: simply-laced extension from double_extend.
        max_len: maximal word length.
        unsafe: lift the ENUMERATION_MAX_LEN / ENUMERATION_MAX_ELEMENTS bounds.
        verify: recompute eta for each element.
        progress_callback: called as (length, frontier size, total so far).
    """
    if not ext.simply_laced:
        raise UnsupportedSpaceError("Weyl enumeration with integral Vahlen words needs a simply-laced extension")
    if max_len < 0:
        raise AlgebraError("max_len must be non-negative")
    if max_len > ENUMERATION_MAX_LEN and not unsafe:
        raise ResourceLimitError(f"max_len {max_len} exceeds ENUMERATION_MAX_LEN={ENUMERATION_MAX_LEN}")

    frame = extension_frame(ext)
    W = ext.W
    reflections = [reflection(W, alpha).array for alpha in ext.simple_roots]
    gens = generator_matrices(ext)
    witness = tuple(a + b for a, b in zip(ext.hyperbolic_pair.f1, ext.hyperbolic_pair.f2))

    identity = linalg.identity_matrix(W.dim)
    seen = {linalg.freeze(identity)}
    records: List[Tuple[Word, np.ndarray, CliffMat2]] = [((), identity, CliffMat2.identity(ext.base))]
    frontier = list(records)

    for length in range(1, max_len + 1):
        chunks = [frontier[k:k + FRONTIER_CHUNK] for k in range(0, len(frontier), FRONTIER_CHUNK)]
        merged: Dict[FrozenMatrix, Tuple[Word, np.ndarray, CliffMat2]] = {}
        with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
            futures = [executor.submit(_expand_chunk, chunk, reflections, gens) for chunk in chunks]
            for future in as_completed(futures):
                for key, entry in future.result().items():
                    if key in seen:
                        continue
                    held = merged.get(key)
                    if held is None or entry[0] < held[0]:
                        merged[key] = entry
        frontier = sorted(merged.values(), key=lambda e: e[0])
        seen.update(merged.keys())
        records.extend(frontier)
        if len(records) > ENUMERATION_MAX_ELEMENTS and not unsafe:
            raise ResourceLimitError(
                f"enumeration passed ENUMERATION_MAX_ELEMENTS={ENUMERATION_MAX_ELEMENTS} at length {length}"
            )
        logging.info(f"{ext.name}: length {length}, {len(frontier)} new elements, {len(records)} total")
        if progress_callback:
            progress_callback(length, len(frontier), len(records))
        if not frontier:
            break

    elements = []
    for word, M, X in records:
        sigma = Isometry.from_array(W, M)
        if verify and eta(frame, X, check=False) != sigma:
            raise AlgebraError(f"eta of the Vahlen word {word} differs from the reflection word")
        elements.append(
            WeylElement(
                word=word,
                isometry=sigma,
                vahlen=canonical_sign(X),
                lam=vahlen_lambda(X),
                spinor_class=vahlen_spinor_class(X),
                o_plus=o_plus_member(W, sigma, witness),
            )
        )
    return elements
