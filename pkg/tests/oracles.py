"""
Independent reference implementations used by the tests. They share no code
with services/ beyond plain tuples and Fractions.
"""

from fractions import Fraction
from typing import Dict, List, Sequence, Set, Tuple

Word = Tuple[int, ...]


def rewrite_product(gram: Sequence[Sequence[Fraction]], left: Word, right: Word) -> Dict[int, Fraction]:
    """
    Normal-order the word left + right one rewrite at a time:
    g_i g_i -> -G[i][i] and g_i g_j -> -g_j g_i - 2 G[i][j] for i > j.
    Returns {bitmask: coefficient}.
    """
    pending: Dict[Word, Fraction] = {tuple(left) + tuple(right): Fraction(1)}
    done: Dict[Word, Fraction] = {}
    while pending:
        word, c = pending.popitem()
        if c == 0:
            continue
        p = next((k for k in range(len(word) - 1) if word[k] >= word[k + 1]), None)
        if p is None:
            done[word] = done.get(word, Fraction(0)) + c
            continue
        i, j = word[p], word[p + 1]
        head, tail = word[:p], word[p + 2:]
        if i == j:
            _add(pending, head + tail, -Fraction(gram[i][i]) * c)
        else:
            _add(pending, head + (j, i) + tail, -c)
            _add(pending, head + tail, -2 * Fraction(gram[i][j]) * c)
    out: Dict[int, Fraction] = {}
    for word, c in done.items():
        if c:
            mask = sum(1 << i for i in word)
            out[mask] = out.get(mask, Fraction(0)) + c
    return {m: c for m, c in out.items() if c}


def _add(acc: Dict[Word, Fraction], word: Word, c: Fraction) -> None:
    acc[word] = acc.get(word, Fraction(0)) + c


def reflection_matrices(cartan: Sequence[Sequence[int]]) -> List[Tuple[Tuple[int, ...], ...]]:
    """s_i(alpha_j) = alpha_j - c_ij alpha_i in simple-root coordinates (columns are images)."""
    n = len(cartan)
    mats = []
    for i in range(n):
        rows = [[int(r == col) for col in range(n)] for r in range(n)]
        for j in range(n):
            rows[i][j] -= cartan[i][j]
        mats.append(tuple(tuple(row) for row in rows))
    return mats


def _matmul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def ball_sizes(cartan: Sequence[Sequence[int]], max_len: int) -> List[int]:
    """|{w : l(w) <= k}| for k = 0..max_len by brute-force closure under right multiplication."""
    gens = reflection_matrices(cartan)
    n = len(cartan)
    identity = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    ball: Set = {identity}
    frontier = [identity]
    sizes = [1]
    for _ in range(max_len):
        nxt = []
        for M in frontier:
            for g in gens:
                P = _matmul(M, g)
                if P not in ball:
                    ball.add(P)
                    nxt.append(P)
        frontier = nxt
        sizes.append(len(ball))
    return sizes
