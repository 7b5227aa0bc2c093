"""
In-memory memo tables for blade products and other per-space tables.
Bounded by CLIFFORD_MEMO_SIZE; entries are only ever added, never changed,
so concurrent readers always see consistent values.
"""

import hashlib
import threading
from typing import Any, Callable, Dict, Hashable

from config import CLIFFORD_MEMO_SIZE

_MISSING = object()


class BoundedMemo:
    """Lock-guarded dict memo; stops storing once ``maxsize`` entries exist."""

    def __init__(self, name: str, maxsize: int = CLIFFORD_MEMO_SIZE):
        self.name = name
        self.maxsize = maxsize
        self._data: Dict[Hashable, Any] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get_or_compute(self, key: Hashable, compute: Callable[[], Any]) -> Any:
        # single dict reads are atomic; the lock only serializes writers
        value = self._data.get(key, _MISSING)
        if value is not _MISSING:
            self.hits += 1
            return value
        self.misses += 1
        value = compute()
        with self._lock:
            if key not in self._data and len(self._data) < self.maxsize:
                self._data[key] = value
            return self._data.get(key, value)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        return len(self._data)


# Registry of named memo tables: {name: BoundedMemo}
_MEMOS: Dict[str, BoundedMemo] = {}
_REGISTRY_LOCK = threading.Lock()


def get_memo(name: str) -> BoundedMemo:
    """Return the process-wide memo table called ``name``, creating it once."""
    with _REGISTRY_LOCK:
        memo = _MEMOS.get(name)
        if memo is None:
            memo = BoundedMemo(name)
            _MEMOS[name] = memo
        return memo


def gram_cache_key(gram) -> str:
    """Stable content key for a Gram matrix (tuple of tuples of Fractions)."""
    text = ";".join(",".join(str(x) for x in row) for row in gram)
    return hashlib.md5(text.encode()).hexdigest()


def clear_memos() -> None:
    with _REGISTRY_LOCK:
        for memo in _MEMOS.values():
            memo.clear()


def get_cache_stats() -> Dict[str, Any]:
    """Get statistics about the memo tables."""
    with _REGISTRY_LOCK:
        return {
            name: {"entries": len(memo), "hits": memo.hits, "misses": memo.misses, "maxsize": memo.maxsize}
            for name, memo in sorted(_MEMOS.items())
        }
