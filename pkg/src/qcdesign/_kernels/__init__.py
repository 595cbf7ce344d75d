"""Hot kernels for subset enumeration over packed sign columns.

The compiled extension is used when it imports; otherwise (or when the
environment variable ``QCDESIGN_PURE`` is set to a non-empty value) the numpy
fallback is selected.  Both expose the same functions.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _fallback

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_INT64_SAFE = 2**62


def available_backends() -> dict:
    out = {"python": _fallback}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out


def _select():
    if os.environ.get("QCDESIGN_PURE") or _ckernels is None:
        return "python", _fallback
    return "cython", _ckernels


BACKEND, _impl = _select()


def threads() -> int:
    raw = os.environ.get("QCDESIGN_THREADS")
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def pack_columns(entries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pack an ``N x q`` +-1 matrix into ``q x W`` uint64 words (bit set where -1).

    Returns the words and a length-``W`` mask of the bits that hold real runs.
    """
    entries = np.asarray(entries)
    n_runs, q = entries.shape
    n_words = max(1, -(-n_runs // 64))
    bits = np.zeros((q, n_words * 64), dtype=bool)
    bits[:, :n_runs] = (entries < 0).T
    words = np.packbits(bits, axis=1, bitorder="little").view("<u8")
    valid_bits = np.zeros(n_words * 64, dtype=bool)
    valid_bits[:n_runs] = True
    valid = np.packbits(valid_bits, bitorder="little").view("<u8")
    return np.ascontiguousarray(words, dtype=np.uint64), np.ascontiguousarray(valid, dtype=np.uint64)


def subset_stats(words: np.ndarray, n_runs: int, k: int, backend=None) -> tuple[int, int]:
    """Over all k-subsets of columns: (sum of squared Schur sums, max |Schur sum|).

    Exact: the kernels accumulate in int64 per smallest index, so the worst
    case partial sum is bounded first and the enumeration is split further
    whenever it could leave the int64 range.
    """
    impl = _impl if backend is None else available_backends()[backend]
    q = words.shape[0]
    if k == 0:
        return n_runs * n_runs, n_runs
    if k < 0 or k > q:
        return 0, 0
    return _exact(impl, np.ascontiguousarray(words), n_runs, k, None)


def _exact(impl, words, n_runs, k, head):
    # k-subsets of `words`, each XORed with `head` when given
    q = words.shape[0]
    if head is None and math.comb(q - 1, k - 1) * n_runs * n_runs < _INT64_SAFE:
        sums, maxs = impl.subset_stats_by_first(words, n_runs, k, threads())
        return sum(int(s) for s in sums), int(maxs.max())
    total, mx = 0, 0
    for i in range(q - k + 1):
        h = words[i] if head is None else words[i] ^ head
        if k == 1:
            val = n_runs - 2 * int(np.bitwise_count(h).sum())
            s, m = val * val, abs(val)
        elif math.comb(q - i - 2, k - 2) * n_runs * n_runs < _INT64_SAFE:
            block = np.ascontiguousarray(np.vstack([h[None, :], words[i + 1:]]))
            sums, maxs = impl.subset_stats_by_first(block, n_runs, k, 1, 0)
            s, m = int(sums[0]), int(maxs[0])
        else:
            s, m = _exact(impl, np.ascontiguousarray(words[i + 1:]), n_runs, k - 1, h)
        total += s
        mx = max(mx, m)
    return total, mx


def first_uncovered(words: np.ndarray, valid: np.ndarray, p: int, backend=None):
    impl = _impl if backend is None else available_backends()[backend]
    return impl.first_uncovered(words, valid, p)
