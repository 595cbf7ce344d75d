"""Pure numpy versions of the compiled kernels.

Same contracts as ``_ckernels``.  The last two indices of every subset are
handled together through a table of pairwise XORs, so the Python-level loop
runs over ``C(q, k-2)`` prefixes only.
"""

from __future__ import annotations

import itertools

import numpy as np


def _popcount_rows(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x).sum(axis=-1, dtype=np.int64)


def _pair_table(words: np.ndarray):
    q = words.shape[0]
    a, b = np.triu_indices(q, k=1)
    table = words[a] ^ words[b]
    # pairs are grouped by their first index; start[i] is the first row with first index i
    start = np.zeros(q + 1, dtype=np.int64)
    start[1:] = np.cumsum(np.bincount(a, minlength=q))
    return table, start


def subset_stats_by_first(
    words: np.ndarray, n_runs: int, k: int, threads: int = 1, first_only: int = -1
):
    q = words.shape[0]
    sums = np.zeros(q, dtype=np.int64)
    maxs = np.zeros(q, dtype=np.int64)
    if k < 1 or k > q:
        return sums, maxs
    if first_only >= 0:
        if first_only > q - k:
            return sums, maxs
        if k == 1:
            val = n_runs - 2 * int(_popcount_rows(words[first_only]))
            sums[first_only], maxs[first_only] = val * val, abs(val)
            return sums, maxs
        # fold the fixed first column into every later one, then count (k-1)-subsets
        rest = words[first_only + 1:]
        if k == 2:
            vals = n_runs - 2 * _popcount_rows(rest ^ words[first_only])
            sums[first_only], maxs[first_only] = int(np.dot(vals, vals)), int(np.abs(vals).max())
            return sums, maxs
        for j in range(len(rest) - (k - 2)):
            block = np.vstack([(rest[j] ^ words[first_only])[None, :], rest[j + 1:]])
            s, m = subset_stats_by_first(block, n_runs, k - 1, first_only=0)
            sums[first_only] += s[0]
            maxs[first_only] = max(maxs[first_only], m[0])
        return sums, maxs
    if k == 1:
        vals = n_runs - 2 * _popcount_rows(words)
        return vals * vals, np.abs(vals)
    table, start = _pair_table(words)
    a_of_row = np.repeat(np.arange(q), np.diff(start))
    if k == 2:
        vals = n_runs - 2 * _popcount_rows(table)
        np.add.at(sums, a_of_row, vals * vals)
        np.maximum.at(maxs, a_of_row, np.abs(vals))
        return sums, maxs
    for prefix in itertools.combinations(range(q - 2), k - 2):
        last = prefix[-1]
        lo = start[last + 1]
        if lo >= len(table):
            continue
        x = np.bitwise_xor.reduce(words[list(prefix)], axis=0)
        vals = n_runs - 2 * _popcount_rows(table[lo:] ^ x)
        first = prefix[0]
        sums[first] += int(np.dot(vals, vals))
        m = int(np.abs(vals).max())
        if m > maxs[first]:
            maxs[first] = m
    return sums, maxs


def first_uncovered(words: np.ndarray, valid: np.ndarray, p: int):
    q = words.shape[0]
    if p < 1 or p > q:
        return None
    for prefix in itertools.combinations(range(q), p - 1):
        nxt = prefix[-1] + 1 if prefix else 0
        if nxt >= q:
            continue
        masks = valid[None, :]
        for c in prefix:
            col = words[c]
            masks = np.concatenate([masks & col, masks & ~col])
        rest = words[nxt:]
        hit_a = ((masks[:, None, :] & rest[None, :, :]) != 0).any(axis=2)
        hit_b = ((masks[:, None, :] & ~rest[None, :, :]) != 0).any(axis=2)
        bad = ~(hit_a & hit_b).all(axis=0)
        if bad.any():
            return tuple(prefix) + (nxt + int(np.argmax(bad)),)
    return None
