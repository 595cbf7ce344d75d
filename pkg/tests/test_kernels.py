import itertools

import numpy as np
import pytest

from qcdesign import _kernels
from conftest import random_design


def brute(entries, k):
    E = entries.astype(np.int64)
    sums = [int(np.prod(E[:, H], axis=1).sum()) for H in itertools.combinations(range(E.shape[1]), k)]
    return sum(s * s for s in sums), max(abs(s) for s in sums)


def brute_uncovered(entries, p):
    for H in itertools.combinations(range(entries.shape[1]), p):
        if len({tuple(r) for r in entries[:, H]}) < 2**p:
            return H
    return None


@pytest.mark.parametrize("runs,q", [(8, 6), (50, 9), (64, 10), (70, 8), (130, 7)])
def test_subset_stats_against_brute_force(backend, runs, q):
    rng = np.random.default_rng(runs * q)
    D = random_design(rng, runs, q)
    words, _ = _kernels.pack_columns(D.entries)
    for k in range(1, min(q, 5) + 1):
        assert _kernels.subset_stats(words, runs, k, backend=backend) == brute(D.entries, k)


def test_subset_stats_edge_k(backend):
    rng = np.random.default_rng(1)
    D = random_design(rng, 16, 4)
    words, _ = _kernels.pack_columns(D.entries)
    assert _kernels.subset_stats(words, 16, 0, backend=backend) == (256, 16)
    assert _kernels.subset_stats(words, 16, 5, backend=backend) == (0, 0)


def test_split_path_matches_direct_path(backend, monkeypatch):
    rng = np.random.default_rng(3)
    D = random_design(rng, 100, 11)
    words, _ = _kernels.pack_columns(D.entries)
    expected = [brute(D.entries, k) for k in (2, 3, 4)]
    # force every level of the recursive split
    monkeypatch.setattr(_kernels, "_INT64_SAFE", 10**5)
    assert [_kernels.subset_stats(words, 100, k, backend=backend) for k in (2, 3, 4)] == expected


@pytest.mark.parametrize("p", [1, 2, 3])
def test_first_uncovered(backend, p):
    rng = np.random.default_rng(p)
    for runs in (6, 16, 40, 70):
        D = random_design(rng, runs, 6)
        words, valid = _kernels.pack_columns(D.entries)
        assert _kernels.first_uncovered(words, valid, p, backend=backend) == brute_uncovered(D.entries, p)


def test_pack_columns_layout():
    e = np.ones((70, 2), dtype=np.int8)
    e[0, 0] = -1
    e[69, 1] = -1
    words, valid = _kernels.pack_columns(e)
    assert words.shape == (2, 2)
    assert words[0, 0] == 1 and words[0, 1] == 0
    assert words[1, 1] == 1 << 5
    assert valid[0] == np.uint64(2**64 - 1) and valid[1] == np.uint64(2**6 - 1)


def test_backends_listed():
    assert "python" in _kernels.available_backends()
    assert _kernels.BACKEND in _kernels.available_backends()


def test_threads_env(monkeypatch):
    monkeypatch.setenv("QCDESIGN_THREADS", "3")
    assert _kernels.threads() == 3
