# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-enumeration kernels over packed sign columns.

A column is stored as ``W`` 64-bit words, bit set where the entry is -1, so
the Schur product of a column subset is the XOR of its words and its entry
sum is ``N - 2 * popcount``.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport parallel, prange
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

cnp.import_array()


cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil


cdef inline int64_t _abs64(int64_t x) noexcept nogil:
    return -x if x < 0 else x


cdef void _walk(const uint64_t* cols, Py_ssize_t q, Py_ssize_t W, int64_t N, int k,
                Py_ssize_t first, uint64_t* buf, Py_ssize_t* idx,
                int64_t* out_sumsq, int64_t* out_max) noexcept nogil:
    # all k-subsets whose smallest index is `first`
    cdef Py_ssize_t w, j, lvl
    cdef int64_t pop, val, sumsq = 0, mx = 0
    cdef const uint64_t* c
    cdef uint64_t* pre
    for w in range(W):
        buf[w] = cols[first * W + w]
    if k == 1:
        pop = 0
        for w in range(W):
            pop += popcount64(buf[w])
        val = N - 2 * pop
        out_sumsq[0] = val * val
        out_max[0] = _abs64(val)
        return
    # levels 1..k-2 fix prefix indices; the last index runs in the tight loop
    lvl = 1
    idx[0] = first
    idx[1] = first
    while True:
        if lvl == k - 1:
            pre = buf + (lvl - 1) * W
            for j in range(idx[lvl - 1] + 1, q):
                c = cols + j * W
                pop = 0
                for w in range(W):
                    pop += popcount64(pre[w] ^ c[w])
                val = N - 2 * pop
                sumsq += val * val
                val = _abs64(val)
                if val > mx:
                    mx = val
            lvl -= 1
            if lvl == 0:
                break
            continue
        idx[lvl] += 1
        if idx[lvl] > q - (k - lvl):
            lvl -= 1
            if lvl == 0:
                break
            continue
        c = cols + idx[lvl] * W
        for w in range(W):
            buf[lvl * W + w] = buf[(lvl - 1) * W + w] ^ c[w]
        lvl += 1
        idx[lvl] = idx[lvl - 1]
    out_sumsq[0] = sumsq
    out_max[0] = mx


def subset_stats_by_first(const uint64_t[:, ::1] words, int64_t n_runs, int k, int threads=1,
                          Py_ssize_t first_only=-1):
    """Per smallest index i: (sum of squared Schur sums, max |Schur sum|) over k-subsets.

    With ``first_only >= 0`` only that smallest index is evaluated.
    """
    cdef Py_ssize_t q = words.shape[0], W = words.shape[1]
    cdef Py_ssize_t i, top, lo = 0
    cdef uint64_t* buf
    cdef Py_ssize_t* idx
    sums = np.zeros(q, dtype=np.int64)
    maxs = np.zeros(q, dtype=np.int64)
    cdef int64_t[::1] sv = sums
    cdef int64_t[::1] mv = maxs
    if k < 1 or k > q:
        return sums, maxs
    top = q - k + 1
    if first_only >= 0:
        if first_only >= top:
            return sums, maxs
        lo = first_only
        top = first_only + 1
    if threads < 1:
        threads = 1
    with nogil, parallel(num_threads=threads):
        buf = <uint64_t*> malloc(k * W * sizeof(uint64_t))
        idx = <Py_ssize_t*> malloc((k + 1) * sizeof(Py_ssize_t))
        for i in prange(lo, top, schedule="dynamic"):
            _walk(&words[0, 0], q, W, n_runs, k, i, buf, idx, &sv[i], &mv[i])
        free(buf)
        free(idx)
    return sums, maxs


def first_uncovered(const uint64_t[:, ::1] words, const uint64_t[::1] valid, int p):
    """First p-subset (as a tuple) whose projection misses a sign pattern, else None."""
    cdef Py_ssize_t q = words.shape[0], W = words.shape[1]
    cdef Py_ssize_t w, j, m, lvl, npat, base, nb, t
    cdef uint64_t a, hit_a, hit_b
    cdef const uint64_t* c
    cdef bint ok
    if p < 1 or p > q:
        return None
    # after choosing l columns, 2**l pattern masks of W words live at off[l]
    cdef Py_ssize_t* off = <Py_ssize_t*> malloc((p + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* idx = <Py_ssize_t*> malloc((p + 1) * sizeof(Py_ssize_t))
    off[0] = 0
    for lvl in range(1, p + 1):
        off[lvl] = off[lvl - 1] + (<Py_ssize_t>1 << (lvl - 1)) * W
    cdef uint64_t* pat = <uint64_t*> malloc(off[p] * sizeof(uint64_t))
    try:
        for w in range(W):
            pat[w] = valid[w]
        idx[0] = -1
        idx[1] = -1
        lvl = 1
        while True:
            if lvl == p:
                npat = <Py_ssize_t>1 << (p - 1)
                base = off[p - 1]
                for j in range(idx[p - 1] + 1, q):
                    c = &words[j, 0]
                    ok = True
                    for m in range(npat):
                        hit_a = 0
                        hit_b = 0
                        for w in range(W):
                            a = pat[base + m * W + w]
                            hit_a |= a & c[w]
                            hit_b |= a & ~c[w]
                        if hit_a == 0 or hit_b == 0:
                            ok = False
                            break
                    if not ok:
                        found = [idx[t] for t in range(1, p)]
                        found.append(j)
                        return tuple(found)
                lvl -= 1
                if lvl == 0:
                    break
                continue
            idx[lvl] += 1
            if idx[lvl] > q - 1 - (p - lvl):
                lvl -= 1
                if lvl == 0:
                    break
                continue
            c = &words[idx[lvl], 0]
            npat = <Py_ssize_t>1 << (lvl - 1)
            base = off[lvl - 1]
            nb = off[lvl]
            for m in range(npat):
                for w in range(W):
                    a = pat[base + m * W + w]
                    pat[nb + (2 * m) * W + w] = a & c[w]
                    pat[nb + (2 * m + 1) * W + w] = a & ~c[w]
            lvl += 1
            idx[lvl] = idx[lvl - 1]
        return None
    finally:
        free(pat)
        free(off)
        free(idx)
