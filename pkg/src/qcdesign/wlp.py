"""Exact aliasing indices, wordlength patterns, resolution, projectivity and moments.

Every A_k is held as an integer numerator over the common denominator N**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import ConsistencyError, NotGroupInvariantError
from .gray import SignMatrix

UNBOUNDED = math.inf

# beyond this many factors the direct route stops at k = 5 by default
DIRECT_FULL_Q = 64
DIRECT_CAP_K = 5


@dataclass(frozen=True)
class WordLengthPattern:
    runs: int
    factors: int
    numerators: tuple[int, ...]  # index k -> N**2 * A_k, starting at k = 0

    @property
    def denominator(self) -> int:
        return self.runs * self.runs

    @property
    def k_max(self) -> int:
        return len(self.numerators) - 1

    def A(self, k: int) -> Fraction:
        if k > self.k_max:
            raise IndexError(f"A_{k} was not computed (k_max = {self.k_max})")
        return Fraction(self.numerators[k], self.denominator)

    def fractions(self, start: int = 1) -> list[Fraction]:
        return [self.A(k) for k in range(start, self.k_max + 1)]

    def truncated(self, k_max: int) -> "WordLengthPattern":
        return WordLengthPattern(self.runs, self.factors, self.numerators[: k_max + 1])

    def to_json(self) -> dict:
        return {
            "runs": self.runs,
            "factors": self.factors,
            "A": [[f.numerator, f.denominator] for f in self.fractions(1)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WordLengthPattern":
        N = int(data["runs"])
        den = N * N
        nums = [den]
        for num, d in data["A"]:
            f = Fraction(int(num), int(d))
            if (f * den).denominator != 1:
                raise ValueError(f"A value {f} is not a multiple of 1/N^2")
            nums.append(int(f * den))
        return cls(N, int(data["factors"]), tuple(nums))


@dataclass(frozen=True)
class MomentVector:
    """Power moments of run sums (``m``) and, when computed, of run scalar products (``M``)."""

    m: dict
    M: Optional[dict] = None


def _subset_columns(D: SignMatrix, H: Sequence[int]) -> list[int]:
    H = list(H)
    if not H:
        raise ValueError("column subset must be nonempty")
    if any(h < 0 or h >= D.factors for h in H) or len(set(H)) != len(H):
        raise IndexError(f"bad column subset {H} for a {D.factors}-factor design")
    return H


def aliasing_index(D: SignMatrix, H: Sequence[int]) -> Fraction:
    H = _subset_columns(D, H)
    total = int(np.prod(D.entries[:, H].astype(np.int64), axis=1).sum())
    return Fraction(abs(total), D.runs)


def _default_direct_kmax(q: int) -> int:
    return q if q <= DIRECT_FULL_Q else min(q, DIRECT_CAP_K)


def wlp_direct(D: SignMatrix, k_max: Optional[int] = None, backend=None) -> WordLengthPattern:
    """Enumerate every column subset of size k <= k_max."""
    q = D.factors
    if k_max is None:
        k_max = _default_direct_kmax(q)
    if not 1 <= k_max <= q:
        raise ValueError(f"k_max must lie in 1..{q}, got {k_max}")
    words, _ = D.packed
    N = D.runs
    nums = [N * N]
    for k in range(1, k_max + 1):
        sumsq, _ = _kernels.subset_stats(words, N, k, backend=backend)
        nums.append(sumsq)
    return WordLengthPattern(N, q, tuple(nums))


def rho_max(D: SignMatrix, k: int, backend=None) -> Fraction:
    words, _ = D.packed
    _, mx = _kernels.subset_stats(words, D.runs, k, backend=backend)
    return Fraction(mx, D.runs)


def row_sums(D: SignMatrix) -> list[int]:
    return [int(x) for x in D.entries.sum(axis=1, dtype=np.int64)]


@lru_cache(maxsize=256)
def krawtchouk_row(x: int, q: int) -> tuple[int, ...]:
    """K_k(x; q) for k = 0..q: coefficients of (1 - z)**x (1 + z)**(q - x)."""
    K = [1, q - 2 * x]
    for k in range(1, q):
        nxt, rem = divmod((q - 2 * x) * K[k] - (q - k + 1) * K[k - 1], k + 1)
        assert rem == 0
        K.append(nxt)
    return tuple(K[: q + 1])


def distance_profile_check(D: SignMatrix, sample: Optional[int] = None) -> bool:
    """True when every run sees the same multiset of Hamming distances as run 0."""
    E = D.entries.astype(np.float64)
    N = D.runs
    rows = np.arange(N)
    if sample is not None and sample < N:
        rng = np.random.default_rng(0)
        rows = np.unique(np.concatenate([[0], rng.choice(N, size=sample, replace=False)]))
    gram = E[rows] @ E.T
    ref = np.sort(E[0] @ E.T)
    return bool(np.all(np.sort(gram, axis=1) == ref))


def wlp_from_weights(weights: Sequence[int], q: int) -> WordLengthPattern:
    """Full WLP of a distance-invariant design from each run's Hamming distance to run 0."""
    N = len(weights)
    counts: dict[int, int] = {}
    for w in weights:
        counts[int(w)] = counts.get(int(w), 0) + 1
    totals = [0] * (q + 1)
    for w, c in counts.items():
        K = krawtchouk_row(w, q)
        for k in range(q + 1):
            totals[k] += c * K[k]
    # A_k = (1/N) sum_u K_k(w_u), stored over N**2
    return WordLengthPattern(N, q, tuple(N * t for t in totals))


def wlp_distance(D: SignMatrix, check: Union[bool, int] = True) -> WordLengthPattern:
    """Full WLP (k = 0..q) through the Krawtchouk transform of the run weights.

    Valid when every run has the same distance distribution to the others,
    which holds for designs obeying the group invariance of Gray-map images.
    ``check=True`` verifies that exhaustively (sampled above 2048 runs); an
    integer sets the sample size; ``False`` skips it.
    """
    if check is not False:
        sample = None
        if check is not True:
            sample = int(check)
        elif D.runs > 2048:
            sample = 256
        if not distance_profile_check(D, sample):
            raise NotGroupInvariantError("runs do not share one distance distribution; use wlp_direct")
    ref = D.entries[0]
    weights = (D.entries != ref).sum(axis=1)
    wlp = wlp_from_weights(weights.tolist(), D.factors)
    if wlp.numerators[0] != D.runs * D.runs:
        raise ConsistencyError("A_0 of the distance route is not 1")
    return wlp


def resolution(D: SignMatrix, backend=None) -> Union[Fraction, float]:
    """r + 1 - rho_{r,max} for the smallest r with any aliasing; ``UNBOUNDED`` if none."""
    words, _ = D.packed
    for r in range(1, D.factors + 1):
        _, mx = _kernels.subset_stats(words, D.runs, r, backend=backend)
        if mx > 0:
            return r + 1 - Fraction(mx, D.runs)
    return UNBOUNDED


def projectivity_at_least(D: SignMatrix, p: int, backend=None) -> bool:
    if not 1 <= p <= D.factors:
        raise ValueError(f"p must lie in 1..{D.factors}")
    words, valid = D.packed
    return _kernels.first_uncovered(words, valid, p, backend=backend) is None


def is_group_invariant(D: SignMatrix) -> bool:
    return bool(np.all(D.entries[0] == 1)) and distance_profile_check(D, 256 if D.runs > 2048 else None)


def moments(D: SignMatrix, k_max: int, naive_limit: int = 256) -> MomentVector:
    """m_k = sum of run-sum powers; M_k = sum over run pairs of scalar-product powers.

    ``M`` is computed by brute force only when N <= ``naive_limit``.  For
    group-invariant designs with an all-ones first run, M_k = N m_k is asserted.
    """
    if k_max < 3:
        raise ValueError("k_max must be at least 3")
    sums = row_sums(D)
    m = {k: sum(s**k for s in sums) for k in range(3, k_max + 1)}
    M = None
    if D.runs <= naive_limit:
        E = D.entries.astype(np.int64)
        gram = [int(x) for x in (E @ E.T).ravel()]
        M = {k: sum(g**k for g in gram) for k in range(3, k_max + 1)}
        if is_group_invariant(D):
            for k in range(3, k_max + 1):
                if M[k] != D.runs * m[k]:
                    raise ConsistencyError(f"M_{k} != N m_{k} for a group-invariant design")
    return MomentVector(m, M)
