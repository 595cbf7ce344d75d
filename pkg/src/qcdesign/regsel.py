"""Choosing the binary matrix B behind an even complement, and the end-to-end MA pipeline.

An even complement of size v - s is, after row operations, the set of columns
(1, 0, ..., 0)' and (1, 2b)' for the columns b of an (n-1)-row binary matrix
B.  The QC design's aberration is then governed by the regular design d
that B generates: pair sums A_{2r-1}(d) + A_{2r}(d) for an even number of
factors, the combinations E_{2r}(d) for an odd number.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .binmat import BinaryMatrix, gamma, label, parity, parse_b_notation
from .errors import InvalidSelectionError, OutOfRegimeError
from .gray import GeneratorMatrix, SignMatrix, construct_even, construct_odd, halve
from .wlp import WordLengthPattern, wlp_distance
from .z4 import ComplementSet, Z4Vector, complement, omega_size, reference_set

Parity = Literal["even", "odd"]

__all__ = [
    "BinaryMatrix",
    "parse_b_notation",
    "regular_design",
    "regular_wlp",
    "RegularWLP",
    "pair_sum_key",
    "odd_count_term",
    "odd_count_key",
    "foldover",
    "fold_wlp_identities",
    "enumerate_b",
    "select_b",
    "sbar_from_b",
    "ma_design",
    "optimal_b_table",
    "q_range",
]


@dataclass(frozen=True)
class RegularWLP:
    """Word counts A_0..A_m of a regular design (A_0 = 1)."""

    counts: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.counts) - 1

    def A(self, k: int) -> int:
        return self.counts[k] if 0 <= k <= self.m else 0

    def pattern(self) -> tuple[int, ...]:
        """(A_3, ..., A_m), the form regular-design tables print."""
        return self.counts[3:]


def regular_design(B: BinaryMatrix) -> SignMatrix:
    """``2**rows`` runs, entry (x, j) = (-1)**(x'b_j)."""
    xs = gamma(B.rows)
    out = np.array(
        [[1 - 2 * parity(x & b) for b in B.columns] for x in xs], dtype=np.int8
    ).reshape(len(xs), B.m)
    return SignMatrix(out, None, "regular")


def _kernel_basis(B: BinaryMatrix) -> list[int]:
    """Basis (as column-subset masks) of the subsets of columns summing to zero mod 2."""
    # Gaussian elimination keeping track of which columns were combined
    pivots: dict[int, tuple[int, int]] = {}
    basis = []
    for j, c in enumerate(B.columns):
        combo = 1 << j
        while c:
            top = c.bit_length() - 1
            if top not in pivots:
                pivots[top] = (c, combo)
                break
            pc, pcombo = pivots[top]
            c ^= pc
            combo ^= pcombo
        if c == 0:
            basis.append(combo)
    return basis


def regular_wlp(B: BinaryMatrix) -> RegularWLP:
    """Count the words of d: nonempty column subsets summing to zero, by length."""
    counts = [0] * (B.m + 1)
    basis = _kernel_basis(B)
    word = 0
    counts[0] = 1
    # walk the span in Gray-code order
    for i in range(1, 1 << len(basis)):
        word ^= basis[(i & -i).bit_length() - 1]
        counts[word.bit_count()] += 1
    return RegularWLP(tuple(counts))


def pair_sum_key(B: BinaryMatrix, wlp: Optional[RegularWLP] = None) -> tuple[int, ...]:
    """(A_3 + A_4, A_5 + A_6, ...) while 2r - 1 <= m."""
    wlp = wlp or regular_wlp(B)
    out = []
    r = 2
    while 2 * r - 1 <= B.m:
        out.append(wlp.A(2 * r - 1) + wlp.A(2 * r))
        r += 1
    return tuple(out)


def odd_count_term(B: BinaryMatrix, r: int, wlp: Optional[RegularWLP] = None) -> int:
    """sum_k C(m - k, floor(r - k/2)) 2**k A_k(d), k = 0..2r, with m = v - s - 1."""
    if r < 2:
        raise ValueError("r must be at least 2")
    wlp = wlp or regular_wlp(B)
    m = B.m
    total = 0
    for k in range(0, min(2 * r, m) + 1):
        a = wlp.A(k)
        if a:
            total += math.comb(m - k, (2 * r - k) // 2) * 2**k * a
    return total


def odd_count_key(B: BinaryMatrix, wlp: Optional[RegularWLP] = None) -> tuple[int, ...]:
    """(E_4, E_6, ..., E_{2(m+1)}); beyond that every term vanishes."""
    wlp = wlp or regular_wlp(B)
    return tuple(odd_count_term(B, r, wlp) for r in range(2, max(2, B.m + 1) + 1))


def foldover(d: SignMatrix) -> SignMatrix:
    """Full foldover: runs (x, +1) and (-x, -1), one extra factor."""
    e = d.entries
    top = np.hstack([e, np.ones((e.shape[0], 1), dtype=np.int8)])
    return SignMatrix(np.vstack([top, -top]), None, "foldover")


def doubled(B: BinaryMatrix) -> SignMatrix:
    """Regular design generated by [B B] (every column twice)."""
    d = regular_design(B)
    return SignMatrix(np.hstack([d.entries, d.entries]), None, "regular")


def fold_wlp_identities(B: BinaryMatrix) -> dict[str, bool]:
    """Check the foldover identities linking d, its foldover and E_2r.

    Word counts on the right-hand sides come from :func:`regular_wlp`; the
    foldover WLPs on the left come from the designs themselves.
    """
    rw = regular_wlp(B)
    m = B.m
    folded = wlp_distance(foldover(regular_design(B)))
    folded0 = wlp_distance(foldover(doubled(B)))
    q1, q0 = m + 1, 2 * m + 1
    return {
        "fold_odd_zero": all(folded.numerators[k] == 0 for k in range(1, q1 + 1, 2)),
        "fold_pair_sums": all(
            folded.A(2 * r) == rw.A(2 * r - 1) + rw.A(2 * r) for r in range(1, q1 // 2 + 1) if 2 * r >= 4
        ),
        "fold0_odd_zero": all(folded0.numerators[k] == 0 for k in range(1, q0 + 1, 2)),
        "fold0_A2": folded0.A(2) == m,
        "fold0_E2r": all(folded0.A(2 * r) == odd_count_term(B, r, rw) for r in range(2, q0 // 2 + 1)),
    }


def enumerate_b(n: int, m: int) -> list[BinaryMatrix]:
    rows = n - 1
    top = (1 << rows) - 1
    if not 1 <= m <= top:
        raise InvalidSelectionError(f"m must lie in 1..{top} for n={n}")
    return [BinaryMatrix(rows, cols) for cols in itertools.combinations(range(1, top + 1), m)]


@dataclass(frozen=True)
class BSelection:
    matrix: BinaryMatrix
    key: tuple[int, ...]
    parity: str
    n_candidates: int
    n_optimal: int


def criterion_key(B: BinaryMatrix, parity_: Parity) -> tuple[int, ...]:
    wlp = regular_wlp(B)
    return pair_sum_key(B, wlp) if parity_ == "even" else odd_count_key(B, wlp)


def select_b(n: int, deficiency: int, parity_: Parity = "even") -> BSelection:
    """Lexicographically minimal criterion over all distinct-column B; ties go to the first candidate."""
    cap = 2 ** (n - 1)
    if not 2 <= deficiency <= cap:
        raise OutOfRegimeError(f"deficiency must lie in 2..{cap} for n={n}, got {deficiency}")
    if parity_ not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity_!r}")
    best, best_key, ties, count = None, None, 0, 0
    for B in enumerate_b(n, deficiency - 1):
        count += 1
        key = criterion_key(B, parity_)
        if best_key is None or key < best_key:
            best, best_key, ties = B, key, 1
        elif key == best_key:
            ties += 1
    return BSelection(best, best_key, parity_, count, ties)


def sbar_from_b(B: Optional[BinaryMatrix], n: int, reference_kind="full", odd: bool = False) -> ComplementSet:
    """Columns (1, 0, ..., 0)' then (1, 2b_j)' for each column of B."""
    lead = Z4Vector((1,) + (0,) * (n - 1))
    vecs = [lead]
    if B is not None:
        if B.rows != n - 1:
            raise InvalidSelectionError(f"B must have {n - 1} rows, has {B.rows}")
        for b in B.columns:
            vecs.append(Z4Vector((1,) + tuple(2 * (b >> h & 1) for h in range(n - 1))))
    return ComplementSet(n, tuple(vecs), reference_kind, lead if odd else None)


def _regime(n: int, runs: int):
    if runs == 4**n:
        return "full", False
    if runs == 4**n // 2:
        return "last_even", True
    raise OutOfRegimeError(f"runs must be {4**n} or {4**n // 2} for n={n}, got {runs}")


def q_range(n: int, runs: int) -> tuple[int, int]:
    """Smallest and largest factor count covered for this run size."""
    kind, _ = _regime(n, runs)
    v = omega_size(n, kind)
    cap = 2 ** (n - 1)
    lo = max(2 * (v - cap), 2)
    hi = 2 * v
    return lo, hi


@dataclass(frozen=True, eq=False)
class MADesign:
    n: int
    runs: int
    factors: int
    parity: str
    halved: bool
    sbar: ComplementSet
    generator: GeneratorMatrix
    design: SignMatrix
    wlp: WordLengthPattern
    selection: Optional[BSelection]

    @property
    def deficiency(self) -> int:
        return len(self.sbar)

    @property
    def b(self) -> Optional[BinaryMatrix]:
        return self.selection.matrix if self.selection else None


def plan(n: int, runs: int, q: int):
    """Resolve (runs, q) to (reference kind, halved, parity, s, deficiency) or raise."""
    if n < 2:
        raise OutOfRegimeError(f"n must be >= 2, got {n}")
    kind, halved = _regime(n, runs)
    v = omega_size(n, kind)
    cap = 2 ** (n - 1)
    lo, hi = q_range(n, runs)
    parity_ = "even" if q % 2 == 0 else "odd"
    s = q // 2
    deficiency = v - s
    ok = (0 <= deficiency <= cap) and s >= 1
    if parity_ == "odd":
        ok = ok and deficiency >= 1
    if not ok:
        raise OutOfRegimeError(
            f"q={q} is outside the covered range {lo}..{hi} for {runs} runs at n={n}"
        )
    return kind, halved, parity_, s, deficiency


def ma_design(n: int, runs: int, q: int) -> MADesign:
    kind, halved, parity_, s, deficiency = plan(n, runs, q)
    odd = parity_ == "odd"
    ref = reference_set(n, kind)
    selection = None
    if deficiency == 0:
        sbar = ComplementSet(n, (), kind)
    elif deficiency == 1:
        sbar = sbar_from_b(None, n, kind, odd)
    else:
        selection = select_b(n, deficiency, parity_)
        sbar = sbar_from_b(selection.matrix, n, kind, odd)
    S = complement(sbar.vectors, ref).vectors
    if odd:
        G = GeneratorMatrix(n, tuple(S) + (sbar.odd_role,))
        D = construct_odd(G)
    else:
        G = GeneratorMatrix(n, tuple(S))
        D = construct_even(G)
    if halved:
        D = halve(D, G)
    if D.factors != q:
        raise AssertionError(f"built {D.factors} factors, wanted {q}")
    return MADesign(n, runs, q, parity_, halved, sbar, G, D, wlp_distance(D), selection)


def optimal_b_table(n: int, parity_: Parity = "even") -> list[tuple[int, BSelection]]:
    if n not in (3, 4, 5):
        raise OutOfRegimeError(f"table1 covers n = 3, 4, 5 only, got {n}")
    return [(dfc, select_b(n, dfc, parity_)) for dfc in range(2, 2 ** (n - 1) + 1)]
