"""Complementary-set quantities: run sums of the unused columns and the cubic score bound.

All sums over the run index set are evaluated with the integer lookup
``i**x + i**(-x) -> (2, 0, -2, 0)[x % 4]``; nothing here uses complex numbers.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .binmat import BinaryMatrix, gamma, parity
from .errors import InvalidSelectionError
from .gray import GRAY_SIGN, TRACE, GeneratorMatrix, construct_even, construct_odd
from .wlp import row_sums
from .z4 import ComplementSet, Z4Vector, as_vector, reference_set, run_index_array


@dataclass(frozen=True, eq=False)
class ComplementProfile:
    sbar: ComplementSet
    odd: bool
    run_sums: np.ndarray  # indexed like run_index_array(n)
    all_even: np.ndarray  # 1 where every digit of u is even
    even_classes: tuple[tuple[Z4Vector, ...], ...]

    @property
    def n(self) -> int:
        return self.sbar.n

    def run_sum_table(self) -> dict[str, int]:
        U = run_index_array(self.n)
        return {"".join(map(str, u)): int(v) for u, v in zip(U, self.run_sums)}


def all_even_flags(n: int) -> np.ndarray:
    U = run_index_array(n)
    return np.all(U % 2 == 0, axis=1).astype(np.int64)


def _vectors_array(vectors: Sequence[Z4Vector]) -> np.ndarray:
    return np.array([v.digits for v in vectors], dtype=np.int64).reshape(len(vectors), -1).T


def complement_run_sums(sbar: ComplementSet, odd: Optional[bool] = None) -> np.ndarray:
    """Run sums of the design built from the complement, for every run index u.

    In the odd case the designated member contributes gray_sign(u'g) alone.
    """
    if odd is None:
        odd = sbar.odd_role is not None
    n = sbar.n
    U = run_index_array(n)
    if not sbar.vectors:
        if odd:
            raise InvalidSelectionError("odd case needs a nonempty complement")
        return np.zeros(len(U), dtype=np.int64)
    if odd and sbar.odd_role is None:
        raise InvalidSelectionError("odd case needs a designated column in the complement")
    rest = [g for g in sbar.vectors if not (odd and g == sbar.odd_role)]
    out = np.zeros(len(U), dtype=np.int64)
    if rest:
        out += TRACE[(U @ _vectors_array(rest)) % 4].sum(axis=1)
    if odd:
        role = np.array(sbar.odd_role.digits, dtype=np.int64)
        out += GRAY_SIGN[(U @ role) % 4].astype(np.int64)
    return out


def even_classes(sbar) -> tuple[tuple[Z4Vector, ...], ...]:
    """Partition so that two members share a class iff their sum has only even digits.

    That relation is congruence mod 2, so members are grouped by their parity pattern.
    """
    vecs = list(sbar.vectors if isinstance(sbar, ComplementSet) else sbar)
    groups: dict[tuple[int, ...], list[Z4Vector]] = {}
    for g in vecs:
        groups.setdefault(tuple(d % 2 for d in g.digits), []).append(g)
    return tuple(tuple(v) for v in groups.values())


def profile(sbar: ComplementSet, odd: Optional[bool] = None) -> ComplementProfile:
    if odd is None:
        odd = sbar.odd_role is not None
    return ComplementProfile(
        sbar=sbar,
        odd=odd,
        run_sums=complement_run_sums(sbar, odd),
        all_even=all_even_flags(sbar.n),
        even_classes=even_classes(sbar) if sbar.vectors else (),
    )


def _exempt_mask(n: int, kind: str) -> np.ndarray:
    U = run_index_array(n)
    if kind == "last_even":
        # the half-run setting: runs (0,...,0,0) and (0,...,0,2) satisfy the null-run formulas instead
        return np.all(U[:, :-1] == 0, axis=1) & (U[:, -1] % 2 == 0)
    return np.all(U == 0, axis=1)


def run_sum_identity_holds(S: Sequence, sbar: ComplementSet) -> bool:
    """Run sums of the design from S equal -(2**n e_u + c_u), where e_u flags all-even u and c_u is the complement run sum, off the null runs.

    In the odd case the design is built from S plus the designated column,
    with that column's second Gray column removed.
    """
    n = sbar.n
    S = [as_vector(g) for g in S]
    odd = sbar.odd_role is not None
    ref = reference_set(n, sbar.reference_kind)
    if set(S) | set(sbar.vectors) != set(ref.vectors) or set(S) & set(sbar.vectors):
        raise InvalidSelectionError("S and its complement must split the reference set")
    if odd:
        sigma = np.array(row_sums(construct_odd(GeneratorMatrix.of(S + [sbar.odd_role]))))
    elif S:
        sigma = np.array(row_sums(construct_even(GeneratorMatrix.of(S))))
    else:
        sigma = np.zeros(4**n, dtype=np.int64)
    sb = complement_run_sums(sbar, odd)
    expected = -((2**n) * all_even_flags(n) + sb)
    keep = ~_exempt_mask(n, sbar.reference_kind)
    return bool(np.array_equal(sigma[keep], expected[keep]))


def complement_moments(prof: ComplementProfile, k_max: int) -> dict[int, int]:
    """sum_u (2**n e_u + c_u)**k for k = 3..k_max, as Python integers."""
    base = [int(x) for x in (2**prof.n) * prof.all_even + prof.run_sums]
    return {k: sum(b**k for b in base) for k in range(3, k_max + 1)}


def cubic_score(prof: ComplementProfile) -> int:
    sb = [int(x) for x in prof.run_sums]
    even_part = sum(x * x for x, d in zip(sb, prof.all_even) if d)
    return 3 * 2**prof.n * even_part + sum(x**3 for x in sb)


def cubic_score_bound(n: int, deficiency: int, odd: bool = False) -> int:
    if deficiency < 0 or (odd and deficiency < 1):
        raise ValueError("deficiency must be >= 0 (>= 1 in the odd case)")
    if odd:
        return 3 * 2 ** (2 * n) * (2 * deficiency - 1) ** 2
    return 3 * 2 ** (2 * n + 2) * deficiency**2


def null_indicator(g) -> int:
    return int(as_vector(g).is_null())


def null_combination_count(gj, gk, gh) -> int:
    gj, gk, gh = as_vector(gj), as_vector(gk), as_vector(gh)
    s, d = gj + gk, gj - gk
    return null_indicator(s + gh) + null_indicator(s - gh) + null_indicator(d + gh) + null_indicator(d - gh)


def null_combination_total(vectors: Sequence[Z4Vector]) -> int:
    """Sum of null_combination_count over all ordered triples (j, k, h), repeats allowed."""
    vecs = [as_vector(v) for v in vectors]
    return sum(null_combination_count(a, b, c) for a, b, c in itertools.product(vecs, repeat=3))


def binary_row_sums(B: BinaryMatrix) -> list[int]:
    """sum_j (-1)**(x'b_j) for every binary x in canonical order."""
    return [sum(1 - 2 * parity(x & b) for b in B.columns) for x in gamma(B.rows)]


def profile_json(prof: ComplementProfile) -> dict:
    deficiency = len(prof.sbar)
    f3 = cubic_score(prof)
    bound = cubic_score_bound(prof.n, deficiency, prof.odd) if (deficiency or not prof.odd) else None
    return {
        "n": prof.n,
        "reference": prof.sbar.reference_kind,
        "odd": prof.odd,
        "complement": prof.sbar.digit_strings(),
        "odd_role": str(prof.sbar.odd_role) if prof.sbar.odd_role is not None else None,
        "run_sums": prof.run_sum_table(),
        "even_classes": [[str(v) for v in c] for c in prof.even_classes],
        "class_sizes": [len(c) for c in prof.even_classes],
        "cubic_score": f3,
        "bound": bound,
        "gap": None if bound is None else bound - f3,
    }


def dumps_profile(prof: ComplementProfile) -> str:
    return json.dumps(profile_json(prof), indent=2, sort_keys=True)
