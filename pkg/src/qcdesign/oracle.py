"""Brute-force ground truth for small n.

Nothing here relies on the complementary-set theory.  The MA search tries
every complement of the right size, scores each design by its full
wordlength pattern and keeps the lexicographic minima.  Word counts come
from an explicit binomial-sum Krawtchouk transform, independent of the
recurrence used in :mod:`qcdesign.wlp`, and sampled designs are rebuilt and
checked against both library routes.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import compset, regsel
from .binmat import BinaryMatrix
from .errors import (
    ConsistencyError,
    InfeasibleError,
    OutOfRegimeError,
    SearchSpaceTooLargeError,
)
from .gray import GRAY_SIGN, TRACE, GeneratorMatrix, SignMatrix, construct_even, construct_odd, halve
from .wlp import WordLengthPattern, moments, row_sums, wlp_direct, wlp_distance
from .z4 import (
    ComplementSet,
    Z4Vector,
    build_even_set,
    complement,
    is_even_set,
    reference_set,
    run_index_array,
)

SEARCH_CAP = 10**6
_CHUNK = 4096


def naive_wlp(D: SignMatrix, k_max: Optional[int] = None) -> WordLengthPattern:
    """Sum of squared column-product means over every subset, one subset at a time."""
    q, N = D.factors, D.runs
    k_max = q if k_max is None else k_max
    E = D.entries.astype(np.int64)
    nums = [N * N]
    for k in range(1, k_max + 1):
        total = 0
        for H in itertools.combinations(range(q), k):
            s = int(np.prod(E[:, H], axis=1).sum())
            total += s * s
        nums.append(total)
    return WordLengthPattern(N, q, tuple(nums))


def compare_wlp(a: WordLengthPattern, b: WordLengthPattern) -> int:
    """-1, 0 or 1 as ``a`` has less, equal or more aberration than ``b`` (from A_3 on)."""
    if a.factors != b.factors or a.k_max != b.k_max:
        raise ValueError(
            f"cannot compare patterns of different length ({a.factors}/{a.k_max} vs {b.factors}/{b.k_max})"
        )
    for k in range(3, a.k_max + 1):
        x, y = a.A(k), b.A(k)
        if x != y:
            return -1 if x < y else 1
    return 0


def _krawtchouk_explicit(w: int, q: int) -> list[int]:
    return [
        sum((-1) ** j * math.comb(w, j) * math.comb(q - w, k - j) for j in range(0, min(w, k) + 1))
        for k in range(q + 1)
    ]


def _wlp_from_histogram(hist: dict[int, int], q: int, N: int) -> WordLengthPattern:
    totals = [0] * (q + 1)
    for w, c in hist.items():
        for k, K in enumerate(_krawtchouk_explicit(w, q)):
            totals[k] += c * K
    return WordLengthPattern(N, q, tuple(N * t for t in totals))


@dataclass
class SearchReport:
    n: int
    q: int
    runs: int
    parity: str
    reference_kind: str
    deficiency: int
    best_wlp: WordLengthPattern
    optimal_complements: list = field(default_factory=list)
    candidates_examined: int = 0
    distinct_patterns: int = 0

    @property
    def even_optimum(self) -> bool:
        """Some even complement attains the optimum."""
        return any(is_even_set(c) for c in self.optimal_complements)

    def to_json(self) -> dict:
        return {
            "parameters": {
                "n": self.n,
                "q": self.q,
                "runs": self.runs,
                "parity": self.parity,
                "reference": self.reference_kind,
                "deficiency": self.deficiency,
            },
            "best_wlp": self.best_wlp.to_json(),
            "optimal_complements": [
                {"complement": c.digit_strings(), "odd_role": None if c.odd_role is None else str(c.odd_role)}
                for c in self.optimal_complements
            ],
            "candidates_examined": self.candidates_examined,
            "distinct_patterns": self.distinct_patterns,
            "even_optimum": self.even_optimum,
        }


def _setting(n: int, runs: int):
    if runs == 4**n:
        return "full", False
    if runs == 4**n // 2:
        return "last_even", True
    raise OutOfRegimeError(f"runs must be {4**n} or {4**n // 2} for n={n}")


def build_from_complement(sbar: ComplementSet, halved: bool) -> SignMatrix:
    """The design whose unused columns are ``sbar`` (odd role kept as the single Gray column)."""
    ref = reference_set(sbar.n, sbar.reference_kind)
    S = list(complement(sbar.vectors, ref).vectors)
    if sbar.odd_role is not None:
        G = GeneratorMatrix(sbar.n, tuple(S) + (sbar.odd_role,))
        D = construct_odd(G)
    else:
        G = GeneratorMatrix(sbar.n, tuple(S))
        D = construct_even(G)
    return halve(D, G) if halved else D


def brute_force_ma(
    n: int,
    q: int,
    runs: int,
    cap: int = SEARCH_CAP,
    samples: int = 2,
    seed: int = 0,
) -> SearchReport:
    kind, halved = _setting(n, runs)
    ref = reference_set(n, kind).vectors
    v = len(ref)
    odd = q % 2 == 1
    s = q // 2
    deficiency = v - s
    if s < 1 or deficiency < 0 or (odd and deficiency < 1):
        raise OutOfRegimeError(f"q={q} cannot be built from {v} reference columns (q in 2..{2 * v})")
    space = math.comb(v, deficiency) * (deficiency if odd else 1)
    if space > cap:
        raise SearchSpaceTooLargeError(f"{space} candidates exceed the cap of {cap}")

    U = run_index_array(n)
    if halved:
        U = U[U[:, -1] < 2]
    N = len(U)
    Z = (U @ np.array([g.digits for g in ref], dtype=np.int64).T) % 4
    T = TRACE[Z]
    P = GRAY_SIGN[(-Z) % 4].astype(np.int64)
    total = T.sum(axis=1)

    groups: dict[bytes, list] = {}
    hist_of: dict[bytes, dict[int, int]] = {}
    examined = 0
    combos = itertools.combinations(range(v), deficiency)
    while True:
        chunk = list(itertools.islice(combos, _CHUNK))
        if not chunk:
            break
        idx = np.array(chunk, dtype=np.int64).reshape(len(chunk), deficiency)
        base = total[:, None] - T[:, idx].sum(axis=2)  # rows x candidates
        roles = range(deficiency) if odd else [None]
        for r in roles:
            sig = base + P[:, idx[:, r]] if r is not None else base
            weights = np.sort((q - sig) // 2, axis=0).T  # candidates x rows
            uniq, inv = np.unique(weights, axis=0, return_inverse=True)
            inv = inv.ravel()
            for ui, row in enumerate(uniq):
                key = row.tobytes()
                if key not in hist_of:
                    vals, cnts = np.unique(row, return_counts=True)
                    hist_of[key] = {int(a): int(b) for a, b in zip(vals, cnts)}
                    groups[key] = []
                members = np.nonzero(inv == ui)[0]
                groups[key].extend((chunk[i], r) for i in members)
            examined += len(chunk)

    patterns = {key: _wlp_from_histogram(h, q, N) for key, h in hist_of.items()}
    best_key = None
    for key, w in patterns.items():
        if best_key is None or compare_wlp(w, patterns[best_key]) < 0:
            best_key = key
    best = patterns[best_key]
    optimal_keys = [key for key, w in patterns.items() if compare_wlp(w, best) == 0]

    def as_set(combo, r):
        vecs = tuple(ref[i] for i in combo)
        return ComplementSet(n, vecs, kind, vecs[r] if r is not None else None)

    optimal = [as_set(c, r) for key in optimal_keys for c, r in groups[key]]

    # rebuild one design per pattern class and a few random candidates
    rng = random.Random(seed)
    for key in patterns:
        combo, r = groups[key][0]
        _cross_check(build_from_complement(as_set(combo, r), halved), patterns[key], direct=key == best_key)
    flat_keys = list(groups)
    for _ in range(samples):
        key = rng.choice(flat_keys)
        combo, r = rng.choice(groups[key])
        _cross_check(build_from_complement(as_set(combo, r), halved), patterns[key], direct=True)

    return SearchReport(
        n, q, N, "odd" if odd else "even", kind, deficiency, best, optimal, examined, len(patterns)
    )


def _cross_check(D: SignMatrix, expected: WordLengthPattern, direct: bool) -> None:
    if wlp_distance(D).numerators != expected.numerators:
        raise ConsistencyError("distance-route WLP disagrees with the oracle transform")
    if direct:
        k = min(D.factors, 4)
        if wlp_direct(D, k).numerators != expected.numerators[: k + 1]:
            raise ConsistencyError("direct WLP disagrees with the oracle transform")


# ---------------------------------------------------------------------------
# claim-by-claim verification


@dataclass
class Claim:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    n: int
    claims: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.claims.append(Claim(name, bool(passed), detail))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "all_passed": self.all_passed,
            "claims": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.claims],
        }


def _trace_table(n: int, ref: Sequence[Z4Vector]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    U = run_index_array(n)
    Z = (U @ np.array([g.digits for g in ref], dtype=np.int64).T) % 4
    even_rows = np.all(U % 2 == 0, axis=1)
    return TRACE[Z], GRAY_SIGN[Z].astype(np.int64), even_rows


def _cubic_score_columns(sb: np.ndarray, even_rows: np.ndarray, n: int) -> np.ndarray:
    """Cubic score for each column of a (runs x candidates) array of complement run sums."""
    return 3 * 2**n * (sb[even_rows] ** 2).sum(axis=0) + (sb**3).sum(axis=0)


def bound_suite(n: int, kind: str, max_size: Optional[int] = None, odd: bool = False) -> dict:
    """Exhaustive check of the cubic score bound with equality exactly on even complements.

    Returns per-size counts: candidates, violations, equality mismatches and
    strict non-even cases.
    """
    ref = reference_set(n, kind).vectors
    v = len(ref)
    T, Ppos, even_rows = _trace_table(n, ref)
    parity_cls = np.array([sum((d % 2) << i for i, d in enumerate(g.digits)) for g in ref])
    max_size = min(v, 2 ** (n - 1) + 2 if max_size is None else max_size)
    out = {}
    for size in range(1, max_size + 1):
        bound = compset.cubic_score_bound(n, size, odd)
        stats = {"candidates": 0, "violations": 0, "equality_mismatch": 0, "strict_non_even": 0, "even": 0}
        combos = itertools.combinations(range(v), size)
        while True:
            chunk = list(itertools.islice(combos, _CHUNK))
            if not chunk:
                break
            idx = np.array(chunk, dtype=np.int64)
            cls = parity_cls[idx]
            even = np.all(cls == cls[:, :1], axis=1)
            sb_all = T[:, idx].sum(axis=2)
            roles = range(size) if odd else [None]
            for r in roles:
                if r is None:
                    sb = sb_all
                else:
                    sb = sb_all - T[:, idx[:, r]] + Ppos[:, idx[:, r]]
                f = _cubic_score_columns(sb, even_rows, n)
                stats["candidates"] += len(chunk)
                stats["violations"] += int((f > bound).sum())
                stats["equality_mismatch"] += int(((f == bound) != even).sum())
                stats["strict_non_even"] += int(((f < bound) & ~even).sum())
                stats["even"] += int(even.sum())
        out[size] = stats
    return out


def _spot_check_cubic_score(n: int, kind: str, rng: random.Random, trials: int = 20) -> bool:
    """The vectorized cubic score above agrees with the profile-based one."""
    ref = reference_set(n, kind).vectors
    T, Ppos, even_rows = _trace_table(n, ref)
    for _ in range(trials):
        size = rng.randint(1, min(len(ref), 2 ** (n - 1) + 2))
        idx = sorted(rng.sample(range(len(ref)), size))
        r = rng.randrange(size)
        S = ComplementSet(n, tuple(ref[i] for i in idx), kind)
        sb = T[:, idx].sum(axis=1)
        if compset.cubic_score(compset.profile(S)) != int(_cubic_score_columns(sb[:, None], even_rows, n)[0]):
            return False
        sbo = sb - T[:, idx[r]] + Ppos[:, idx[r]]
        if compset.cubic_score(compset.profile(S.with_odd_role(ref[idx[r]]))) != int(
            _cubic_score_columns(sbo[:, None], even_rows, n)[0]
        ):
            return False
    return True


def _random_splits(n: int, kind: str, count: int, rng: random.Random):
    ref = reference_set(n, kind).vectors
    for _ in range(count):
        size = rng.randint(1, len(ref) - 1)
        picked = sorted(rng.sample(range(len(ref)), size))
        sbar = tuple(ref[i] for i in picked)
        S = [g for i, g in enumerate(ref) if i not in set(picked)]
        role = sbar[rng.randrange(size)] if rng.random() < 0.5 else None
        yield S, ComplementSet(n, sbar, kind, role)


def _all_splits(n: int, kind: str):
    ref = reference_set(n, kind).vectors
    for size in range(1, len(ref)):
        for picked in itertools.combinations(range(len(ref)), size):
            sbar = tuple(ref[i] for i in picked)
            S = [g for i, g in enumerate(ref) if i not in picked]
            yield S, ComplementSet(n, sbar, kind)
            for g in sbar:
                yield S, ComplementSet(n, sbar, kind, g)


def run_sum_identity_suite(n: int, kind: str, random_count: Optional[int] = None, seed: int = 0) -> tuple[int, int]:
    """(checked, failures); exhaustive unless ``random_count`` is given."""
    splits = (
        _all_splits(n, kind)
        if random_count is None
        else _random_splits(n, kind, random_count, random.Random(seed))
    )
    checked = bad = 0
    for S, sbar in splits:
        checked += 1
        if not compset.run_sum_identity_holds(S, sbar):
            bad += 1
    return checked, bad


def oracle_equivalence(n: int, cap: int = SEARCH_CAP) -> list[dict]:
    """Pipeline WLP versus exhaustive optimum for every regime-valid case at this n."""
    rows = []
    for kind, runs in (("full", 4**n), ("last_even", 4**n // 2)):
        v = len(reference_set(n, kind))
        for parity in ("even", "odd"):
            for deficiency in range(0, 2 ** (n - 1) + 1):
                s = v - deficiency
                q = 2 * s + (parity == "odd")
                if s < 1 or (parity == "odd" and deficiency < 1):
                    continue
                pipe = regsel.ma_design(n, runs, q)
                rep = brute_force_ma(n, q, runs, cap=cap)
                rows.append(
                    {
                        "reference": kind,
                        "runs": runs,
                        "q": q,
                        "parity": parity,
                        "deficiency": deficiency,
                        "candidates": rep.candidates_examined,
                        "match": pipe.wlp.numerators == rep.best_wlp.numerators,
                        "even_optimum": rep.even_optimum,
                    }
                )
    return rows


def verify_claims(n: int, seed: int = 0, random_splits: int = 200) -> VerificationReport:
    if n not in (2, 3):
        raise OutOfRegimeError(f"verification runs at n = 2 or 3, got {n}")
    rng = random.Random(seed)
    rep = VerificationReport(n)
    half = 2 ** (n - 1)

    # largest even complement
    for kind in ("full", "last_even"):
        ref = reference_set(n, kind).vectors
        largest = max(len(c) for c in compset.even_classes(ref))
        built = build_even_set(n, half, kind)
        try:
            build_even_set(n, half + 1, kind)
            over = False
        except InfeasibleError:
            over = True
        rep.add(
            f"even_set_threshold[{kind}]",
            largest == half and is_even_set(built) and len(built) == half and over,
            f"largest even class {largest}, threshold {half}",
        )

    # cubic score bounds, equality exactly on even sets
    for odd in (False, True):
        label = "odd_bound" if odd else "even_bound"
        for kind in ("full", "last_even"):
            stats = bound_suite(n, kind, odd=odd)
            ok = all(
                st["violations"] == 0
                and st["equality_mismatch"] == 0
                and (st["strict_non_even"] > 0 or st["even"] == st["candidates"])
                for st in stats.values()
            )
            total = sum(st["candidates"] for st in stats.values())
            rep.add(f"{label}[{kind}]", ok, f"{total} candidates over sizes 1..{max(stats)}")
    rep.add("cubic_score_routes_agree", _spot_check_cubic_score(n, "full", rng) and _spot_check_cubic_score(n, "last_even", rng))

    # run sums of the design versus those of its complement
    for kind in ("full", "last_even"):
        if n == 2:
            checked, bad = run_sum_identity_suite(n, kind)
        else:
            checked, bad = run_sum_identity_suite(n, kind, random_splits, seed)
        rep.add(f"run_sum_identity[{kind}]", bad == 0, f"{checked} splits, {bad} failures")

    # null combination counts
    ref = reference_set(n).vectors
    null_ok = True
    for gj, gk in itertools.product(ref, repeat=2):
        vals = [compset.null_combination_count(gj, gk, gh) for gh in ref]
        if any(b not in (0, 1) for b in vals):
            null_ok = False
        if (gj + gk).all_even():
            null_ok &= not any(vals)
        else:
            null_ok &= sum(vals) <= 2
    rep.add("null_combination_counts", null_ok, f"{len(ref) ** 2} ordered pairs")

    # cube sum via null combination counts, square sum via even classes
    cube_ok = square_ok = True
    if n == 2:
        subsets = [c for size in range(1, len(ref) + 1) for c in itertools.combinations(ref, size)]
    else:
        subsets = [tuple(rng.sample(ref, rng.randint(1, 8))) for _ in range(40)]
    for c in subsets:
        p = compset.profile(ComplementSet(n, tuple(c), "full"))
        sb = [int(x) for x in p.run_sums]
        cube_ok &= sum(x**3 for x in sb) == 2 ** (2 * n + 1) * compset.null_combination_total(c)
        sq = sum(x * x for x, d in zip(sb, p.all_even) if d)
        square_ok &= sq == 2 ** (n + 2) * sum(len(k) ** 2 for k in p.even_classes)
    rep.add("cube_sum_via_null_combinations", cube_ok, f"{len(subsets)} complements")
    rep.add("square_sum_via_classes", square_ok, f"{len(subsets)} complements")

    # foldover identities for every B
    fold_ok = True
    count = 0
    top = (1 << (n - 1)) - 1
    for m in range(1, top + 1):
        for B in regsel.enumerate_b(n, m):
            count += 1
            fold_ok &= all(regsel.fold_wlp_identities(B).values())
    rep.add("foldover_identities", fold_ok, f"{count} binary matrices")

    # row-sum lambda equals regular design run sums
    lam_ok = all(
        compset.binary_row_sums(B) == row_sums(regsel.regular_design(B))
        for m in range(1, top + 1)
        for B in regsel.enumerate_b(n, m)
    )
    rep.add("binary_row_sums", lam_ok)

    # exhaustive MA search against the pipeline
    rows = oracle_equivalence(n)
    rep.add(
        "oracle_matches_pipeline",
        all(r["match"] for r in rows),
        f"{len(rows)} cases, {sum(r['candidates'] for r in rows)} candidates",
    )
    rep.add("even_complement_optimal", all(r["even_optimum"] for r in rows))

    if n == 2:
        rep.add("moment_identity", _moment_identity_n2())
    return rep


def _moment_identity_n2() -> bool:
    """M_k = N m_k (checked inside ``moments``) and m_k - (-1)^k mbar_k constant per size."""
    n = 2
    ref = reference_set(n).vectors
    ok = True
    for size in range(1, len(ref)):
        seen: dict[int, set] = {}
        for c in itertools.combinations(ref, size):
            sbar = ComplementSet(n, c, "full")
            D = build_from_complement(sbar, False)
            try:
                mv = moments(D, 8)
            except ConsistencyError:
                return False
            mb = compset.complement_moments(compset.profile(sbar), 8)
            for k in range(3, 9):
                seen.setdefault(k, set()).add(mv.m[k] - (-1) ** k * mb[k])
        ok &= all(len(vals) == 1 for vals in seen.values())
    return ok
