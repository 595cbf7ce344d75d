import json
import math
import random
from pathlib import Path

import numpy as np
import pytest

from qcdesign import regsel
from qcdesign.binmat import BinaryMatrix, gamma, label, parse_b_notation
from qcdesign.errors import InvalidSelectionError, OutOfRegimeError
from qcdesign.gray import GeneratorMatrix, construct_even, construct_odd
from qcdesign.oracle import naive_wlp
from qcdesign.wlp import wlp_distance
from qcdesign.z4 import Z4Vector, is_even_set

REFERENCE_B = json.loads((Path(__file__).parent / "data" / "reference_b_matrices.json").read_text())

# B matrices with the WLPs (A_3, ..., A_9) of their regular designs, 16 runs
EXAMPLE_WLPS = {
    "i": ("1 2 12 3 13 4 14 234 1234", (4, 14, 8, 0, 4, 1, 0)),
    "ii": ("1 2 12 3 13 4 24 34 1234", (6, 9, 9, 6, 0, 0, 1)),
    "iii": ("1 2 12 3 13 23 4 14 234", (6, 10, 8, 4, 2, 1, 0)),
    "iv": ("1 2 12 3 13 23 4 14 24", (7, 9, 6, 6, 3, 0, 0)),
    "v": ("1 2 12 3 13 23 123 4 14", (8, 10, 4, 4, 4, 1, 0)),
}


def B(text, rows):
    return parse_b_notation(text, rows)


def test_parse_b_notation():
    b = B("[1 2 12 3]", 3)
    assert b.columns == (0b001, 0b010, 0b011, 0b100)
    assert str(b) == "[1 2 12 3]"
    assert [b.entry(h, 2) for h in (1, 2, 3)] == [1, 1, 0]


@pytest.mark.parametrize("text", ["1 1", "4", "0", "1x", "11"])
def test_parse_b_notation_errors(text):
    with pytest.raises(InvalidSelectionError):
        B(text, 3)


def test_label_and_yates_order():
    assert [label(m) for m in range(1, 8)] == ["1", "2", "12", "3", "13", "23", "123"]


def test_gamma_order():
    assert gamma(2) == [0b00, 0b10, 0b01, 0b11]


def test_binary_matrix_validation():
    with pytest.raises(InvalidSelectionError):
        BinaryMatrix(2, (0,))
    with pytest.raises(InvalidSelectionError):
        BinaryMatrix(2, (4,))


def test_regular_design_examples():
    d = regsel.regular_design(B("1 2 12", 2))
    assert d.entries.shape == (4, 3)
    assert d.entries.sum(axis=1).tolist() == [3, -1, -1, -1]
    one = regsel.regular_design(B("2", 3))
    assert sorted(one.entries[:, 0].tolist()) == [-1] * 4 + [1] * 4
    full = regsel.regular_wlp(B("1 2 3", 3))
    assert full.counts == (1, 0, 0, 0)


@pytest.mark.parametrize("case", sorted(EXAMPLE_WLPS))
def test_regular_wlp_examples(case):
    text, wlp = EXAMPLE_WLPS[case]
    assert regsel.regular_wlp(B(text, 4)).pattern() == wlp


def test_regular_wlp_matches_sign_design():
    rng = random.Random(2)
    for _ in range(20):
        cols = rng.sample(range(1, 16), rng.randint(1, 8))
        b = BinaryMatrix(4, tuple(cols))
        rw = regsel.regular_wlp(b)
        assert naive_wlp(regsel.regular_design(b)).fractions(0) == list(rw.counts)


def test_regular_wlp_total_is_kernel_size():
    rng = random.Random(3)
    for _ in range(30):
        cols = rng.sample(range(1, 16), rng.randint(1, 15))
        b = BinaryMatrix(4, tuple(cols))
        assert sum(regsel.regular_wlp(b).counts) == 2 ** (b.m - b.rank())


def test_pair_sum_keys():
    assert regsel.pair_sum_key(B(EXAMPLE_WLPS["ii"][0], 4)) == (15, 15, 0, 1)
    assert regsel.pair_sum_key(B(EXAMPLE_WLPS["i"][0], 4)) == (18, 8, 5, 0)
    assert regsel.pair_sum_key(B("1 2 3", 3)) == (0,)
    assert regsel.pair_sum_key(B("1 2 12 3", 3)) == (1,)
    assert regsel.pair_sum_key(B("1 2 3 123", 3)) == (1,)


def test_e4_expansion():
    for text in ("1 2 12 3", "1 2 3 123", "1 2 3 4"):
        b = B(text, 4)
        w = regsel.regular_wlp(b)
        assert regsel.odd_count_term(b, 2) == 6 + 8 * w.A(3) + 16 * w.A(4)
    assert regsel.odd_count_term(B("1 2 12 3", 3), 2) == 14
    assert regsel.odd_count_term(B("1 2 3 123", 3), 2) == 22


def test_e2r_requires_r_two():
    with pytest.raises(ValueError):
        regsel.odd_count_term(B("1 2", 2), 1)


def test_e2r_example_odd_key():
    # E_4 = C(9, 2) + 8 (A_3 + 2 A_4) for nine columns
    for case, (text, wlp) in EXAMPLE_WLPS.items():
        assert regsel.odd_count_term(B(text, 4), 2) == math.comb(9, 2) + 8 * (wlp[0] + 2 * wlp[1])


def test_foldover_shape():
    d = regsel.regular_design(B("1 2 12", 2))
    f = regsel.foldover(d)
    assert f.entries.shape == (8, 4)
    assert (f.entries[4:] == -f.entries[:4]).all()
    assert (f.entries[:4, -1] == 1).all()


def test_fold_identities_example():
    b = B("1 2 12 3", 3)
    checks = regsel.fold_wlp_identities(b)
    assert all(checks.values()), checks
    folded0 = wlp_distance(regsel.foldover(regsel.doubled(b)))
    assert folded0.A(4) == 14
    assert folded0.A(2) == 4  # v - s - 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fold_identities_all_b(n):
    top = 2 ** (n - 1) - 1
    for m in range(1, top + 1):
        for b in regsel.enumerate_b(n, m):
            assert all(regsel.fold_wlp_identities(b).values()), str(b)


def test_fold_identities_random_n5():
    rng = random.Random(5)
    for _ in range(100):
        b = BinaryMatrix(4, tuple(rng.sample(range(1, 16), rng.randint(1, 15))))
        assert all(regsel.fold_wlp_identities(b).values()), str(b)


def test_enumerate_b_counts():
    assert len(regsel.enumerate_b(4, 4)) == 35
    assert len(regsel.enumerate_b(5, 9)) == 5005
    only = regsel.enumerate_b(3, 3)
    assert len(only) == 1 and str(only[0]) == "[1 2 12]"
    with pytest.raises(InvalidSelectionError):
        regsel.enumerate_b(3, 4)
    with pytest.raises(InvalidSelectionError):
        regsel.enumerate_b(3, 0)


def test_select_example_n5_both_parities():
    ii = B(EXAMPLE_WLPS["ii"][0], 4)
    even = regsel.select_b(5, 10, "even")
    odd = regsel.select_b(5, 10, "odd")
    assert even.key == regsel.pair_sum_key(ii)
    assert even.key[0] == 15
    assert odd.key == regsel.odd_count_key(ii)
    assert (odd.key[0] - math.comb(9, 2)) // 8 == 24
    # every optimum has the same regular WLP as (ii), i.e. the optimum is unique up to isomorphism
    for sel in (even, odd):
        best = [
            b for b in regsel.enumerate_b(5, 9)
            if regsel.criterion_key(b, sel.parity) == sel.key
        ]
        assert len(best) == sel.n_optimal
        assert {regsel.regular_wlp(b).pattern() for b in best} == {EXAMPLE_WLPS["ii"][1]}


def test_select_example_n5_among_listed():
    keys = {c: regsel.regular_wlp(B(t, 4)) for c, (t, _) in EXAMPLE_WLPS.items()}
    pair = {c: w.A(3) + w.A(4) for c, w in keys.items()}
    weighted = {c: w.A(3) + 2 * w.A(4) for c, w in keys.items()}
    assert min(pair, key=pair.get) == "ii" and sorted(pair.values())[:2] == [15, 16]
    assert min(weighted, key=weighted.get) == "ii" and weighted["ii"] == 24
    assert sorted(weighted.values())[1] > 24


def test_select_example_n4():
    even = regsel.select_b(4, 5, "even")
    assert even.key == (1,)
    assert str(even.matrix) == "[1 2 12 3]"
    odd = regsel.select_b(4, 5, "odd")
    assert str(odd.matrix) == "[1 2 12 3]"
    assert odd.key[0] == 14


def test_select_b_errors():
    with pytest.raises(OutOfRegimeError):
        regsel.select_b(4, 1)
    with pytest.raises(OutOfRegimeError):
        regsel.select_b(4, 9)
    with pytest.raises(ValueError):
        regsel.select_b(4, 3, "neither")


def test_selected_key_is_minimal():
    for n, d in ((4, 4), (4, 6), (5, 7)):
        for parity in ("even", "odd"):
            sel = regsel.select_b(n, d, parity)
            assert all(
                regsel.criterion_key(b, parity) >= sel.key for b in regsel.enumerate_b(n, d - 1)
            )


def test_sbar_from_b_examples():
    got = regsel.sbar_from_b(B("1 2 12 3 13", 3), 4, "last_even")
    assert got.digit_strings() == ["1000", "1200", "1020", "1220", "1002", "1202"]
    got = regsel.sbar_from_b(B("1 2 12 3 4 34", 4), 5, "last_even", odd=True)
    assert set(got.digit_strings()) == {"10000", "12000", "10200", "12200", "10020", "10002", "10022"}
    assert got.odd_role == Z4Vector.parse("10000")
    assert regsel.sbar_from_b(None, 3).digit_strings() == ["100"]
    with pytest.raises(InvalidSelectionError):
        regsel.sbar_from_b(B("1 2", 2), 4)


def test_sbar_from_b_always_even():
    for n in (3, 4):
        for m in range(1, 2 ** (n - 1)):
            for b in regsel.enumerate_b(n, m):
                s = regsel.sbar_from_b(b, n)
                assert is_even_set(s) and len(s) == m + 1


@pytest.mark.parametrize("n,runs,q,deficiency", [
    (4, 256, 230, 5), (4, 256, 231, 5), (4, 128, 100, 6), (5, 512, 467, 7),
])
def test_ma_design_examples(n, runs, q, deficiency):
    ma = regsel.ma_design(n, runs, q)
    assert ma.design.entries.shape == (runs, q)
    assert ma.deficiency == deficiency
    assert ma.wlp.A(1) == 0 and ma.wlp.A(2) == 0


def test_ma_design_n5_full():
    ma = regsel.ma_design(5, 1024, 973)
    assert ma.b is not None and regsel.regular_wlp(ma.b).pattern() == EXAMPLE_WLPS["ii"][1]
    ma = regsel.ma_design(5, 1024, 972)
    assert regsel.regular_wlp(ma.b).pattern() == EXAMPLE_WLPS["ii"][1]


def test_ma_design_half_example_listing():
    ma = regsel.ma_design(4, 128, 100)
    assert ma.sbar.digit_strings() == ["1000", "1200", "1020", "1220", "1002", "1202"]
    assert ma.halved


def test_ma_design_small_deficiencies():
    ma = regsel.ma_design(3, 64, 56)
    assert ma.deficiency == 0 and ma.selection is None
    ma = regsel.ma_design(3, 64, 54)
    assert ma.sbar.digit_strings() == ["100"]
    ma = regsel.ma_design(3, 64, 55)
    assert ma.sbar.odd_role == Z4Vector.parse("100")


def test_halved_design_matches_parent():
    for n, runs, q in ((3, 32, 20), (3, 32, 19), (4, 128, 103)):
        ma = regsel.ma_design(n, runs, q)
        parent = construct_odd(ma.generator) if q % 2 else construct_even(ma.generator)
        assert wlp_distance(parent).fractions() == ma.wlp.fractions()


@pytest.mark.parametrize("n,runs,q", [(4, 256, 2), (4, 256, 222), (4, 256, 242), (4, 100, 230), (4, 128, 113)])
def test_ma_design_out_of_regime(n, runs, q):
    with pytest.raises(OutOfRegimeError) as exc:
        regsel.ma_design(n, runs, q)
    if runs in (128, 256):
        lo, hi = regsel.q_range(n, runs)
        assert f"{lo}..{hi}" in str(exc.value)


def test_q_ranges():
    assert regsel.q_range(4, 128) == (96, 112)
    assert regsel.q_range(4, 256) == (224, 240)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_optimal_b_table_keys_match_reference(n):
    rows = regsel.optimal_b_table(n)
    assert [d for d, _ in rows] == list(range(2, 2 ** (n - 1) + 1))
    for (d, sel), text in zip(rows, REFERENCE_B[str(n)]):
        ref = B(text, n - 1)
        assert ref.m == d - 1
        assert sel.key == regsel.pair_sum_key(ref)


def test_optimal_b_table_matrices_reproduced_exactly():
    for n in (3, 4, 5):
        assert [sel.matrix.tokens() for _, sel in regsel.optimal_b_table(n)] == [
            t.split() for t in REFERENCE_B[str(n)]
        ]


def test_optimal_b_table_unsupported():
    with pytest.raises(OutOfRegimeError):
        regsel.optimal_b_table(6)
