import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from qcdesign.errors import NotGroupInvariantError
from qcdesign.gray import GeneratorMatrix, SignMatrix, construct_even, construct_odd, halve
from qcdesign.oracle import naive_wlp
from qcdesign.wlp import (
    UNBOUNDED,
    WordLengthPattern,
    aliasing_index,
    krawtchouk_row,
    moments,
    projectivity_at_least,
    resolution,
    rho_max,
    row_sums,
    wlp_direct,
    wlp_distance,
)
from qcdesign.z4 import enumerate_omega, enumerate_omega0
from conftest import full_factorial, random_design


def qc(*cols, odd=False):
    g = GeneratorMatrix.of(list(cols))
    return construct_odd(g) if odd else construct_even(g)


def duplicated():
    F = full_factorial(2).entries
    return SignMatrix(np.hstack([F, F[:, :1]]))


def test_aliasing_index_examples():
    assert aliasing_index(duplicated(), [0, 2]) == 1
    assert aliasing_index(full_factorial(2), [0, 1]) == 0
    D = qc("10", "11")
    for H in itertools.combinations(range(4), 3):
        assert aliasing_index(D, H) in (0, Fraction(1, 2))


def test_aliasing_index_rejects_bad_subsets():
    with pytest.raises(ValueError):
        aliasing_index(full_factorial(2), [])
    with pytest.raises(IndexError):
        aliasing_index(full_factorial(2), [0, 5])


def test_full_factorial_wlp(backend):
    F = full_factorial(2)
    assert wlp_direct(F, 2, backend=backend).numerators == (16, 0, 0)
    w = wlp_distance(F)
    assert w.A(0) == 1 and w.A(1) == 0 and w.A(2) == 0


def test_direct_kmax_validation():
    with pytest.raises(ValueError):
        wlp_direct(full_factorial(2), 3)


def test_row_sums():
    assert row_sums(full_factorial(2)) == [2, 0, 0, -2]
    D = qc("10", "11")
    assert row_sums(D)[0] == 4
    assert row_sums(qc("10", "11", "12", odd=True))[0] == 5


def test_krawtchouk_generating_function():
    q = 9
    for x in range(q + 1):
        poly = np.polynomial.polynomial.polymul(
            np.polynomial.polynomial.polypow([1, -1], x), np.polynomial.polynomial.polypow([1, 1], q - x)
        )
        assert list(krawtchouk_row(x, q)) == [int(round(c)) for c in poly]


def _n2_designs():
    ref = enumerate_omega(2).vectors
    for size in range(1, len(ref) + 1):
        for cols in itertools.combinations(ref, size):
            yield qc(*cols)
            if size >= 2:
                yield qc(*cols, odd=True)


def test_distance_equals_direct_and_naive_n2(backend):
    for D in _n2_designs():
        d = wlp_distance(D)
        assert wlp_direct(D, D.factors, backend=backend).numerators == d.numerators
        if D.factors <= 9:
            assert naive_wlp(D).numerators == d.numerators


def test_distance_equals_direct_n3(backend):
    rng = np.random.default_rng(0)
    ref = enumerate_omega(3).vectors
    for _ in range(12):
        size = int(rng.integers(2, len(ref) + 1))
        cols = [ref[i] for i in sorted(rng.choice(len(ref), size, replace=False))]
        D = qc(*cols, odd=bool(rng.integers(2)))
        k = min(6, D.factors) if D.factors <= 24 else 4
        assert wlp_direct(D, k, backend=backend).numerators == wlp_distance(D).numerators[: k + 1]


def test_distance_equals_direct_n4_spot(backend):
    ref = enumerate_omega(4).vectors
    D = qc(*ref[:30])
    assert wlp_direct(D, 4, backend=backend).numerators == wlp_distance(D).numerators[:5]


def test_distance_route_refuses_irregular_designs():
    rng = np.random.default_rng(5)
    D = random_design(rng, 12, 5)
    with pytest.raises(NotGroupInvariantError):
        wlp_distance(D)


def test_wlp_invariants_on_qc_designs():
    for D in _n2_designs():
        w = wlp_distance(D)
        assert w.A(0) == 1
        assert w.A(1) == 0 and w.A(2) == 0
        for k in range(w.k_max + 1):
            assert 0 <= w.A(k) <= math.comb(D.factors, k)
        assert sum(w.numerators) % 1 == 0


def test_wlp_json_round_trip():
    w = wlp_distance(qc("10", "11", "21"))
    data = w.to_json()
    assert data["runs"] == 16 and data["factors"] == 6
    assert WordLengthPattern.from_json(data) == w


def test_resolution_examples(backend):
    assert resolution(duplicated(), backend=backend) == 2
    assert resolution(full_factorial(3), backend=backend) == UNBOUNDED
    for D in _n2_designs():
        r = resolution(D, backend=backend)
        assert r == UNBOUNDED or r >= Fraction(7, 2)


def test_rho_three_at_most_half(backend):
    for D in _n2_designs():
        if D.factors >= 3:
            assert rho_max(D, 3, backend=backend) <= Fraction(1, 2)


def test_projectivity(backend):
    assert projectivity_at_least(full_factorial(2), 2, backend=backend)
    assert not projectivity_at_least(duplicated(), 2, backend=backend)
    for D in _n2_designs():
        if D.factors >= 3:
            assert projectivity_at_least(D, 3, backend=backend)


def test_moments_small_examples():
    D = qc("01")
    sums = row_sums(D)
    mv = moments(D, 5)
    assert mv.m[3] == sum(s**3 for s in sums)
    assert mv.M[3] == 16 * mv.m[3]
    assert moments(full_factorial(2), 3).m[3] == 0


def test_moment_identity_n2():
    for D in _n2_designs():
        mv = moments(D, 8)
        for k in range(3, 9):
            assert mv.M[k] == D.runs * mv.m[k]


def test_moments_reject_small_kmax():
    with pytest.raises(ValueError):
        moments(full_factorial(2), 2)


def _seq_order(a, b):
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return 0


def test_wlp_and_moment_orders_agree_n2():
    by_q = {}
    for D in _n2_designs():
        w = wlp_distance(D)
        top = max(3, D.factors)
        mv = moments(D, top)
        by_q.setdefault(D.factors, []).append(
            (tuple(w.numerators[3:]), tuple(mv.M[k] for k in range(3, top + 1)))
        )
    for items in by_q.values():
        for (wa, ma), (wb, mb) in itertools.combinations(items, 2):
            assert _seq_order(wa, wb) == _seq_order(ma, mb)
