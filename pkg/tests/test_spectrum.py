import math
from fractions import Fraction
from math import comb

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from rmlab._budget import BudgetExceeded
from rmlab.error_lab import exact_bad_fraction
from rmlab.gf2_linalg import span_codewords
from rmlab.rm_core import RmCode, binom_sum, eval_matrix, parity_check
from rmlab.spectrum import (
    HypothesisViolation,
    binomial_identity_check,
    bsc_union_bound,
    cumulative_W,
    enumerate_weights,
    estimation_small_r_check,
    gaussian_binomial,
    ghw,
    ghw_bruteforce,
    ghw_by_supports,
    klp_bound,
    klp_threshold,
    minimal_klp_constant,
    wei_rep,
)


def test_weight_distribution_examples():
    for m in range(1, 7):
        assert enumerate_weights(m, 0).counts == {0: 1, 1 << m: 1}
    assert enumerate_weights(3, 3).counts == {w: comb(8, w) for w in range(9)}
    assert enumerate_weights(2, 1).counts == {0: 1, 2: 6, 4: 1}


def test_weights_match_direct_enumeration():
    for m, r in [(3, 1), (4, 2), (5, 2)]:
        direct: dict[int, int] = {}
        for c in span_codewords(eval_matrix(m, r)):
            direct[c.bit_count()] = direct.get(c.bit_count(), 0) + 1
        assert enumerate_weights(m, r).counts == direct
        assert enumerate_weights(m, r, workers=3).counts == direct


def test_weights_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_weights(6, 3, budget=1 << 20)


@given(st.integers(1, 5), st.data())
def test_weight_distribution_properties(m, data):
    r = data.draw(st.integers(0, m))
    assume(binom_sum(m, r) <= 20)
    dist = enumerate_weights(m, r)
    n = 1 << m
    assert dist.total() == 1 << binom_sum(m, r)
    assert all(dist[w] == dist[n - w] for w in range(n + 1))
    assert dist.min_nonzero_weight() == 1 << (m - r)


def test_cumulative_W():
    dist = enumerate_weights(2, 1)
    assert cumulative_W(dist, 1) == 8
    assert cumulative_W(dist, 0) == 1
    assert cumulative_W(dist, Fraction(1, 2)) == 7


def test_klp_bound_arithmetic():
    b = klp_bound(8, 2, 1, Fraction(1, 2))
    assert b.multiplier == 64 and b.log2_bound == 64.0
    assert klp_threshold(1, Fraction(1, 2)) == Fraction(1, 4)
    with pytest.raises(ValueError):
        klp_bound(8, 3, 1, Fraction(1, 2))  # 4(r-1) = 8 is not below m
    with pytest.raises(ValueError):
        klp_bound(10, 2, 2, Fraction(1, 2))


def test_klp_bound_large_case_against_trivial_count():
    # W never exceeds the code size 2^k, so log2 W <= k
    b = klp_bound(10, 3, 1, Fraction(1, 2))
    assert binom_sum(10, 3) <= b.log2_bound


@pytest.mark.parametrize("m", [5, 6])
def test_klp_bound_holds_on_exact_distributions(m):
    dist = enumerate_weights(m, 2)
    for eps in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
        W = cumulative_W(dist, klp_threshold(1, eps))
        assert math.log2(W) <= klp_bound(m, 2, 1, eps).log2_bound
        assert minimal_klp_constant(dist, 1, eps) <= 1


def bsc_bound_oracle(m, r, s):
    """Sum over every nonzero codeword of even weight, straight from the codeword list."""
    n = 1 << m
    total = 0
    for c in span_codewords(eval_matrix(m, r)):
        w = c.bit_count()
        if w and w % 2 == 0 and w // 2 <= s:
            total += comb(w, w // 2) * comb(n - w, s - w // 2)
    return Fraction(total, comb(n, s))


def test_union_bound_examples():
    assert bsc_union_bound(4, 1, 0) == 0
    for m in range(1, 5):
        n = 1 << m
        for s in range(n // 2 + 1):
            want = Fraction(comb(n, n // 2), comb(n, s)) if s == n // 2 else 0
            assert bsc_union_bound(m, 0, s) == want


@pytest.mark.parametrize("r,s", [(1, 3), (1, 4), (1, 5), (2, 2), (2, 3)])
def test_union_bound_oracle_and_dominance(r, s):
    ub = bsc_union_bound(4, r, s)
    assert ub == bsc_bound_oracle(4, r, s)
    assert ub >= exact_bad_fraction(parity_check(RmCode(4, r)), s, same_weight=True)


def test_wei_rep_examples():
    assert wei_rep(binom_sum(5, 2), 5, 2) == [(5, 2)]
    assert wei_rep(1, 3, 1) == [(2, 0)]
    assert wei_rep(2, 3, 1) == [(2, 0), (1, 0)]
    assert wei_rep(5, 4, 2) == [(3, 1), (1, 0)]
    assert wei_rep(6, 3, 2) == [(2, 1), (1, 1), (0, 1)]


def test_ghw_examples():
    assert ghw(3, 1, 1) == 4
    assert ghw(4, 2, 5) == 10
    assert ghw_bruteforce(3, 1, 2) == ghw(3, 1, 2) == 6
    for a in (1, 2, 3):
        assert ghw_bruteforce(3, 2, a) == ghw(3, 2, a)
    for m in range(1, 11):
        for r in range(m + 1):
            k = binom_sum(m, r)
            assert ghw(m, r, 1) == 1 << (m - r)
            assert ghw(m, r, k) == 1 << m


def test_ghw_against_support_oracle():
    for m, r in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]:
        sup = ghw_by_supports(m, r)
        assert sup == {a: ghw(m, r, a) for a in sup}


@given(st.integers(1, 10), st.data())
def test_ghw_strictly_increasing(m, data):
    r = data.draw(st.integers(0, m))
    seq = [ghw(m, r, a) for a in range(1, binom_sum(m, r) + 1)]
    assert all(x < y for x, y in zip(seq, seq[1:]))
    for a in range(1, len(seq) + 1):
        rep = wei_rep(a, m, r)
        assert sum(comb(mi, j) for mi, ri in rep for j in range(min(ri, mi) + 1)) == a


def test_gaussian_binomial():
    assert [gaussian_binomial(4, a) for a in range(5)] == [1, 15, 35, 15, 1]
    with pytest.raises(BudgetExceeded):
        ghw_bruteforce(4, 2, 5, budget=10)


def test_binomial_identity():
    assert binomial_identity_check(5, 2, 2)
    assert binom_sum(5, 2) - (binom_sum(4, 1) + binom_sum(3, 1)) == 7 == binom_sum(3, 2)
    assert binomial_identity_check(7, 3, 0)
    assert all(binomial_identity_check(m, r, t) for m in range(1, 21) for r in range(1, m + 1) for t in range(m + 1))


def test_estimation_example_outside_hypotheses():
    with pytest.raises(HypothesisViolation):
        estimation_small_r_check(64, 2, 0.5, 0.5)
    assert estimation_small_r_check(64, 2, 0.5, 0.5, enforce_hypotheses=False)


@given(st.integers(16, 1 << 14), st.floats(0.05, 0.95), st.floats(0.01, 1.0), st.integers(1, 6))
def test_estimation_within_hypotheses(m, delta, eps, r):
    if not r < math.sqrt(delta * m / (4 * math.log2(m))) or not eps > m ** (-r / 2):
        return
    assert estimation_small_r_check(m, r, delta, eps)
