import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmlab.channel_model import DEFAULT_SEED, Iid, Pattern, UniformWeight
from rmlab.erasure_lab import (
    DecodeStatus,
    ErasedWord,
    affine_span_probability,
    decode_erasures,
    dual_rank_equivalence,
    erasure_correctable,
    exact_erasure_success,
    exact_span_probability,
    generator_correctable,
    iter_patterns,
    mc_erasure_success,
    mc_span_success,
    span_full,
)
from rmlab.gf2_linalg import BitMatrix, BitVector, kernel_basis, span_codewords
from rmlab.rm_core import RmCode, encode, eval_matrix, parity_check


@st.composite
def check_and_pattern(draw):
    n = draw(st.integers(1, 10))
    rows = draw(st.integers(0, n))
    H = BitMatrix(rows, n, tuple(draw(st.lists(st.integers(0, (1 << n) - 1), min_size=rows, max_size=rows))))
    S = Pattern.from_bits(n, draw(st.integers(0, (1 << n) - 1)))
    return H, S


def test_correctable_examples():
    H = eval_matrix(3, 1)
    assert erasure_correctable(H, Pattern(8))
    assert erasure_correctable(H, Pattern(8, (1, 2, 4)))
    assert not erasure_correctable(H, Pattern(8, tuple(range(8))))


def test_decode_examples():
    H = parity_check(RmCode(1, 0))
    assert decode_erasures(H, ErasedWord(2, Pattern(2), BitVector.from_list([1, 1]))).codeword == BitVector.ones(2)
    assert decode_erasures(H, ErasedWord(2, Pattern(2), BitVector.from_list([1, 0]))).status is DecodeStatus.INCONSISTENT
    out = decode_erasures(H, ErasedWord.erase(BitVector.ones(2), Pattern(2, (0,))))
    assert out.status is DecodeStatus.UNIQUE and out.codeword == BitVector.ones(2)
    # the erased value is masked away, so what sat there does not matter
    assert ErasedWord(2, Pattern(2, (0,)), BitVector.ones(2)).values == BitVector.from_list([0, 1])


def test_dual_rank_examples():
    assert dual_rank_equivalence(3, 1, Pattern(8)) == (True, True)
    assert dual_rank_equivalence(4, 1, Pattern(16, (0,))) == (True, True)
    for s in range(4):
        for S in iter_patterns(16, s):
            a, b = dual_rank_equivalence(4, 1, S)
            assert a == b


@pytest.mark.parametrize("m", [1, 2, 3])
def test_dual_rank_exhaustive_small(m):
    n = 1 << m
    for d in range(m):
        for bits in range(1 << n):
            a, b = dual_rank_equivalence(m, d, Pattern.from_bits(n, bits))
            assert a == b


@given(check_and_pattern())
def test_three_views_agree(HS):
    H, S = HS
    G = kernel_basis(H)
    col_view = erasure_correctable(H, S)
    gen_view = generator_correctable(G, S)
    decodes = all(
        decode_erasures(H, ErasedWord.erase(BitVector(H.ncols, c), S)).status is DecodeStatus.UNIQUE
        for c in span_codewords(G)
    )
    assert col_view == gen_view == decodes


@given(check_and_pattern(), st.data())
def test_uncorrectable_is_monotone(HS, data):
    H, S = HS
    extra = data.draw(st.integers(0, (1 << H.ncols) - 1))
    T = Pattern.from_bits(H.ncols, S.bits | extra)
    if not erasure_correctable(H, S):
        assert not erasure_correctable(H, T)


@given(st.integers(2, 5), st.data())
def test_decoding_recovers_codeword(m, data):
    r = data.draw(st.integers(0, m - 1))
    code = RmCode(m, r)
    H = parity_check(code)
    msg = data.draw(st.integers(0, (1 << code.k) - 1))
    cw = encode(code, BitVector(code.k, msg)).bits
    S = Pattern.from_bits(code.n, data.draw(st.integers(0, (1 << code.n) - 1)))
    out = decode_erasures(H, ErasedWord.erase(BitVector(code.n, cw), S))
    if erasure_correctable(H, S):
        assert out.status is DecodeStatus.UNIQUE and out.codeword.bits == cw
    else:
        assert out.status is DecodeStatus.AMBIGUOUS


def test_mc_erasure_extremes():
    code = RmCode(4, 2)
    assert mc_erasure_success(code, UniformWeight(0), 50)[0] == 1.0
    assert mc_erasure_success(code, UniformWeight(16), 50)[0] == 0.0


@pytest.mark.parametrize("r,s", [(1, 4), (1, 6), (2, 3), (2, 5), (3, 2)])
def test_mc_erasure_matches_exact(r, s):
    code = RmCode(4, r)
    exact = exact_erasure_success(parity_check(code), s)
    f, _ = mc_erasure_success(code, UniformWeight(s), 2000, seed=DEFAULT_SEED)
    sigma = math.sqrt(float(exact) * (1 - float(exact)) / 2000)
    assert abs(f - float(exact)) <= 3 * sigma + 1e-12


def test_mc_erasure_iid_runs():
    f, hw = mc_erasure_success(RmCode(4, 1), Iid(0.1), 300)
    assert 0.0 <= f <= 1.0 and hw >= 0.0


def test_span_examples():
    assert mc_span_success(3, 1, 3, 100) == 0.0
    assert mc_span_success(1, 0, 1, 100) == 1.0
    assert span_full([0, 1, 2, 4], 3, 1)
    assert not span_full([0, 1, 2, 3], 3, 1)


@pytest.mark.parametrize("m,s", [(1, 2), (2, 3), (2, 4), (3, 4), (3, 5), (3, 6)])
def test_affine_closed_form_against_enumeration(m, s):
    assert exact_span_probability(m, 1, s) == affine_span_probability(m, s)


def test_affine_closed_form_edges():
    assert affine_span_probability(3, 3) == 0
    assert affine_span_probability(0, 1) == 1
    assert affine_span_probability(1, 2) == Fraction(1, 2)


def test_mc_span_against_closed_form():
    m, s, trials = 10, math.ceil(1.3 * 11), 1000
    p = float(affine_span_probability(m, s))
    f = mc_span_success(m, 1, s, trials)
    assert abs(f - p) <= 3 * math.sqrt(p * (1 - p) / trials)


def test_exact_span_full_space():
    # RM(2,2): evaluation vectors of distinct points are the rows of an invertible matrix
    n = 4
    p = exact_span_probability(2, 2, 4)
    assert p == Fraction(math.factorial(n), n**n)


def test_exact_success_counts():
    # RM(3,1) has distance 4: any 3 erasures are fine, some 4 are not
    H = parity_check(RmCode(3, 1))
    assert exact_erasure_success(H, 3) == 1
    bad = sum(1 for S in combinations(range(8), 4) if not erasure_correctable(H, Pattern(8, S)))
    assert exact_erasure_success(H, 4) == Fraction(70 - bad, 70)
    assert bad == 14
