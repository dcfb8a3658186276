"""Erasure correction through rank conditions, plus Monte-Carlo estimators."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, prod

import numpy as np

from ._budget import check_budget
from .channel_model import (
    DEFAULT_SEED,
    CorruptionModel,
    Pattern,
    count_successes,
    halfwidth95,
    sample_pattern,
    sample_points_iid,
)
from .gf2_linalg import BitMatrix, BitVector, mat_vec, rank, select_columns, solve_any
from .rm_core import RmCode, binom_sum, eval_matrix, eval_vector, parity_check

DEFAULT_MAX_N = 1 << 14


@dataclass(frozen=True)
class ErasedWord:
    """A received word: ``values`` is meaningful only outside ``erased``."""

    n: int
    erased: Pattern
    values: BitVector

    def __post_init__(self):
        if self.erased.n != self.n or self.values.len != self.n:
            raise ValueError("length mismatch in erased word")
        # erased positions carry no information
        object.__setattr__(self, "values", BitVector(self.n, self.values.bits & ~self.erased.bits))

    @classmethod
    def erase(cls, codeword: BitVector, erased: Pattern) -> ErasedWord:
        return cls(codeword.len, erased, codeword)


class DecodeStatus(enum.Enum):
    UNIQUE = "unique"
    AMBIGUOUS = "ambiguous"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class ErasureDecoding:
    status: DecodeStatus
    codeword: BitVector | None = None


def erasure_correctable(H: BitMatrix, S: Pattern) -> bool:
    """Whether erasures on ``S`` are recoverable in ``ker(H)``: ``rank(H[S]) == |S|``."""
    if S.n != H.ncols:
        raise ValueError(f"pattern over {S.n} coordinates, H has {H.ncols} columns")
    if S.weight > H.nrows:
        return False
    return rank(select_columns(H, S.support)) == S.weight


def generator_correctable(G: BitMatrix, S: Pattern) -> bool:
    """Generator-side view: the unerased columns of ``G`` keep full rank."""
    if S.n != G.ncols:
        raise ValueError(f"pattern over {S.n} coordinates, G has {G.ncols} columns")
    return rank(select_columns(G, S.complement().support)) == rank(G)


def decode_erasures(H: BitMatrix, w: ErasedWord) -> ErasureDecoding:
    """Fill the erased coordinates so that the word lies in ``ker(H)``.

    Unknowns are the erased coordinates only: ``H[S] x = H[S^c] y``.
    """
    if w.n != H.ncols:
        raise ValueError(f"word length {w.n} != H columns {H.ncols}")
    S = w.erased.support
    rhs = mat_vec(H, w.values)
    HS = select_columns(H, S)
    x = solve_any(HS, rhs)
    if x is None:
        return ErasureDecoding(DecodeStatus.INCONSISTENT)
    if rank(HS) < len(S):
        return ErasureDecoding(DecodeStatus.AMBIGUOUS)
    bits = w.values.bits
    for t, j in enumerate(S):
        if (x.bits >> t) & 1:
            bits |= 1 << j
    return ErasureDecoding(DecodeStatus.UNIQUE, BitVector(w.n, bits))


def dual_rank_equivalence(m: int, d: int, S: Pattern) -> tuple[bool, bool]:
    """``(E(m,d)[S]`` has full column rank, ``E(m,m-d-1)[S^c]`` has full row rank``)``.

    For Reed-Muller codes the two always agree.
    """
    n = 1 << m
    if S.n != n:
        raise ValueError(f"pattern must live on {n} coordinates")
    if not 0 <= d <= m - 1:
        raise ValueError(f"need 0 <= d <= m-1, got d={d}")
    cols = rank(select_columns(eval_matrix(m, d), S.support)) == S.weight
    rows = rank(select_columns(eval_matrix(m, m - d - 1), S.complement().support)) == n - binom_sum(m, d)
    return cols, rows


def iter_patterns(n: int, s: int):
    for supp in combinations(range(n), s):
        yield Pattern(n, supp)


def exact_erasure_success(H: BitMatrix, s: int, budget: int | None = 1 << 22) -> Fraction:
    """Exact fraction of weight-``s`` patterns that ``ker(H)`` can recover from."""
    n = H.ncols
    total = comb(n, s)
    check_budget("erasure patterns", total, budget)
    good = sum(1 for S in iter_patterns(n, s) if erasure_correctable(H, S))
    return Fraction(good, total)


class _ErasureTrial:
    def __init__(self, H: BitMatrix, model: CorruptionModel):
        self.H = H
        self.model = model

    def __call__(self, rng: np.random.Generator) -> bool:
        S = sample_pattern(self.model, self.H.ncols, rng)
        return erasure_correctable(self.H, S)


def mc_erasure_success(
    code: RmCode,
    model: CorruptionModel,
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
    max_n: int | None = DEFAULT_MAX_N,
) -> tuple[float, float]:
    """Monte-Carlo success probability of erasure decoding and its 95% half-width."""
    check_budget("blocklength", code.n, max_n)
    H = parity_check(code)
    hits = count_successes(_ErasureTrial(H, model), trials, seed, workers)
    f = hits / trials
    return f, halfwidth95(f, trials)


def span_full(points, m: int, r: int) -> bool:
    """Whether the evaluation vectors ``u^r`` of ``points`` span F_2^{C(m,<=r)}."""
    k = binom_sum(m, r)
    if len(points) < k:
        return False
    vecs = [eval_vector(u, m, r) for u in points]
    return rank(BitMatrix.from_vectors(vecs, ncols=k)) == k


class _SpanTrial:
    def __init__(self, m: int, r: int, s: int):
        self.m, self.r, self.s = m, r, s

    def __call__(self, rng: np.random.Generator) -> bool:
        return span_full(sample_points_iid(self.m, self.s, rng), self.m, self.r)


def mc_span_success(
    m: int,
    r: int,
    s: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
    max_n: int | None = DEFAULT_MAX_N,
) -> float:
    """Fraction of trials where ``s`` i.i.d. uniform points have spanning ``u^r``."""
    check_budget("blocklength", 1 << m, max_n)
    if s < binom_sum(m, r):
        return 0.0
    return count_successes(_SpanTrial(m, r, s), trials, seed, workers) / trials


def exact_span_probability(m: int, r: int, s: int, budget: int | None = 1 << 20) -> Fraction:
    """Exact spanning probability by enumerating every ``s``-tuple of points."""
    n = 1 << m
    check_budget("point tuples", n**s, budget)
    good = sum(1 for pts in product(range(n), repeat=s) if span_full(pts, m, r))
    return Fraction(good, n**s)


def affine_span_probability(m: int, s: int) -> Fraction:
    """Closed form for ``r = 1``.

    ``(1, u_i)`` span F_2^{m+1} iff the ``s - 1`` differences ``u_i - u_1``,
    which are i.i.d. uniform, span F_2^m.
    """
    if s < 1:
        return Fraction(0)
    t = s - 1
    if t < m:
        return Fraction(0)
    return prod((Fraction(1) - Fraction(2**i, 2**t) for i in range(m)), start=Fraction(1))
