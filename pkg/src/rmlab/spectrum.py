"""Weight distributions, weight bounds and generalized Hamming weights of RM codes."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import NamedTuple

from ._budget import check_budget
from .channel_model import workers_from_env
from .gf2_linalg import BitMatrix, rank, select_columns, span_codewords
from .rm_core import binom_sum, binom_sum_ext, eval_matrix

DEFAULT_CODEWORD_BUDGET = 1 << 26


@dataclass(frozen=True)
class WeightDistribution:
    m: int
    r: int
    counts: dict[int, int]

    @property
    def n(self) -> int:
        return 1 << self.m

    def __getitem__(self, w: int) -> int:
        return self.counts.get(w, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def min_nonzero_weight(self) -> int | None:
        nz = [w for w, c in self.counts.items() if w and c]
        return min(nz) if nz else None

    def items(self):
        return sorted(self.counts.items())


def _gray_sweep(rows: tuple[int, ...], start: int, nbits: int) -> dict[int, int]:
    """Weight histogram of ``start xor span(rows[:nbits])`` in Gray-code order."""
    counts: dict[int, int] = {}
    cw = start
    w = cw.bit_count()
    counts[w] = 1
    for i in range(1, 1 << nbits):
        cw ^= rows[(i & -i).bit_length() - 1]
        w = cw.bit_count()
        counts[w] = counts.get(w, 0) + 1
    return counts


def weight_histogram(G: BitMatrix, budget: int | None = DEFAULT_CODEWORD_BUDGET, workers: int | None = None) -> dict[int, int]:
    """Exact weight counts of the row space of ``G`` (rows assumed independent).

    The message space is split on its top bits; each part is an independent
    Gray-code sweep and the histograms are added.
    """
    k = G.nrows
    check_budget("codewords", 1 << k, budget)
    workers = workers_from_env() if workers is None else workers
    split = 0
    while (1 << split) < workers and split < k:
        split += 1
    low = k - split
    high_rows = G.rows[low:]
    starts = span_codewords(BitMatrix(split, G.ncols, high_rows))
    total: dict[int, int] = {}
    if workers <= 1 or split == 0:
        parts = [_gray_sweep(G.rows, st, low) for st in starts]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_gray_sweep, [G.rows] * len(starts), starts, [low] * len(starts)))
    for part in parts:
        for w, c in part.items():
            total[w] = total.get(w, 0) + c
    return total


def enumerate_weights(
    m: int,
    r: int,
    budget: int | None = DEFAULT_CODEWORD_BUDGET,
    workers: int | None = None,
) -> WeightDistribution:
    """Exact weight distribution of RM(m, r) over all ``2**k`` codewords."""
    G = eval_matrix(m, r)
    return WeightDistribution(m, r, weight_histogram(G, budget, workers))


def cumulative_W(dist: WeightDistribution, alpha) -> int:
    """Number of codewords of relative weight at most ``alpha``."""
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    limit = alpha * dist.n
    return sum(c for w, c in dist.counts.items() if w <= limit)


# -- bounds ---------------------------------------------------------------------------


class KlpBound(NamedTuple):
    """``log2`` of ``(1/eps)^{multiplier}``, where ``multiplier = 8 c l^4 C(m-l, <= r-l)``."""

    multiplier: Fraction
    log2_bound: float


def klp_bound(m: int, r: int, ell: int, eps, c=1) -> KlpBound:
    """Exponent of the upper bound on ``W_{m,r}((1 - eps) 2^{-ell})``."""
    if not 1 <= ell <= r - 1:
        raise ValueError(f"need 1 <= ell <= r-1, got ell={ell}, r={r}")
    if not (r - 1) * 4 < m:
        raise ValueError(f"need r-1 < m/4, got m={m}, r={r}")
    eps = Fraction(eps)
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError("need 0 < eps <= 1/2")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    mult = 8 * c * ell**4 * binom_sum_ext(m - ell, r - ell)
    return KlpBound(mult, float(mult) * -math.log2(eps))


def klp_threshold(ell: int, eps) -> Fraction:
    """The relative weight ``(1 - eps) 2^{-ell}`` the bound speaks about."""
    return (1 - Fraction(eps)) / 2**ell


def minimal_klp_constant(dist: WeightDistribution, ell: int, eps) -> float:
    """Smallest ``c`` for which the bound holds on the given exact distribution."""
    W = cumulative_W(dist, klp_threshold(ell, eps))
    unit = klp_bound(dist.m, dist.r, ell, eps, c=1).log2_bound
    return math.log2(W) / unit


def bsc_union_bound(m: int, r: int, s: int, dist: WeightDistribution | None = None) -> Fraction:
    """Union bound on the fraction of weight-``s`` error patterns with a same-weight partner.

    ``sum_w N(w) C(w, w/2) C(n-w, s-w/2) / C(n, s)`` over even nonzero ``w``
    (the all-ones word included).
    """
    if dist is None:
        dist = enumerate_weights(m, r)
    elif (dist.m, dist.r) != (m, r):
        raise ValueError("distribution is for a different code")
    n = 1 << m
    if not 0 <= s <= n // 2:
        raise ValueError(f"need 0 <= s <= n/2, got s={s}")
    total = 0
    for w, count in dist.counts.items():
        if w == 0 or w % 2 or w // 2 > s:
            continue
        total += count * comb(w, w // 2) * comb(n - w, s - w // 2)
    return Fraction(total, comb(n, s))


# -- generalized Hamming weights ----------------------------------------------------------


def wei_rep(a: int, m: int, r: int) -> list[tuple[int, int]]:
    """Pairs ``(m_i, r_i)`` with ``a = sum C(m_i, <= r_i)`` and ``m_i - r_i = m - r - i + 1``."""
    k = binom_sum(m, r)
    if not 0 <= a <= k:
        raise ValueError(f"a={a} outside [0, {k}]")
    rep = []
    rest = a
    i = 1
    while rest:
        gap = m - r - i + 1
        # r_i = m_i - gap may exceed m_i once gap < 0; then C(m_i, <= r_i) = 2^{m_i}
        mi = max(gap, 0)
        if binom_sum_ext(mi, mi - gap) > rest:
            raise ArithmeticError(f"no representation for a={a} (m={m}, r={r})")
        while mi < m and binom_sum_ext(mi + 1, mi + 1 - gap) <= rest:
            mi += 1
        rep.append((mi, mi - gap))
        rest -= binom_sum_ext(mi, mi - gap)
        i += 1
    if any(x[0] <= y[0] for x, y in zip(rep, rep[1:])):
        raise ArithmeticError(f"non-decreasing representation {rep}")
    return rep


def ghw(m: int, r: int, a: int) -> int:
    """``d_a(RM(m, r)) = sum 2^{m_i}`` over the representation of ``a``."""
    k = binom_sum(m, r)
    if not 1 <= a <= k:
        raise ValueError(f"a={a} outside [1, {k}]")
    return sum(1 << mi for mi, _ in wei_rep(a, m, r))


def gaussian_binomial(k: int, a: int) -> int:
    """Number of ``a``-dimensional subspaces of F_2^k."""
    if not 0 <= a <= k:
        return 0
    num = den = 1
    for i in range(a):
        num *= (1 << (k - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def ghw_bruteforce(m: int, r: int, a: int, budget: int | None = 10**6) -> int:
    """Minimum support over all ``a``-dimensional subcodes, each visited once.

    Subcodes are enumerated by their reduced row-echelon bases in message
    coordinates; the support of a subcode is the union of its basis supports.
    """
    G = eval_matrix(m, r)
    k = G.nrows
    if not 1 <= a <= k:
        raise ValueError(f"a={a} outside [1, {k}]")
    check_budget("subcodes", gaussian_binomial(k, a), budget)
    words = span_codewords(G)
    best = 1 << m
    for pivots in combinations(range(k), a):
        pset = set(pivots)
        choices = []
        for p in pivots:
            free = [j for j in range(p + 1, k) if j not in pset]
            opts = []
            for sub in range(1 << len(free)):
                msg = 1 << p
                for t, j in enumerate(free):
                    if (sub >> t) & 1:
                        msg |= 1 << j
                opts.append(words[msg])
            choices.append(opts)
        for basis in product(*choices):
            supp = 0
            for c in basis:
                supp |= c
            w = supp.bit_count()
            if w < best:
                best = w
    return best


def ghw_by_supports(m: int, r: int, budget: int | None = 1 << 20) -> dict[int, int]:
    """All ``d_a`` at once from the largest subcode living on each coordinate set.

    The subcode supported inside ``T`` has dimension ``k - rank(G[T^c])``;
    ``d_a`` is the smallest ``|T|`` reaching dimension ``a``.
    """
    G = eval_matrix(m, r)
    n, k = G.ncols, G.nrows
    check_budget("coordinate subsets", 1 << n, budget)
    best = {a: n for a in range(1, k + 1)}
    full = (1 << n) - 1
    for T in range(1 << n):
        size = T.bit_count()
        comp = full ^ T
        dim = k - rank(select_columns(G, [j for j in range(n) if (comp >> j) & 1]))
        for a in range(1, dim + 1):
            if size < best[a]:
                best[a] = size
    return best


# -- binomial identities -------------------------------------------------------------------


def binomial_identity_check(m: int, r: int, t: int) -> bool:
    """``C(m, <= r) - sum_{i=1}^{t} C(m-i, <= r-1) == C(m-t, <= r)``."""
    if t < 0 or r < 0 or m - t < 0 or r > m:
        raise ValueError(f"need t >= 0, 0 <= r <= m, t <= m; got m={m}, r={r}, t={t}")
    lhs = binom_sum(m, r) - sum(binom_sum_ext(m - i, r - 1) for i in range(1, t + 1))
    return lhs == binom_sum_ext(m - t, r)


class HypothesisViolation(ValueError):
    """The inputs fall outside the range where the estimate is claimed."""


def estimation_small_r_check(m: int, r: int, delta: float, eps: float, enforce_hypotheses: bool = True) -> bool:
    """Whether ``C(floor(m - log2 C(m,<=r) - log2(1/eps)), <= r) > (1 - delta) C(m, <= r)``.

    The claimed range is ``r < sqrt(delta m / (4 log2 m))`` and ``eps > m^{-r/2}``;
    outside it a :class:`HypothesisViolation` is raised unless
    ``enforce_hypotheses`` is false.
    """
    if m < 2 or not 0 <= r <= m or not 0 < delta < 1 or not 0 < eps <= 1:
        raise ValueError("need m >= 2, 0 <= r <= m, 0 < delta < 1, 0 < eps <= 1")
    if enforce_hypotheses:
        if not r < math.sqrt(delta * m / (4 * math.log2(m))):
            raise HypothesisViolation(f"r={r} too large for m={m}, delta={delta}")
        if not eps > m ** (-r / 2):
            raise HypothesisViolation(f"eps={eps} must exceed m^(-r/2)={m ** (-r / 2)}")
    k = binom_sum(m, r)
    top = math.floor(m - math.log2(k) - math.log2(1 / eps))
    return binom_sum_ext(top, r) > (1 - delta) * k
