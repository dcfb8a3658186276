"""Syndromes, pattern parity, unique decodability and the errors-from-erasures reduction."""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from ._budget import BudgetExceeded, check_budget
from .channel_model import (
    DEFAULT_SEED,
    CorruptionModel,
    Pattern,
    count_successes,
    halfwidth95,
    sample_pattern,
    substream,
)
from .gf2_linalg import (
    BitMatrix,
    BitVector,
    kernel_basis,
    mat_mul,
    mat_vec,
    random_bits,
    rank,
    select_columns,
    span_codewords,
)
from .rm_core import RmCode, binom_sum, eval_matrix, eval_vector, parity_check, tensor_power

DEFAULT_BUDGET = 1 << 22


@dataclass(frozen=True)
class PointMatrix:
    """An m x s matrix given by its columns ``u_1..u_s`` (points as ints)."""

    m: int
    columns: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(int(c) for c in self.columns)
        for c in cols:
            if not 0 <= c < (1 << self.m):
                raise ValueError(f"column {c} is not a point of F_2^{self.m}")
        object.__setattr__(self, "columns", cols)

    @property
    def s(self) -> int:
        return len(self.columns)

    @classmethod
    def from_pattern(cls, m: int, U: Pattern) -> PointMatrix:
        if U.n != 1 << m:
            raise ValueError(f"pattern length {U.n} != 2**{m}")
        return cls(m, U.support)

    @classmethod
    def from_matrix(cls, M: BitMatrix) -> PointMatrix:
        return cls(M.nrows, tuple(M.column(j).bits for j in range(M.ncols)))

    def to_matrix(self) -> BitMatrix:
        rows = []
        for i in range(self.m):
            v = 0
            for t, c in enumerate(self.columns):
                if (c >> i) & 1:
                    v |= 1 << t
            rows.append(v)
        return BitMatrix(self.m, self.s, tuple(rows))

    def to_pattern(self) -> Pattern:
        if len(set(self.columns)) != self.s:
            raise ValueError("columns are not distinct")
        return Pattern(1 << self.m, self.columns)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.columns)

    def odd_points(self) -> frozenset[int]:
        """Points occurring an odd number of times (what survives mod 2)."""
        odd: set[int] = set()
        for c in self.columns:
            odd ^= {c}
        return frozenset(odd)


@dataclass(frozen=True)
class Syndrome:
    vector: BitVector
    m: int | None = None
    degree: int | None = None


def syndrome(H: BitMatrix, z: Pattern, m: int | None = None, degree: int | None = None) -> Syndrome:
    """``H . 1_z``, optionally tagged with the ``E(m, degree)`` it came from."""
    if z.n != H.ncols:
        raise ValueError(f"pattern over {z.n} coordinates, H has {H.ncols} columns")
    return Syndrome(mat_vec(H, z.indicator()), m, degree)


def point_syndrome(U: PointMatrix, r: int) -> BitVector:
    """``E(m, r)`` applied to the column multiset of ``U`` (mod 2)."""
    acc = BitVector.zeros(binom_sum(U.m, r))
    for u in U.odd_points():
        acc = acc ^ eval_vector(u, U.m, r)
    return acc


def patterns_equiv(U: PointMatrix, V: PointMatrix, r: int) -> bool:
    """``U ~_r V`` decided through syndromes under ``E(m, r)``."""
    if U.m != V.m:
        raise ValueError(f"dimension mismatch: {U.m} vs {V.m}")
    return point_syndrome(U, r) == point_syndrome(V, r)


def parity_signature(U: PointMatrix, r: int) -> tuple[tuple[int, ...], ...]:
    """Parity of every sub-pattern count, straight from the combinatorial definition.

    One entry per row subset ``I`` with ``|I| <= r`` (the empty set included),
    listing for each ``z`` in F_2^|I| the parity of the number of columns whose
    restriction to ``I`` equals ``z``.
    """
    sig = []
    for size in range(min(r, U.m) + 1):
        for I in combinations(range(U.m), size):
            counts = [0] * (1 << size)
            for u in U.columns:
                z = 0
                for t, i in enumerate(I):
                    z |= ((u >> i) & 1) << t
                counts[z] += 1
            sig.append(tuple(c & 1 for c in counts))
    return tuple(sig)


def patterns_equiv_combinatorial(U: PointMatrix, V: PointMatrix, r: int) -> bool:
    if U.m != V.m:
        raise ValueError(f"dimension mismatch: {U.m} vs {V.m}")
    return parity_signature(U, r) == parity_signature(V, r)


def affine_transform(U: PointMatrix, T: BitMatrix) -> PointMatrix:
    """Columns ``T u_i``."""
    if T.shape != (U.m, U.m):
        raise ValueError(f"transform must be {U.m}x{U.m}, got {T.shape}")
    cols = []
    for u in U.columns:
        v = 0
        for i, row in enumerate(T.rows):
            if (row & u).bit_count() & 1:
                v |= 1 << i
        cols.append(v)
    return PointMatrix(U.m, tuple(cols))


# -- unique decodability ----------------------------------------------------------


class ShortCodewords:
    """Nonzero codewords of ``ker(H)`` of weight at most ``max_weight``.

    A weight-``s`` pattern ``U`` collides with some ``V != U``, ``|V| <= s``,
    iff a nonzero kernel word ``c`` has ``|c xor 1_U| <= s``; such ``c`` has
    weight at most ``2s``, so keeping words up to ``2 * s_max`` is enough.
    """

    def __init__(self, H: BitMatrix, max_weight: int, budget: int | None = DEFAULT_BUDGET):
        K = kernel_basis(H)
        check_budget("kernel codewords", 1 << K.nrows, budget)
        words = [c for c in span_codewords(K) if c and c.bit_count() <= max_weight]
        words.sort(key=lambda c: (c.bit_count(), c))
        self.n = H.ncols
        self.max_weight = max_weight
        self.words = words
        self._weights = [c.bit_count() for c in words]

    def witness(self, u: int, same_weight: bool = False) -> int | None:
        """A colliding pattern ``V`` (as bits) for the pattern ``u``, or None."""
        s = u.bit_count()
        # keeping every codeword (max_weight >= n) covers any pattern weight
        if 2 * s > self.max_weight and self.max_weight < self.n:
            raise ValueError(f"pattern weight {s} needs codewords up to {2 * s}")
        stop = bisect_right(self._weights, 2 * s)
        for c in self.words[:stop]:
            v = c ^ u
            w = v.bit_count()
            if w == s if same_weight else w <= s:
                return v
        return None


def _pattern_count(n: int, s: int) -> int:
    return sum(comb(n, i) for i in range(s + 1))


def collision_witness(
    H: BitMatrix,
    U: Pattern,
    budget: int | None = DEFAULT_BUDGET,
    same_weight: bool = False,
) -> Pattern | None:
    """Some ``V != U`` with ``|V| <= |U|`` and the same syndrome, if one exists.

    Searches whichever side is smaller: the kernel of ``H`` or the ball of
    patterns of weight <= |U|.
    """
    if U.n != H.ncols:
        raise ValueError(f"pattern over {U.n} coordinates, H has {H.ncols} columns")
    n, s = H.ncols, U.weight
    kernel_size = 1 << (n - rank(H))
    ball = _pattern_count(n, s)
    if budget is not None and min(kernel_size, ball) > budget:
        raise BudgetExceeded("collision search", min(kernel_size, ball), budget)
    if kernel_size <= ball:
        v = ShortCodewords(H, 2 * s, budget=None).witness(U.bits, same_weight)
        return None if v is None else Pattern.from_bits(n, v)
    target = mat_vec(H, U.indicator())
    sizes = [s] if same_weight else range(s + 1)
    for size in sizes:
        for supp in combinations(range(n), size):
            if supp == U.support:
                continue
            V = Pattern(n, supp)
            if mat_vec(H, V.indicator()) == target:
                return V
    return None


def unique_error_decodable(
    H: BitMatrix,
    U: Pattern,
    budget: int | None = DEFAULT_BUDGET,
    codewords: ShortCodewords | None = None,
) -> bool:
    """True iff no ``V != U`` with ``|V| <= |U|`` has ``H 1_V == H 1_U``."""
    if codewords is not None:
        return codewords.witness(U.bits) is None
    return collision_witness(H, U, budget) is None


# -- the companion construction --------------------------------------------------------


def companion_matrix(s: int) -> BitMatrix:
    """The s x s matrix ``B`` with ``B B^t = I`` used to build colliding pairs."""
    if s < 4 or s % 2:
        raise ValueError(f"s must be even and >= 4, got {s}")
    rows = []
    for i in range(s - 2):
        rows.append(0b11 | (1 << (i + 2)))
    full = (1 << s) - 1
    rows.append(full ^ 0b10)  # (1, 0, 1, ..., 1)
    rows.append(full ^ 0b01)  # (0, 1, 1, ..., 1)
    return BitMatrix(s, s, tuple(rows))


def random_independent_points(m: int, s: int, rng: np.random.Generator) -> PointMatrix:
    """``s`` uniform points of F_2^m, redrawn until they are linearly independent."""
    if not 0 <= s <= m:
        raise ValueError(f"need 0 <= s <= m, got s={s}, m={m}")
    while True:
        U = PointMatrix(m, tuple(random_bits(m, rng) for _ in range(s)))
        if rank(U.to_matrix()) == s:
            return U


def companion_UB(U: PointMatrix) -> PointMatrix:
    """``V = U B``; ``E(m,2) 1_U == E(m,2) 1_V`` for every ``U``."""
    B = companion_matrix(U.s)
    V = mat_mul(U.to_matrix(), B)
    return PointMatrix.from_matrix(V)


# -- exhaustive reduction checks ----------------------------------------------------------


@dataclass
class ReductionReport:
    checked: int = 0
    skipped: int = 0
    violations: int = 0
    sampled: bool = False
    witnesses: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": self.violations,
            "sampled": self.sampled,
            "witnesses": [list(map(list, w)) for w in self.witnesses],
        }


def _check_independent_sets(
    H: BitMatrix,
    T: BitMatrix,
    s_max: int,
    budget: int | None,
    seed: int,
    samples: int,
) -> ReductionReport:
    """For sets S of <= s_max columns independent in ``H``, test unique decoding under ``T``."""
    n = H.ncols
    total = _pattern_count(n, s_max)
    report = ReductionReport()
    short = ShortCodewords(T, 2 * s_max, budget)
    if budget is None or total <= budget:
        candidates = (supp for size in range(s_max + 1) for supp in combinations(range(n), size))
    else:
        report.sampled = True
        rng = substream(seed, 0)
        candidates = (
            tuple(sorted(rng.choice(n, size=int(rng.integers(1, s_max + 1)), replace=False).tolist()))
            for _ in range(samples)
        )
    for supp in candidates:
        if rank(select_columns(H, supp)) < len(supp):
            report.skipped += 1
            continue
        report.checked += 1
        u = 0
        for j in supp:
            u |= 1 << j
        v = short.witness(u)
        if v is not None:
            report.violations += 1
            if len(report.witnesses) < 10:
                report.witnesses.append((supp, tuple(BitVector(n, v).support())))
    return report


def check_erasures_to_errors(
    m: int,
    r: int,
    s_max: int | None = None,
    budget: int | None = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    samples: int = 10_000,
) -> ReductionReport:
    """Every ``U`` with independent columns in ``E(m, r)`` is uniquely decodable under ``E(m, 2r+1)``.

    ``s_max`` defaults to ``m``.  Above ``budget`` patterns, ``samples`` random
    sets are tested instead and the report is flagged as sampled.
    """
    if 2 * r + 1 > m:
        raise ValueError(f"need 2r+1 <= m, got m={m}, r={r}")
    s_max = m if s_max is None else s_max
    return _check_independent_sets(eval_matrix(m, r), eval_matrix(m, 2 * r + 1), s_max, budget, seed, samples)


def check_general_reduction(
    H: BitMatrix,
    s_max: int | None = None,
    budget: int | None = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    samples: int = 10_000,
) -> ReductionReport:
    """Column sets independent in ``H`` are uniquely decodable under ``H^{(x)3}``.

    ``s_max`` defaults to ``rank(H)``, the largest possible independent set.
    """
    s_max = rank(H) if s_max is None else s_max
    return _check_independent_sets(H, tensor_power(H, 3), s_max, budget, seed, samples)


# -- maximum-likelihood decoding and BSC simulation -------------------------------------------


class MlStatus(enum.Enum):
    UNIQUE = "unique"
    TIE = "tie"


@dataclass(frozen=True)
class MlDecoding:
    status: MlStatus
    codeword: BitVector | None = None


def ml_decode(
    code: RmCode,
    received: BitVector,
    budget: int | None = DEFAULT_BUDGET,
    codewords: list[int] | None = None,
) -> MlDecoding:
    """Nearest codeword by exhaustive search; a tie is reported as such."""
    if received.len != code.n:
        raise ValueError(f"received length {received.len} != n={code.n}")
    if codewords is None:
        check_budget("codewords", 1 << code.k, budget)
        codewords = span_codewords(code.generator())
    y = received.bits
    best = None
    best_d = code.n + 1
    tie = False
    for c in codewords:
        d = (c ^ y).bit_count()
        if d < best_d:
            best, best_d, tie = c, d, False
        elif d == best_d:
            tie = True
    if tie:
        return MlDecoding(MlStatus.TIE)
    return MlDecoding(MlStatus.UNIQUE, BitVector(code.n, best))


class BscMethod(enum.Enum):
    SYNDROME_COLLISION = "syndrome"
    FULL_ML = "ml"


class _CollisionTrial:
    def __init__(self, code: RmCode, model: CorruptionModel, budget):
        self.model = model
        self.n = code.n
        H = parity_check(code)
        self.short = ShortCodewords(H, code.n, budget)

    def __call__(self, rng: np.random.Generator) -> bool:
        U = sample_pattern(self.model, self.n, rng)
        return self.short.witness(U.bits) is None


class _MlTrial:
    def __init__(self, code: RmCode, model: CorruptionModel, budget):
        check_budget("codewords", 1 << code.k, budget)
        self.code = code
        self.model = model
        self.words = span_codewords(code.generator())

    def __call__(self, rng: np.random.Generator) -> bool:
        sent = self.words[random_bits(self.code.k, rng)]
        U = sample_pattern(self.model, self.code.n, rng)
        out = ml_decode(self.code, BitVector(self.code.n, sent ^ U.bits), codewords=self.words)
        return out.status is MlStatus.UNIQUE and out.codeword.bits == sent


def mc_bsc_success(
    code: RmCode,
    model: CorruptionModel,
    trials: int,
    seed: int = DEFAULT_SEED,
    method: BscMethod | str = BscMethod.SYNDROME_COLLISION,
    budget: int | None = DEFAULT_BUDGET,
    workers: int | None = None,
) -> tuple[float, float]:
    """Monte-Carlo probability of unique error decoding and its 95% half-width."""
    method = BscMethod(method)
    if method is BscMethod.SYNDROME_COLLISION:
        trial = _CollisionTrial(code, model, budget)
    else:
        trial = _MlTrial(code, model, budget)
    hits = count_successes(trial, trials, seed, workers)
    f = hits / trials
    return f, halfwidth95(f, trials)


def exact_bad_fraction(
    H: BitMatrix,
    s: int,
    same_weight: bool = False,
    budget: int | None = DEFAULT_BUDGET,
) -> Fraction:
    """Exact fraction of weight-``s`` patterns with a colliding partner.

    ``same_weight=True`` only counts partners of weight exactly ``s``;
    otherwise any partner of weight ``<= s`` counts.
    """
    n = H.ncols
    total = comb(n, s)
    check_budget("error patterns", total, budget)
    short = ShortCodewords(H, 2 * s, budget)
    bad = 0
    for supp in combinations(range(n), s):
        u = 0
        for j in supp:
            u |= 1 << j
        if short.witness(u, same_weight) is not None:
            bad += 1
    return Fraction(bad, total)


def exact_bsc_success(code: RmCode, s: int, budget: int | None = DEFAULT_BUDGET) -> Fraction:
    return 1 - exact_bad_fraction(parity_check(code), s, budget=budget)

