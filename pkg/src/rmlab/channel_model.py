"""Corruption patterns, channel models, entropy and capacity thresholds.

Randomness: every randomized routine takes a ``numpy.random.Generator``.
Monte-Carlo harnesses never share one generator across trials; trial ``t``
of a run seeded with ``seed`` draws from ``substream(seed, t)``, which is
``default_rng(SeedSequence(seed, spawn_key=(t,)))``.  A trial can therefore
be replayed alone, and results do not depend on how trials are split across
workers.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Union

import numpy as np

from .gf2_linalg import BitVector, random_bits

DEFAULT_SEED = 0x2015

SUBSTREAM_RULE = "trial t uses numpy default_rng(SeedSequence(seed, spawn_key=(t,)))"


def substream(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


@dataclass(frozen=True)
class Pattern:
    """A set of corrupted coordinates ``U`` among ``n``."""

    n: int
    support: tuple[int, ...] = ()

    def __post_init__(self):
        supp = tuple(sorted(self.support))
        if len(set(supp)) != len(supp):
            raise ValueError("pattern indices must be distinct")
        if supp and not (0 <= supp[0] and supp[-1] < self.n):
            raise ValueError(f"pattern index out of range [0, {self.n})")
        object.__setattr__(self, "support", supp)

    @classmethod
    def from_bits(cls, n: int, bits: int) -> Pattern:
        return cls(n, tuple(BitVector(n, bits).support()))

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def bits(self) -> int:
        b = 0
        for i in self.support:
            b |= 1 << i
        return b

    def indicator(self) -> BitVector:
        return BitVector(self.n, self.bits)

    def complement(self) -> Pattern:
        return Pattern.from_bits(self.n, ((1 << self.n) - 1) ^ self.bits)

    def __len__(self) -> int:
        return len(self.support)

    def __iter__(self):
        return iter(self.support)


@dataclass(frozen=True)
class UniformWeight:
    """Uniform distribution over patterns of weight ``ceil(s)``."""

    s: float

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("s must be non-negative")

    @property
    def weight(self) -> int:
        return math.ceil(self.s)

    def __str__(self) -> str:
        return f"uniform:s={_fmt(self.s)}"


@dataclass(frozen=True)
class Iid:
    """Each coordinate corrupted independently with probability ``p``."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    def __str__(self) -> str:
        return f"iid:p={_fmt(self.p)}"


CorruptionModel = Union[UniformWeight, Iid]


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def parse_model(text: str) -> CorruptionModel:
    """Parse ``uniform:s=<s>`` or ``iid:p=<p>``."""
    kind, _, arg = text.partition(":")
    key, _, value = arg.partition("=")
    try:
        x = float(value)
    except ValueError:
        raise ValueError(f"bad model spec {text!r}") from None
    if kind == "uniform" and key == "s":
        return UniformWeight(x)
    if kind == "iid" and key == "p":
        return Iid(x)
    raise ValueError(f"bad model spec {text!r}; expected uniform:s=... or iid:p=...")


def sample_subset(n: int, s: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform ``s``-subset of ``range(n)`` by a partial Fisher-Yates shuffle."""
    if not 0 <= s <= n:
        raise ValueError(f"cannot pick {s} of {n}")
    idx = list(range(n))
    for i in range(s):
        j = int(rng.integers(i, n))
        idx[i], idx[j] = idx[j], idx[i]
    return tuple(sorted(idx[:s]))


def sample_pattern(model: CorruptionModel, n: int, rng: np.random.Generator) -> Pattern:
    if isinstance(model, UniformWeight):
        s = model.weight
        if s > n:
            raise ValueError(f"s={s} exceeds n={n}")
        return Pattern(n, sample_subset(n, s, rng))
    if isinstance(model, Iid):
        hits = np.flatnonzero(rng.random(n) < model.p)
        return Pattern(n, tuple(int(i) for i in hits))
    raise TypeError(f"unknown model {model!r}")


def sample_points_iid(m: int, s: int, rng: np.random.Generator) -> list[int]:
    """``s`` independent uniform points of F_2^m (repeats allowed)."""
    if s < 0:
        raise ValueError("s must be non-negative")
    if s == 0:
        return []
    if m <= 62:
        return [int(x) for x in rng.integers(0, 1 << m, size=s)]
    return [random_bits(m, rng) for _ in range(s)]


# -- entropy and capacity ------------------------------------------------------


def entropy(p: float) -> float:
    """Binary entropy in bits, with ``h(0) = h(1) = 0``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def inv_entropy(y: float, tol: float = 1e-12) -> float:
    """The ``p`` in [0, 1/2] with ``entropy(p) == y``, by bisection."""
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"y={y} outside [0, 1]")
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class Regime(enum.Enum):
    LOW_RATE_BEC = "low-bec"
    LOW_RATE_BSC = "low-bsc"
    HIGH_RATE_BEC = "high-bec"
    HIGH_RATE_BSC = "high-bsc"


def capacity_gap_threshold(regime: Regime | str, R: float, eps: float) -> float:
    """Corruption probability a rate-``R`` code must handle to be eps-close to capacity."""
    regime = Regime(regime)
    if not 0.0 < R < 1.0:
        raise ValueError("R must lie in (0, 1)")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if regime is Regime.LOW_RATE_BEC:
        return min(max(1.0 - R * (1.0 + eps), 0.0), 1.0)
    if regime is Regime.HIGH_RATE_BEC:
        return min(max((1.0 - R) * (1.0 - eps), 0.0), 1.0)
    y = 1.0 - R * (1.0 + eps) if regime is Regime.LOW_RATE_BSC else (1.0 - R) * (1.0 - eps)
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"entropy target {y} outside [0, 1] for R={R}, eps={eps}")
    return min(inv_entropy(y), 0.5)


# -- Monte-Carlo plumbing ----------------------------------------------------------


def workers_from_env(default: int = 1) -> int:
    value = os.environ.get("RMLAB_THREADS")
    if not value:
        return default
    try:
        return max(1, int(value))
    except ValueError:
        return default


def _count_chunk(trial_fn: Callable[[np.random.Generator], bool], seed: int, trials: Iterable[int]) -> int:
    return sum(1 for t in trials if trial_fn(substream(seed, t)))


def count_successes(
    trial_fn: Callable[[np.random.Generator], bool],
    trials: int,
    seed: int,
    workers: int | None = None,
) -> int:
    """Number of trials ``t in range(trials)`` for which ``trial_fn(substream(seed, t))`` holds.

    With ``workers > 1`` the trial range is split into contiguous chunks run in
    a process pool (``trial_fn`` must then be picklable); counts are summed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers is None:
        workers = workers_from_env()
    if workers <= 1 or trials < 2 * workers:
        return _count_chunk(trial_fn, seed, range(trials))
    bounds = np.linspace(0, trials, workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_count_chunk, trial_fn, seed, range(int(a), int(b)))
            for a, b in zip(bounds[:-1], bounds[1:])
        ]
        return sum(f.result() for f in futures)


def halfwidth95(fraction: float, trials: int) -> float:
    """Normal-approximation 95% half-width ``1.96 sqrt(f(1-f)/trials)``."""
    return 1.96 * math.sqrt(fraction * (1.0 - fraction) / trials)
