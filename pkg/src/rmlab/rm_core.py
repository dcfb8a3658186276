"""Reed-Muller code construction over GF(2).

Conventions used everywhere in the package:

* A point ``u`` of F_2^m is an integer ``j`` in ``[0, 2**m)`` with
  ``x_i = bit (i - 1)`` of ``j``; column ``j`` of every evaluation matrix is
  the point ``j``.
* A monomial is a bitmask over the variables (bit ``i - 1`` set means ``x_i``
  is present).  Rows of ``E(m, r)`` are listed in the canonical order:
  ascending degree, ties by ascending bitmask.  :func:`tensor_order` gives
  the permutation to the bitmask ("lexicographic" / Kronecker) order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

from ._budget import check_budget
from .gf2_linalg import BitMatrix, BitVector, mat_mul, transpose, vec_mat

DEFAULT_MAX_CELLS = 1 << 26


def binom_sum(m: int, r: int) -> int:
    """``C(m, <= r) = sum_{i=0}^{r} C(m, i)``; zero for negative ``r``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if r > m:
        raise ValueError(f"r={r} exceeds m={m}")
    if r < 0:
        return 0
    return sum(comb(m, i) for i in range(r + 1))


def binom_sum_ext(n: int, r: int) -> int:
    """``C(n, <= r)`` with the usual extension ``C(n, i) = 0`` for ``i > n``."""
    if n < 0 or r < 0:
        return 0
    return sum(comb(n, i) for i in range(min(r, n) + 1))


@dataclass(frozen=True, order=True)
class Monomial:
    """Product of the variables whose bits are set in ``vars``."""

    vars: int

    @property
    def degree(self) -> int:
        return self.vars.bit_count()

    def variables(self) -> list[int]:
        """1-based variable indices."""
        return [i + 1 for i in range(self.vars.bit_length()) if (self.vars >> i) & 1]

    def __call__(self, point: int) -> int:
        return int(self.vars & point == self.vars)

    def __str__(self) -> str:
        if not self.vars:
            return "1"
        return "".join(f"x{i}" for i in self.variables())


@dataclass(frozen=True)
class RmCode:
    m: int
    r: int

    def __post_init__(self):
        if self.m < 0 or not 0 <= self.r <= self.m:
            raise ValueError(f"need 0 <= r <= m, got m={self.m}, r={self.r}")

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return binom_sum(self.m, self.r)

    @property
    def d(self) -> int:
        return 1 << (self.m - self.r)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def generator(self) -> BitMatrix:
        return eval_matrix(self.m, self.r)

    def parity_check(self) -> BitMatrix:
        return parity_check(self)

    def __str__(self) -> str:
        return f"RM({self.m},{self.r})"


@lru_cache(maxsize=None)
def _monomial_masks(m: int, r: int) -> tuple[int, ...]:
    masks = []
    for deg in range(r + 1):
        group = []
        for idx in combinations(range(m), deg):
            mask = 0
            for i in idx:
                mask |= 1 << i
            group.append(mask)
        masks.extend(sorted(group))
    return tuple(masks)


def monomials(m: int, r: int) -> list[Monomial]:
    """Monomials of degree <= r in canonical order."""
    if m < 0 or r > m:
        raise ValueError(f"need 0 <= r <= m, got m={m}, r={r}")
    if r < 0:
        return []
    return [Monomial(v) for v in _monomial_masks(m, r)]


def tensor_order(m: int, r: int) -> list[int]:
    """Permutation ``p`` with ``rows[p[i]]`` the i-th monomial in bitmask order.

    Applying it to ``eval_matrix(m, m)`` gives the Kronecker power of
    ``[[1, 1], [0, 1]]``.
    """
    masks = _monomial_masks(m, r)
    return sorted(range(len(masks)), key=lambda i: masks[i])


@lru_cache(maxsize=64)
def _variable_rows(m: int) -> tuple[int, ...]:
    """Truth table of each variable ``x_{i+1}`` packed over the 2**m points."""
    n = 1 << m
    out = []
    for i in range(m):
        half = 1 << i
        block = ((1 << half) - 1) << half  # zeros then ones, period 2**(i+1)
        row = 0
        for start in range(0, n, 2 * half):
            row |= block << start
        out.append(row)
    return tuple(out)


def monomial_row(m: int, mask: int) -> int:
    """Truth table of the monomial ``mask`` as a packed row of length 2**m."""
    row = (1 << (1 << m)) - 1
    var_rows = _variable_rows(m)
    while mask:
        low = mask & -mask
        row &= var_rows[low.bit_length() - 1]
        mask ^= low
    return row


def eval_matrix(m: int, r: int, max_cells: int | None = DEFAULT_MAX_CELLS) -> BitMatrix:
    """``E(m, r)``: k x 2**m, entry (f, j) = f(j)."""
    if m < 0 or r > m:
        raise ValueError(f"need r <= m, got m={m}, r={r}")
    n = 1 << m
    if r < 0:
        return BitMatrix(0, n, ())
    masks = _monomial_masks(m, r)
    check_budget("eval_matrix cells", len(masks) * n, max_cells)
    return BitMatrix(len(masks), n, tuple(monomial_row(m, v) for v in masks))


def eval_vector(u: int, m: int, r: int) -> BitVector:
    """``u^r``: values of every monomial of degree <= r at the point ``u``."""
    if not 0 <= u < (1 << m):
        raise ValueError(f"point {u} not in F_2^{m}")
    masks = _monomial_masks(m, r) if r >= 0 else ()
    bits = 0
    for i, v in enumerate(masks):
        if v & u == v:
            bits |= 1 << i
    return BitVector(len(masks), bits)


def generator_tensor(m: int, r: int) -> BitMatrix:
    """``G(m, r)``: rows of ``[[1,1],[0,1]]^{(x)m}`` with weight >= 2**(m-r).

    Built with the block recursion ``G(m) = [[G(m-1), G(m-1)], [0, G(m-1)]]``.
    """
    if m < 0 or not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got m={m}, r={r}")
    rows = [1]
    width = 1
    for _ in range(m):
        top = [g | (g << width) for g in rows]
        bottom = [g << width for g in rows]
        rows = top + bottom
        width *= 2
    threshold = 1 << (m - r)
    kept = [g for g in rows if g.bit_count() >= threshold]
    return BitMatrix(len(kept), width, tuple(kept))


def parity_check(code: RmCode) -> BitMatrix:
    """``E(m, m - r - 1)``; a 0 x n matrix for RM(m, m)."""
    return eval_matrix(code.m, code.m - code.r - 1)


def point_matrix(m: int, points=None) -> BitMatrix:
    """The m x s matrix whose columns are ``points`` (default: all of F_2^m)."""
    if points is None:
        points = range(1 << m)
    points = list(points)
    rows = []
    for i in range(m):
        v = 0
        for t, p in enumerate(points):
            if (p >> i) & 1:
                v |= 1 << t
        rows.append(v)
    return BitMatrix(m, len(points), tuple(rows))


def tensor_power(H: BitMatrix, ell: int, max_rows: int | None = 1 << 20) -> BitMatrix:
    """``H^{(x)ell}``: Hadamard products of every subset of <= ell rows.

    Row order: the empty product (all ones) first, then subsets by size and
    lexicographically within a size.  Duplicate rows are kept.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    top = min(ell, H.nrows)
    count = sum(comb(H.nrows, j) for j in range(top + 1))
    check_budget("tensor_power rows", count, max_rows)
    full = (1 << H.ncols) - 1
    out = [full]
    for j in range(1, top + 1):
        for idx in combinations(range(H.nrows), j):
            acc = full
            for i in idx:
                acc &= H.rows[i]
            out.append(acc)
    return BitMatrix(len(out), H.ncols, tuple(out))


def encode(code: RmCode, message: BitVector) -> BitVector:
    """Codeword ``message^t . E(m, r)``; message coordinates follow the canonical monomial order."""
    if message.len != code.k:
        raise ValueError(f"message length {message.len} != k={code.k}")
    return vec_mat(message, code.generator())


def duality_residual(m: int, r: int) -> BitMatrix:
    """``E(m, m-r-1) E(m, r)^t``, which is the zero matrix."""
    return mat_mul(eval_matrix(m, m - r - 1), transpose(eval_matrix(m, r)))
