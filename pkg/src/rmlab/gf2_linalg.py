"""Dense GF(2) linear algebra on bit-packed rows.

A row is stored as a Python ``int`` whose bit ``j`` is column ``j``.  Python
ints are arrays of machine words, so XOR / AND / popcount on a row run as
word streams, which is what the elimination inner loops need.

All values are immutable; every operation returns a new object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def _mask(n: int) -> int:
    return (1 << n) - 1


def _parity(x: int) -> int:
    return x.bit_count() & 1


def random_bits(n: int, rng: np.random.Generator) -> int:
    """Uniform random ``n``-bit integer drawn from ``rng``."""
    if n <= 0:
        return 0
    nbytes = (n + 7) // 8
    return int.from_bytes(rng.bytes(nbytes), "little") & _mask(n)


@dataclass(frozen=True)
class BitVector:
    """Length-``len`` vector over GF(2); bit ``i`` of ``bits`` is coordinate ``i``."""

    len: int
    bits: int = 0

    def __post_init__(self):
        if self.len < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.len:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_list(cls, values: Iterable[int]) -> BitVector:
        values = list(values)
        bits = 0
        for i, v in enumerate(values):
            if v & 1:
                bits |= 1 << i
        return cls(len(values), bits)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> BitVector:
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise IndexError(f"index {i} out of range for length {n}")
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def zeros(cls, n: int) -> BitVector:
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> BitVector:
        return cls(n, _mask(n))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.len:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.len

    def __iter__(self):
        return (self[i] for i in range(self.len))

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.len)]

    def _check(self, other: BitVector) -> None:
        if self.len != other.len:
            raise ValueError(f"length mismatch: {self.len} vs {other.len}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.len, self.bits ^ other.bits)

    __add__ = __xor__

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.len, self.bits & other.bits)

    def dot(self, other: BitVector) -> int:
        self._check(other)
        return _parity(self.bits & other.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class BitMatrix:
    """``nrows`` x ``ncols`` matrix over GF(2) stored as packed rows."""

    nrows: int
    ncols: int
    rows: tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(rows)}")
        for r in rows:
            if r < 0 or r >> self.ncols:
                raise ValueError("row has bits beyond ncols")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int] | str], ncols: int | None = None) -> BitMatrix:
        """Build from 0/1 sequences or '0'/'1' strings (column 0 first)."""
        packed = []
        width = ncols
        for row in rows:
            if isinstance(row, str):
                row = [int(c) for c in row]
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError("ragged rows")
            packed.append(BitVector.from_list(row).bits)
        return cls(len(packed), width or 0, tuple(packed))

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], ncols: int | None = None) -> BitMatrix:
        if ncols is None:
            if not vectors:
                raise ValueError("ncols required for an empty row list")
            ncols = vectors[0].len
        for v in vectors:
            if v.len != ncols:
                raise ValueError("vector length mismatch")
        return cls(len(vectors), ncols, tuple(v.bits for v in vectors))

    @classmethod
    def from_array(cls, arr) -> BitMatrix:
        a = np.asarray(arr, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        return cls.from_rows(a.tolist(), ncols=a.shape[1])

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(nrows, ncols, (0,) * nrows)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in BitVector(self.ncols, r).support():
                out[i, j] = 1
        return out

    def row(self, i: int) -> BitVector:
        return BitVector(self.ncols, self.rows[i])

    def column(self, j: int) -> BitVector:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        bits = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                bits |= 1 << i
        return BitVector(self.nrows, bits)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return (self.rows[i] >> j) & 1

    def to_text(self) -> str:
        return format_matrix(self)

    def __str__(self) -> str:
        return "\n".join(str(self.row(i)) for i in range(self.nrows))


# -- text fixture format ----------------------------------------------------


def format_matrix(M: BitMatrix) -> str:
    """Serialize as ``"rows cols"`` followed by one '0'/'1' string per row."""
    lines = [f"{M.nrows} {M.ncols}"]
    lines.extend(str(M.row(i)) for i in range(M.nrows))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> BitMatrix:
    """Inverse of :func:`format_matrix`; blank lines and ``#`` comments are ignored."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        nrows, ncols = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad header line {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != nrows:
        raise ValueError(f"header says {nrows} rows, found {len(body)}")
    for ln in body:
        if len(ln) != ncols or set(ln) - {"0", "1"}:
            raise ValueError(f"bad row {ln!r}")
    return BitMatrix.from_rows(body, ncols=ncols)


# -- elimination ------------------------------------------------------------


def rank(M: BitMatrix) -> int:
    """Rank over GF(2)."""
    basis: dict[int, int] = {}
    for v in M.rows:
        while v:
            h = v.bit_length() - 1
            b = basis.get(h)
            if b is None:
                basis[h] = v
                break
            v ^= b
    return len(basis)


def _rref_rows(rows: list[int], pivot_limit: int) -> list[int]:
    """In-place RREF of ``rows`` with pivots searched in columns < pivot_limit."""
    pivots = []
    prow = 0
    n = len(rows)
    for col in range(pivot_limit):
        if prow == n:
            break
        bit = 1 << col
        found = -1
        for i in range(prow, n):
            if rows[i] & bit:
                found = i
                break
        if found < 0:
            continue
        rows[prow], rows[found] = rows[found], rows[prow]
        p = rows[prow]
        for i in range(n):
            if i != prow and rows[i] & bit:
                rows[i] ^= p
        pivots.append(col)
        prow += 1
    return pivots


def rref(M: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row-echelon form and the (strictly increasing) pivot columns."""
    rows = list(M.rows)
    pivots = _rref_rows(rows, M.ncols)
    return BitMatrix(M.nrows, M.ncols, tuple(rows)), pivots


def solve_any(A: BitMatrix, b: BitVector) -> BitVector | None:
    """Some ``x`` with ``A x = b`` (free variables zero), or ``None`` if inconsistent."""
    if b.len != A.nrows:
        raise ValueError(f"rhs length {b.len} != rows {A.nrows}")
    n = A.ncols
    rows = [r | (((b.bits >> i) & 1) << n) for i, r in enumerate(A.rows)]
    pivots = _rref_rows(rows, n)
    for r in rows[len(pivots):]:
        if r >> n:
            return None
    x = 0
    for i, p in enumerate(pivots):
        if rows[i] >> n:
            x |= 1 << p
    return BitVector(n, x)


def kernel_basis(A: BitMatrix) -> BitMatrix:
    """Rows form a basis of ``{x : A x = 0}``."""
    R, pivots = rref(A)
    pivot_set = set(pivots)
    basis = []
    for f in range(A.ncols):
        if f in pivot_set:
            continue
        v = 1 << f
        for i, p in enumerate(pivots):
            if (R.rows[i] >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix(len(basis), A.ncols, tuple(basis))


def span_codewords(G: BitMatrix) -> list[int]:
    """All ``2**nrows`` combinations of the rows, indexed by message bits."""
    words = [0]
    for r in G.rows:
        words += [w ^ r for w in words]
    return words


# -- products and selections ------------------------------------------------


def mat_mul(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    if A.ncols != B.nrows:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    out = []
    brows = B.rows
    for a in A.rows:
        acc = 0
        while a:
            low = a & -a
            acc ^= brows[low.bit_length() - 1]
            a ^= low
        out.append(acc)
    return BitMatrix(A.nrows, B.ncols, tuple(out))


def mat_vec(A: BitMatrix, x: BitVector) -> BitVector:
    if A.ncols != x.len:
        raise ValueError(f"cannot multiply {A.shape} by vector of length {x.len}")
    bits = 0
    xb = x.bits
    for i, r in enumerate(A.rows):
        if (r & xb).bit_count() & 1:
            bits |= 1 << i
    return BitVector(A.nrows, bits)


def vec_mat(x: BitVector, A: BitMatrix) -> BitVector:
    """Row vector times matrix: XOR of the rows selected by ``x``."""
    if x.len != A.nrows:
        raise ValueError(f"cannot multiply vector of length {x.len} by {A.shape}")
    acc = 0
    for i in x.support():
        acc ^= A.rows[i]
    return BitVector(A.ncols, acc)


def transpose(A: BitMatrix) -> BitMatrix:
    cols = [0] * A.ncols
    for i, r in enumerate(A.rows):
        bit = 1 << i
        while r:
            low = r & -r
            cols[low.bit_length() - 1] |= bit
            r ^= low
    return BitMatrix(A.ncols, A.nrows, tuple(cols))


def select_columns(A: BitMatrix, S: Sequence[int]) -> BitMatrix:
    """Columns of ``A`` listed in ``S``, in that order."""
    S = list(S)
    for j in S:
        if not 0 <= j < A.ncols:
            raise IndexError(f"column {j} out of range for {A.ncols} columns")
    out = []
    for r in A.rows:
        v = 0
        for t, j in enumerate(S):
            if (r >> j) & 1:
                v |= 1 << t
        out.append(v)
    return BitMatrix(A.nrows, len(S), tuple(out))


def select_rows(A: BitMatrix, S: Sequence[int]) -> BitMatrix:
    S = list(S)
    for i in S:
        if not 0 <= i < A.nrows:
            raise IndexError(f"row {i} out of range for {A.nrows} rows")
    return BitMatrix(len(S), A.ncols, tuple(A.rows[i] for i in S))


def stack(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    if A.ncols != B.ncols:
        raise ValueError("column count mismatch")
    return BitMatrix(A.nrows + B.nrows, A.ncols, A.rows + B.rows)


def hadamard_rows(u: BitVector, v: BitVector) -> BitVector:
    """Coordinate-wise product ``u_i * v_i``."""
    if u.len != v.len:
        raise ValueError(f"length mismatch: {u.len} vs {v.len}")
    return BitVector(u.len, u.bits & v.bits)


def random_matrix(nrows: int, ncols: int, rng: np.random.Generator) -> BitMatrix:
    return BitMatrix(nrows, ncols, tuple(random_bits(ncols, rng) for _ in range(nrows)))


def random_invertible(m: int, rng: np.random.Generator) -> BitMatrix:
    """Random ``m`` x ``m`` invertible matrix by rejection sampling."""
    if m < 1:
        raise ValueError("m must be >= 1")
    while True:
        M = random_matrix(m, m, rng)
        if rank(M) == m:
            return M
