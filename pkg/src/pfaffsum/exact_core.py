"""Prime-field arithmetic and exact dense linear algebra over F_p.

Dense matrices are stored as ``int64`` numpy arrays of canonical residues.
The modulus is capped below 2**31 so that a product of two residues fits in
63 bits and the fraction-free update ``pivot*row - factor*pivot_row`` never
overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_PRIME = 2147483647  # 2^31 - 1
SECOND_PRIME = 1073741789
MIN_GENERIC_PRIME = 2**20
MAX_PRIME = 2**31

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DomainError(ValueError):
    """Raised on an operation outside its mathematical domain."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p.

    ``allow_small`` lifts the ``p > 2^20`` requirement; small primes are only
    useful for hand-checkable examples, never for genericity claims.
    """

    p: int = DEFAULT_PRIME
    allow_small: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise DomainError(f"modulus must be an integer, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))
        if self.p >= MAX_PRIME:
            raise DomainError(f"modulus {self.p} must be below 2^31")
        if not is_prime(self.p):
            raise DomainError(f"modulus {self.p} is not prime")
        if self.p <= MIN_GENERIC_PRIME and not self.allow_small:
            raise DomainError(f"modulus {self.p} must exceed 2^20 for generic sampling")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.p, self)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DomainError("inverse of zero")
        return pow(a, -1, self.p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.p:
            raise DomainError(f"{self.value} is not a canonical residue mod {self.field.p}")

    def _coerce(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise DomainError("elements of different fields")
            return other.value
        return int(other) % self.field.p

    def __add__(self, other):
        return self.field(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.field(self.value - self._coerce(other))

    def __rsub__(self, other):
        return self.field(self._coerce(other) - self.value)

    def __mul__(self, other):
        return self.field(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.field(-self.value)

    def inv(self) -> FieldElement:
        return self.field(self.field.inv(self.value))

    def __truediv__(self, other):
        return self * self.field(self._coerce(other)).inv()

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field.p == other.field.p
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field.p))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"


@dataclass(frozen=True)
class DenseMatrixFp:
    """Row-major dense matrix of residues mod p."""

    entries: np.ndarray
    field: PrimeField

    def __post_init__(self) -> None:
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim != 2:
            raise DomainError("matrix entries must be two-dimensional")
        a = a % self.field.p
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], field: PrimeField) -> DenseMatrixFp:
        data = [[int(x) % field.p for x in r] for r in rows]
        ncols = len(data[0]) if data else 0
        return cls(np.array(data, dtype=np.int64).reshape(len(data), ncols), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: PrimeField) -> DenseMatrixFp:
        return cls(np.zeros((rows, cols), dtype=np.int64), field)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def transpose(self) -> DenseMatrixFp:
        return DenseMatrixFp(self.entries.T.copy(), self.field)

    def hstack(self, other: DenseMatrixFp) -> DenseMatrixFp:
        return DenseMatrixFp(np.hstack([self.entries, other.entries]), self.field)

    def __matmul__(self, other: DenseMatrixFp) -> DenseMatrixFp:
        return DenseMatrixFp(matmul_mod(self.entries, other.entries, self.field.p), self.field)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``a @ b mod p`` for residue matrices.

    Residues are split into 16-bit limbs so every limb product is below 2^31
    and every float64 dot product stays an exact integer below 2^53 for inner
    dimensions up to 2^21.  Exactness makes the result independent of the
    BLAS summation order.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] >= 2**21:
        raise DomainError("inner dimension too large for exact limb products")
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    a_lo, a_hi = (a & 0xFFFF).astype(np.float64), (a >> 16).astype(np.float64)
    b_lo, b_hi = (b & 0xFFFF).astype(np.float64), (b >> 16).astype(np.float64)
    ll = (a_lo @ b_lo).astype(np.int64) % p
    mid = ((a_lo @ b_hi).astype(np.int64) % p + (a_hi @ b_lo).astype(np.int64) % p) % p
    hh = (a_hi @ b_hi).astype(np.int64) % p
    return (hh * (2**32 % p) % p + mid * 2**16 % p + ll) % p


def rank(m: DenseMatrixFp) -> int:
    """Rank over F_p by fraction-free elimination.

    Columns are scanned in order; the pivot is the first remaining row with a
    nonzero entry.  The caller's matrix is left untouched.
    """
    p = m.field.p
    a = np.array(m.entries, dtype=np.int64, copy=True)
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        below = np.flatnonzero(a[r + 1:, c]) + r + 1
        if below.size:
            pv = a[r, c]
            factors = a[below, c][:, None]
            a[below, c:] = (pv * a[below, c:] - factors * a[r, c:]) % p
        r += 1
    return r


def det(m: DenseMatrixFp) -> int:
    """Determinant of a square matrix over F_p, as a canonical residue."""
    if m.rows != m.cols:
        raise DomainError("determinant of a non-square matrix")
    p = m.field.p
    a = np.array(m.entries, dtype=np.int64, copy=True)
    n = a.shape[0]
    result = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        piv = c + int(nz[0])
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            result = -result
        pv = int(a[c, c])
        result = result * pv % p
        inv = pow(pv, -1, p)
        below = np.flatnonzero(a[c + 1:, c]) + c + 1
        if below.size:
            factors = (a[below, c] * inv % p)[:, None]
            a[below, c:] = (a[below, c:] - factors * a[c, c:]) % p
    return result % p


class SpanBuilder:
    """Incrementally maintained reduced echelon basis of a subspace of F_p^dim.

    Feeding vectors in blocks gives the same rank as one elimination over the
    concatenation while reusing the work already done on earlier blocks.
    Blocks are split recursively; the bulk of the work happens in
    :func:`matmul_mod` products against the current basis.
    """

    BASE_ROWS = 48

    def __init__(self, dim: int, field: PrimeField):
        self.dim = dim
        self.field = field
        self._basis = np.zeros((0, dim), dtype=np.int64)
        self._pivots: list[int] = []
        self.columns_seen = 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.dim

    @property
    def basis(self) -> np.ndarray:
        return self._basis.copy()

    def copy(self) -> SpanBuilder:
        other = SpanBuilder(self.dim, self.field)
        other._basis = self._basis.copy()
        other._pivots = list(self._pivots)
        other.columns_seen = self.columns_seen
        return other

    def _reduce(self, v: np.ndarray) -> np.ndarray:
        # basis rows are the identity on the pivot columns, so one product clears them all
        if not self._pivots or v.shape[0] == 0:
            return v
        p = self.field.p
        return (v - matmul_mod(v[:, self._pivots], self._basis, p)) % p

    def _echelon(self, v: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced echelon form of a small block (rows already reduced by the basis)."""
        p = self.field.p
        rows, pivots = [], []
        for i in range(v.shape[0]):
            nz = np.flatnonzero(v[i])
            if nz.size == 0:
                continue
            piv = int(nz[0])
            row = v[i] * pow(int(v[i, piv]), -1, p) % p
            rest = np.flatnonzero(v[i + 1:, piv]) + i + 1
            if rest.size:
                v[rest] = (v[rest] - v[rest, piv][:, None] * row) % p
            for j, r in enumerate(rows):
                if r[piv]:
                    rows[j] = (r - r[piv] * row) % p
            rows.append(row)
            pivots.append(piv)
        if not rows:
            return np.zeros((0, self.dim), dtype=np.int64), []
        return np.array(rows, dtype=np.int64), pivots

    def _add_block(self, v: np.ndarray) -> None:
        if self.full or v.shape[0] == 0:
            return
        v = self._reduce(v)
        if v.shape[0] > self.BASE_ROWS:
            half = v.shape[0] // 2
            self._add_block(v[:half])
            self._add_block(v[half:])
            return
        new, piv = self._echelon(v)
        if not piv:
            return
        p = self.field.p
        if self._pivots:
            self._basis = (self._basis - matmul_mod(self._basis[:, piv], new, p)) % p
        self._basis = np.vstack([self._basis, new])
        self._pivots.extend(piv)

    def add(self, vectors: np.ndarray | Iterable[Sequence[int]]) -> int:
        """Add the rows of ``vectors``; returns the new rank."""
        v = np.array(vectors, dtype=np.int64, copy=True).reshape(-1, self.dim) % self.field.p
        self.columns_seen += v.shape[0]
        self._add_block(v)
        return self.rank

    def contains(self, vector: Sequence[int]) -> bool:
        v = self._reduce(np.array(vector, dtype=np.int64).reshape(1, self.dim) % self.field.p)
        return not v.any()
