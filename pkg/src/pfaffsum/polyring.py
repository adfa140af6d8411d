"""Homogeneous forms over F_p as dense coefficient vectors.

Monomials of degree ``d`` in ``n`` variables are indexed by the combinatorial
number system.  An exponent vector ``(e_1, ..., e_n)`` is sent to the strictly
increasing tuple ``c_i = e_1 + ... + e_i + (i - 1)`` for ``i = 1..n-1`` and
ranked colexicographically::

    index(e) = sum_i binom(c_i, i)

so ``x_n^d`` has index 0 and ``x_1^d`` has the largest index.

Random sampling uses SplitMix64 (64-bit state, increment
``0x9E3779B97F4A7C15``, mixing constants ``0xBF58476D1CE4E5B9`` and
``0x94D049BB133111EB`` with shifts 30, 27, 31).  A residue in ``[0, p)`` is
drawn from one 64-bit output ``z`` as ``(z * p) >> 64``, so every coefficient
consumes exactly one generator step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

import numpy as np

from .exact_core import DomainError, PrimeField

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def child_seed(seed: int, index: int) -> int:
    """Seed of the ``index``-th independent substream of ``seed``."""
    return _mix64((seed + (index + 1) * _GAMMA) & _MASK64) ^ _mix64(index & _MASK64)


class SeededRng:
    """SplitMix64 stream; identical seeds give identical sequences everywhere."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._state = self.seed
        self.steps = 0

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        self.steps += 1
        return _mix64(self._state)

    def uniform(self, p: int) -> int:
        return (self.next_u64() * p) >> 64

    def child(self, index: int) -> SeededRng:
        return SeededRng(child_seed(self.seed, index))


# --- monomial indexing -----------------------------------------------------


def basis_size(n: int, d: int) -> int:
    """dim R_d = binom(n - 1 + d, d)."""
    if n < 1:
        raise DomainError("need at least one variable")
    if d < 0:
        return 0
    return comb(n - 1 + d, d)


@lru_cache(maxsize=None)
def _binom_table(top: int, k: int) -> np.ndarray:
    t = np.zeros((top + 1, k + 1), dtype=np.int64)
    for c in range(top + 1):
        for i in range(k + 1):
            t[c, i] = comb(c, i)
    return t


def monomial_index(exponents: Sequence[int], d: int | None = None) -> int:
    e = [int(x) for x in exponents]
    if len(e) < 1 or any(x < 0 for x in e):
        raise DomainError(f"invalid exponent vector {exponents!r}")
    if d is not None and sum(e) != d:
        raise DomainError(f"exponents {e} do not sum to {d}")
    idx, acc = 0, 0
    for i in range(1, len(e)):
        acc += e[i - 1]
        idx += comb(acc + i - 1, i)
    return idx


def monomial_unrank(index: int, n: int, d: int) -> tuple[int, ...]:
    size = basis_size(n, d)
    if not 0 <= index < size:
        raise DomainError(f"index {index} out of range for n={n}, d={d} (size {size})")
    r = index
    cs = [0] * (n - 1)
    for i in range(n - 1, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= r:
            c += 1
        cs[i - 1] = c
        r -= comb(c, i)
    e = []
    prev = -1
    for c in cs:
        e.append(c - prev - 1)
        prev = c
    e.append(d - sum(e))
    return tuple(e)


def index_array(exps: np.ndarray) -> np.ndarray:
    """Vectorised :func:`monomial_index` over the rows of ``exps``."""
    exps = np.asarray(exps, dtype=np.int64)
    rows, n = exps.shape
    if n == 1 or rows == 0:
        return np.zeros(rows, dtype=np.int64)
    cs = np.cumsum(exps[:, : n - 1], axis=1) + np.arange(n - 1)
    table = _binom_table(int(cs.max()), n - 1)
    return sum(table[cs[:, i - 1], i] for i in range(1, n))


@lru_cache(maxsize=None)
def basis_exponents(n: int, d: int) -> np.ndarray:
    """Exponent vectors of the degree-``d`` basis, row ``i`` has index ``i``."""
    out = np.array([monomial_unrank(i, n, d) for i in range(basis_size(n, d))],
                   dtype=np.int64).reshape(-1, n)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def mul_table(n: int, d1: int, d2: int) -> np.ndarray:
    """``T[i, j]`` is the degree ``d1+d2`` index of monomial_i * monomial_j."""
    e1, e2 = basis_exponents(n, d1), basis_exponents(n, d2)
    sums = (e1[:, None, :] + e2[None, :, :]).reshape(-1, n)
    t = index_array(sums).reshape(len(e1), len(e2))
    t.setflags(write=False)
    return t


# --- forms -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomogeneousPoly:
    """A form of degree ``d`` in ``n`` variables; the zero form keeps its slot degree."""

    n: int
    d: int
    coeffs: np.ndarray
    field: PrimeField

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=np.int64) % self.field.p
        if c.shape != (basis_size(self.n, self.d),):
            raise DomainError(
                f"coefficient vector of length {c.size} does not fit n={self.n}, d={self.d}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, n: int, d: int, field: PrimeField) -> HomogeneousPoly:
        return cls(n, d, np.zeros(basis_size(n, d), dtype=np.int64), field)

    @classmethod
    def constant(cls, n: int, c: int, field: PrimeField) -> HomogeneousPoly:
        return cls(n, 0, np.array([c], dtype=np.int64), field)

    @classmethod
    def variable(cls, n: int, i: int, field: PrimeField) -> HomogeneousPoly:
        """The variable ``x_{i+1}`` (zero-based ``i``)."""
        e = [0] * n
        e[i] = 1
        return cls.from_terms(n, 1, {tuple(e): 1}, field)

    @classmethod
    def from_terms(cls, n: int, d: int, terms: Mapping[tuple[int, ...], int],
                   field: PrimeField) -> HomogeneousPoly:
        c = np.zeros(basis_size(n, d), dtype=np.int64)
        for e, v in terms.items():
            if len(e) != n:
                raise DomainError(f"exponent vector {e} has wrong length for n={n}")
            c[monomial_index(e, d)] += int(v) % field.p
        return cls(n, d, c, field)

    def _check(self, other: HomogeneousPoly, same_degree: bool = True) -> None:
        if self.n != other.n or self.field.p != other.field.p:
            raise DomainError("forms live in different rings")
        if same_degree and self.d != other.d:
            raise DomainError(f"degree mismatch: {self.d} vs {other.d}")

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return (self.n, self.d, self.field.p) == (other.n, other.d, other.field.p) and \
            bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.n, self.d, self.field.p, self.coeffs.tobytes()))

    def __add__(self, other: HomogeneousPoly) -> HomogeneousPoly:
        self._check(other)
        return HomogeneousPoly(self.n, self.d, self.coeffs + other.coeffs, self.field)

    def __sub__(self, other: HomogeneousPoly) -> HomogeneousPoly:
        self._check(other)
        return HomogeneousPoly(self.n, self.d, self.coeffs - other.coeffs, self.field)

    def __neg__(self) -> HomogeneousPoly:
        return HomogeneousPoly(self.n, self.d, -self.coeffs, self.field)

    def scale(self, c: int) -> HomogeneousPoly:
        c = int(c) % self.field.p
        return HomogeneousPoly(self.n, self.d, self.coeffs * c, self.field)

    def __mul__(self, other: HomogeneousPoly | int) -> HomogeneousPoly:
        if not isinstance(other, HomogeneousPoly):
            return self.scale(int(other))
        self._check(other, same_degree=False)
        p = self.field.p
        f, g = self, other
        if basis_size(f.n, f.d) > basis_size(g.n, g.d):
            f, g = g, f
        table = mul_table(f.n, f.d, g.d)
        out = np.zeros(basis_size(f.n, f.d + g.d), dtype=np.int64)
        # each table row is injective, so fancy-index accumulation is safe
        for i in np.flatnonzero(f.coeffs):
            out[table[i]] += f.coeffs[i] * g.coeffs % p
        return HomogeneousPoly(f.n, f.d + g.d, out, self.field)

    __rmul__ = __mul__

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.n:
            raise DomainError(f"point has {len(point)} coordinates, expected {self.n}")
        p = self.field.p
        exps = basis_exponents(self.n, self.d)
        vals = np.ones(len(exps), dtype=np.int64)
        for v in range(self.n):
            powers = np.array([pow(int(point[v]), e, p) for e in range(self.d + 1)],
                              dtype=np.int64)
            vals = vals * powers[exps[:, v]] % p
        return int(np.sum(vals * self.coeffs % p) % p)

    def render(self) -> str:
        terms = []
        for i in np.flatnonzero(self.coeffs):
            e = monomial_unrank(int(i), self.n, self.d)
            mono = "*".join(f"x{v + 1}" + (f"^{k}" if k > 1 else "")
                            for v, k in enumerate(e) if k)
            c = int(self.coeffs[i])
            terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"HomogeneousPoly(n={self.n}, d={self.d}, {self.render()})"


def poly_add(f: HomogeneousPoly, g: HomogeneousPoly) -> HomogeneousPoly:
    return f + g


def poly_scale(c: int, f: HomogeneousPoly) -> HomogeneousPoly:
    return f.scale(c)


def poly_mul(f: HomogeneousPoly, g: HomogeneousPoly) -> HomogeneousPoly:
    return f * g


def evaluate(f: HomogeneousPoly, point: Sequence[int]) -> int:
    return f.evaluate(point)


def random_form(n: int, d: int, rng: SeededRng, field: PrimeField) -> HomogeneousPoly:
    """Uniform random form; consumes exactly ``basis_size(n, d)`` generator steps."""
    if d < 0:
        raise DomainError("negative degree")
    coeffs = [rng.uniform(field.p) for _ in range(basis_size(n, d))]
    return HomogeneousPoly(n, d, np.array(coeffs, dtype=np.int64), field)
