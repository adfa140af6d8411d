"""Skew-symmetric matrices of forms and their (submaximal) pfaffians.

Pfaffians are expanded along the first surviving row,

    Pf(M) = sum_{j >= 2} (-1)^j m_1j Pf(M with rows/cols 1, j erased),

with the recursion memoised on the bitmask of surviving indices.  With that
sign convention the 2x2 block ``((0, f), (-f, 0))`` has pfaffian ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .degree_matrix import DegreeMatrix
from .exact_core import DenseMatrixFp, DomainError, PrimeField, det
from .polyring import HomogeneousPoly, SeededRng, basis_size, random_form

MAX_SIZE = 16


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True, eq=False)
class SkewPolyMatrix:
    """Skew-symmetric matrix of forms; only the strict upper triangle is stored."""

    A: DegreeMatrix
    n: int
    field: PrimeField
    upper: Mapping[tuple[int, int], HomogeneousPoly] = field(repr=False)

    def __post_init__(self) -> None:
        m = self.A.m
        for i in range(m):
            for j in range(i + 1, m):
                f = self.upper.get((i, j))
                if f is None:
                    raise DomainError(f"missing entry ({i + 1},{j + 1})")
                if f.n != self.n or f.field.p != self.field.p:
                    raise DomainError(f"entry ({i + 1},{j + 1}) lives in a different ring")
                if f.d != self.A[i, j]:
                    raise DomainError(
                        f"entry ({i + 1},{j + 1}) has degree {f.d}, degree matrix says {self.A[i, j]}")
        object.__setattr__(self, "upper", dict(self.upper))

    @property
    def m(self) -> int:
        return self.A.m

    def entry(self, i: int, j: int) -> HomogeneousPoly:
        if i == j:
            return HomogeneousPoly.zero(self.n, self.A[i, i], self.field)
        if i < j:
            return self.upper[(i, j)]
        return -self.upper[(j, i)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewPolyMatrix):
            return NotImplemented
        return (self.A == other.A and self.n == other.n and self.field.p == other.field.p
                and self.upper == other.upper)

    def evaluate(self, point: Sequence[int]) -> np.ndarray:
        """The scalar skew matrix ``M(point)`` mod p."""
        p = self.field.p
        s = np.zeros((self.m, self.m), dtype=np.int64)
        for (i, j), f in self.upper.items():
            v = f.evaluate(point)
            s[i, j] = v
            s[j, i] = -v % p
        return s

    def erase(self, indices) -> SkewPolyMatrix:
        drop = set(indices)
        keep = [i for i in range(self.m) if i not in drop]
        return self.permute(keep, self.A.erase(drop))

    def permute(self, perm: Sequence[int], A: DegreeMatrix | None = None) -> SkewPolyMatrix:
        """Matrix with ``new[a][b] = old[perm[a]][perm[b]]`` (``perm`` may drop indices)."""
        if A is None:
            A = self.A.permute(perm)
        upper = {(a, b): self.entry(perm[a], perm[b])
                 for a in range(len(perm)) for b in range(a + 1, len(perm))}
        return SkewPolyMatrix(A, self.n, self.field, upper)

    def swap(self, i: int, j: int) -> SkewPolyMatrix:
        perm = list(range(self.m))
        perm[i], perm[j] = perm[j], perm[i]
        return self.permute(perm)

    def multiply_first(self, L: HomogeneousPoly) -> SkewPolyMatrix:
        """Multiply the first row and column by ``L``."""
        diag = list(self.A.diagonal)
        diag[0] += 2 * L.d
        A = DegreeMatrix.from_diagonal(diag)
        upper = {(i, j): (f * L if i == 0 else f) for (i, j), f in self.upper.items()}
        return SkewPolyMatrix(A, self.n, self.field, upper)

    def to_json(self) -> dict:
        return {
            "A": [list(r) for r in self.A.entries],
            "n": self.n,
            "prime": self.field.p,
            "entries": {f"{i + 1},{j + 1}": [int(c) for c in f.coeffs]
                        for (i, j), f in sorted(self.upper.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> SkewPolyMatrix:
        A = DegreeMatrix(tuple(tuple(r) for r in obj["A"]))
        fld = PrimeField(obj["prime"], allow_small=True)
        n = int(obj["n"])
        upper = {}
        for key, coeffs in obj["entries"].items():
            i, j = (int(x) - 1 for x in key.split(","))
            upper[(i, j)] = HomogeneousPoly(n, A[i, j], np.array(coeffs, dtype=np.int64), fld)
        return cls(A, n, fld, upper)


def random_skew(A: DegreeMatrix, n: int, rng: SeededRng, field: PrimeField) -> SkewPolyMatrix:
    """Independent random entries, drawn row by row along the upper triangle."""
    upper = {(i, j): random_form(n, A[i, j], rng, field)
             for i in range(A.m) for j in range(i + 1, A.m)}
    return SkewPolyMatrix(A, n, field, upper)


class _PolyPfaffian:
    """Per-call memo table for pfaffians of principal submatrices of ``M``."""

    def __init__(self, M: SkewPolyMatrix):
        self.M = M
        self.memo: dict[int, HomogeneousPoly] = {}
        self.diag = M.A.diagonal

    def __call__(self, mask: int) -> HomogeneousPoly:
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        M = self.M
        idx = _bits(mask)
        if len(idx) % 2:
            raise DomainError(f"pfaffian of odd size {len(idx)}")
        degree = sum(self.diag[i] for i in idx) // 2
        if not idx:
            result = HomogeneousPoly.constant(M.n, 1, M.field)
        else:
            first = idx[0]
            coeffs = np.zeros(basis_size(M.n, degree), dtype=np.int64)
            for t, j in enumerate(idx[1:]):
                f = M.upper[(first, j)]
                if f.is_zero():
                    continue
                term = f * self(mask & ~(1 << first) & ~(1 << j))
                coeffs = coeffs - term.coeffs if t % 2 else coeffs + term.coeffs
            result = HomogeneousPoly(M.n, degree, coeffs, M.field)
        self.memo[mask] = result
        return result


def pfaffian(M: SkewPolyMatrix) -> HomogeneousPoly:
    if M.m % 2:
        raise DomainError(f"pfaffian needs even size, got {M.m}")
    return _PolyPfaffian(M)((1 << M.m) - 1)


def submaximal_pfaffians(M: SkewPolyMatrix) -> dict:
    """Pfaffians of the principal submatrices of size ``m - 2`` (even ``m``,
    keyed by ``(i, j)``) or ``m - 1`` (odd ``m``, keyed by ``i``)."""
    pf = _PolyPfaffian(M)
    full = (1 << M.m) - 1
    if M.m % 2 == 0:
        return {(i, j): pf(full & ~(1 << i) & ~(1 << j))
                for i in range(M.m) for j in range(i + 1, M.m)}
    return {i: pf(full & ~(1 << i)) for i in range(M.m)}


def pfaffian_scalar(S: np.ndarray | Sequence[Sequence[int]], p: int) -> int:
    """Pfaffian of a skew matrix of residues by the same memoised expansion."""
    S = [[int(x) % p for x in row] for row in S]
    m = len(S)
    if m % 2:
        raise DomainError(f"pfaffian needs even size, got {m}")
    memo: dict[int, int] = {0: 1}

    def pf(mask: int) -> int:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        idx = _bits(mask)
        first = idx[0]
        total = 0
        for t, j in enumerate(idx[1:]):
            a = S[first][j]
            if a:
                term = a * pf(mask & ~(1 << first) & ~(1 << j))
                total = total - term if t % 2 else total + term
        memo[mask] = total % p
        return memo[mask]

    return pf((1 << m) - 1)


@dataclass
class IdentityCheck:
    ok: bool
    trials: int
    point: tuple[int, ...] | None = None
    reason: str = ""


def pfaffian_identity_check(M: SkewPolyMatrix, trials: int, rng: SeededRng) -> IdentityCheck:
    """Evaluate at random points and compare against scalar pfaffian and determinant.

    At each point ``P`` checks ``Pf(M)(P) = Pf(M(P))``, ``Pf(M(P))^2 = det M(P)``
    and the first-row expansion through the submaximal pfaffians at ``P``.
    """
    if M.m % 2:
        raise DomainError(f"pfaffian needs even size, got {M.m}")
    p = M.field.p
    F = pfaffian(M)
    subs = submaximal_pfaffians(M) if M.m >= 2 else {}
    for t in range(trials):
        point = tuple(rng.uniform(p) for _ in range(M.n))
        S = M.evaluate(point)
        value = F.evaluate(point)
        scalar = pfaffian_scalar(S, p)
        if value != scalar:
            return IdentityCheck(False, t + 1, point, f"Pf(M)(P) = {value} but Pf(M(P)) = {scalar}")
        d = det(DenseMatrixFp(S, M.field))
        if scalar * scalar % p != d:
            return IdentityCheck(False, t + 1, point, f"Pf^2 = {scalar * scalar % p} but det = {d}")
        if M.m:
            expansion = sum((1 if j % 2 else -1) * int(S[0, j]) * subs[(0, j)].evaluate(point)
                            for j in range(1, M.m)) % p
            if expansion != value:
                return IdentityCheck(False, t + 1, point,
                                     f"first-row expansion gives {expansion}, Pf gives {value}")
    return IdentityCheck(True, trials)
