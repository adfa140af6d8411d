"""Symmetric homogeneous degree matrices.

A symmetric matrix with ``a_ij + a_lm = a_im + a_lj`` is determined by its
diagonal through ``a_ij = (a_ii + a_jj) / 2``; the full grid is still stored
so that erasure and display stay trivial and validation can test the
redundancy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class DegreeMatrixError(ValueError):
    pass


def validate(matrix: Sequence[Sequence[int]]) -> str | None:
    """Return ``None`` if ``matrix`` is a valid degree matrix, else a report.

    The report names the first violated identity together with its
    (one-based) indices.
    """
    m = len(matrix)
    if m == 0:
        return "empty matrix"
    for i, row in enumerate(matrix):
        if len(row) != m:
            return f"row {i + 1} has length {len(row)}, expected {m}"
        for j, x in enumerate(row):
            if int(x) != x:
                return f"entry ({i + 1},{j + 1}) = {x!r} is not an integer"
            if x < 0:
                return f"negative entry a_{i + 1}{j + 1} = {x}"
    for i in range(m):
        for j in range(i + 1, m):
            if matrix[i][j] != matrix[j][i]:
                return (f"symmetry: a_{i + 1}{j + 1} = {matrix[i][j]} != "
                        f"a_{j + 1}{i + 1} = {matrix[j][i]}")
    # for symmetric matrices the four-index identity reduces to a_ij = (a_ii + a_jj)/2
    for i in range(m):
        for j in range(m):
            if 2 * matrix[i][j] != matrix[i][i] + matrix[j][j]:
                return (f"homogeneity: a_{i + 1}{j + 1} + a_{j + 1}{i + 1} = "
                        f"{matrix[i][j] + matrix[j][i]} != a_{i + 1}{i + 1} + "
                        f"a_{j + 1}{j + 1} = {matrix[i][i] + matrix[j][j]}")
    if m % 2 == 0 and sum(matrix[i][i] for i in range(m)) % 2:
        return "even-size matrix with odd trace"
    return None


def homogeneity_violation(matrix: Sequence[Sequence[int]]) -> tuple[int, int, int, int] | None:
    """Brute-force search of ``a_ij + a_lm = a_im + a_lj`` over all index quadruples."""
    m = len(matrix)
    for i in range(m):
        for j in range(m):
            for l in range(m):  # noqa: E741
                for k in range(m):
                    if matrix[i][j] + matrix[l][k] != matrix[i][k] + matrix[l][j]:
                        return (i, j, l, k)
    return None


@dataclass(frozen=True)
class DegreeMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        report = validate(entries)
        if report is not None:
            raise DegreeMatrixError(report)

    @classmethod
    def from_diagonal(cls, diag: Iterable[int]) -> DegreeMatrix:
        diag = [int(x) for x in diag]
        if len(diag) < 1:
            raise DegreeMatrixError("empty diagonal")
        if len({x % 2 for x in diag}) > 1:
            raise DegreeMatrixError(f"diagonal {diag} mixes parities")
        return cls(tuple(tuple((a + b) // 2 for b in diag) for a in diag))

    @classmethod
    def constant(cls, m: int, b: int) -> DegreeMatrix:
        return cls.from_diagonal([b] * m)

    @classmethod
    def from_json(cls, obj: dict | str) -> DegreeMatrix:
        """Accepts ``{"diag": [...]}`` or ``{"matrix": [[...], ...]}``."""
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict):
            raise DegreeMatrixError("expected a JSON object with 'diag' or 'matrix'")
        if "matrix" in obj:
            return cls(tuple(tuple(r) for r in obj["matrix"]))
        if "diag" in obj:
            return cls.from_diagonal(obj["diag"])
        raise DegreeMatrixError("expected a JSON object with 'diag' or 'matrix'")

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.entries]}

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(self.m))

    @property
    def trace(self) -> int:
        return sum(self.diagonal)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{x:3d}" for x in row) for row in self.entries)

    def permute(self, perm: Sequence[int]) -> DegreeMatrix:
        """Matrix with ``new[i][j] = old[perm[i]][perm[j]]``."""
        return DegreeMatrix(tuple(tuple(self.entries[a][b] for b in perm) for a in perm))

    def order(self) -> tuple[DegreeMatrix, tuple[int, ...]]:
        """Reorder indices so the first column is non-increasing.

        Returns the ordered matrix and the permutation ``perm`` with
        ``ordered[i][j] = self[perm[i]][perm[j]]``.  Ties keep their original
        relative order, so an ordered matrix yields the identity.
        """
        perm = tuple(sorted(range(self.m), key=lambda i: -self.diagonal[i]))
        return self.permute(perm), perm

    def is_ordered(self) -> bool:
        col = [self.entries[i][0] for i in range(self.m)]
        return all(a >= b for a, b in zip(col, col[1:]))

    def erase(self, indices: Iterable[int]) -> DegreeMatrix:
        """Submatrix on the complement of ``indices`` (zero-based)."""
        drop = set(indices)
        for i in drop:
            if not 0 <= i < self.m:
                raise DegreeMatrixError(f"index {i} out of range for size {self.m}")
        keep = [i for i in range(self.m) if i not in drop]
        if not keep:
            raise DegreeMatrixError("erasing every index leaves an empty matrix")
        return DegreeMatrix(tuple(tuple(self.entries[a][b] for b in keep) for a in keep))

    def pfaffian_degree(self) -> int:
        if self.m % 2:
            raise DegreeMatrixError(f"pfaffian degree needs even size, got {self.m}")
        return self.trace // 2

    def submaximal_degree(self, i: int, j: int) -> int:
        """Degree of the pfaffian with rows/columns ``i`` and ``j`` erased."""
        if i == j:
            raise DegreeMatrixError("submaximal pfaffians erase two distinct indices")
        return self.pfaffian_degree() - self.entries[i][j]

    def reduce_first(self) -> DegreeMatrix:
        """Subtract 1 from the first row and column (2 from the corner)."""
        diag = list(self.diagonal)
        diag[0] -= 2
        return DegreeMatrix.from_diagonal(diag)


def from_diagonal(diag: Iterable[int]) -> DegreeMatrix:
    return DegreeMatrix.from_diagonal(diag)
