"""Parameter counts and small-k scans for constant degree matrices."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from typing import Iterable

from .degree_matrix import DegreeMatrix
from .exact_core import PrimeField
from .polyring import basis_size, child_seed
from .terracini import FORMAT_VERSION, estimate_s

CAVEAT_GENERAL_A = ("no group correction applied: the GL-fiber correction is only "
                    "used for constant degree matrices")


@dataclass
class ParamCount:
    descriptor: dict
    n: int
    d: int
    dim_V_source: int
    group_correction: int | None
    expected_dim_V: int
    ambient_N: int
    verdict: str
    caveat: str = ""

    @property
    def expected_s(self) -> int:
        """ceil((N+1) / (expected_dim_V + 1)); the expected, possibly defective, value."""
        return -(-(self.ambient_N + 1) // (self.expected_dim_V + 1))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["expected_s"] = self.expected_s
        return d


def param_count(n: int, A: DegreeMatrix | None = None, *, k: int | None = None,
                b: int | None = None) -> ParamCount:
    """Compare the dimension of the matrix parameter space with ``dim R_d``.

    The source dimension is that of the vector space of skew matrices with
    degree matrix ``A``, ``sum_{i<j} dim R_{a_ij}``.  For constant ``A``
    (``k`` and entry ``b``) the ``(2k)^2``-dimensional action
    ``M -> P M P^t`` is subtracted.
    """
    if A is None:
        if k is None or b is None:
            raise ValueError("give either A or both k and b")
        A = DegreeMatrix.constant(2 * k, b)
    m = A.m
    d = A.pfaffian_degree()
    source = sum(basis_size(n, A[i, j]) for i in range(m) for j in range(i + 1, m))
    constant = len(set(A.diagonal)) == 1
    correction = m * m if constant else None
    expected = max(source - (correction or 0), 0)
    ambient = basis_size(n, d) - 1
    verdict = "nondominant-expected" if expected < ambient + 1 else "dominant-expected"
    if constant:
        descriptor = {"k": m // 2, "b": A.diagonal[0]}
    else:
        descriptor = {"diag": list(A.diagonal)}
    return ParamCount(descriptor, n, d, source, correction, expected, ambient, verdict,
                      "" if constant else CAVEAT_GENERAL_A)


SCAN_COLUMNS = ("format_version", "k", "entry_degree", "n", "d", "dim_R_d", "s_tested",
                "rank_profile", "s_certified", "bound_k", "expected_s", "seed", "prime")


@dataclass
class ScanRow:
    k: int
    entry_degree: int
    n: int
    d: int
    dim_R_d: int
    s_tested: int
    rank_profile: list[int]
    s_certified: int | None
    bound_k: int
    expected_s: int
    seed: int
    prime: int

    def as_record(self) -> dict:
        r = asdict(self)
        r["format_version"] = FORMAT_VERSION
        r["rank_profile"] = ";".join(str(x) for x in self.rank_profile)
        r["s_certified"] = "" if self.s_certified is None else self.s_certified
        return {c: r[c] for c in SCAN_COLUMNS}


def scan_conjecture(ks: Iterable[int], entry_degree: int, n: int, seed: int,
                    field: PrimeField, jobs: int = 1) -> list[ScanRow]:
    """For each ``k`` run the sweep on the constant ``2k x 2k`` matrix up to ``s = k``."""
    rows = []
    for k in ks:
        A = DegreeMatrix.constant(2 * k, entry_degree)
        case_seed = child_seed(seed, k)
        res = estimate_s(A, n, case_seed, field, s_max=k, jobs=jobs)
        pc = param_count(n, A)
        rows.append(ScanRow(k, entry_degree, n, A.pfaffian_degree(), basis_size(n, A.pfaffian_degree()),
                            len(res.witnesses), res.rank_profile, res.s_found, k, pc.expected_s,
                            case_seed, field.p))
    return rows


def scan_csv(rows: Iterable[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.as_record())
    return buf.getvalue()


def linear_threshold(n: int, k_max: int = 40) -> int | None:
    """Smallest ``k`` at which linear ``2k x 2k`` pfaffians stop being expected dominant."""
    for k in range(1, k_max + 1):
        if param_count(n, k=k, b=1).verdict == "nondominant-expected":
            if all(param_count(n, k=j, b=1).verdict == "nondominant-expected"
                   for j in range(k, k_max + 1)):
                return k
    return None


__all__ = ["ParamCount", "param_count", "ScanRow", "scan_conjecture", "scan_csv",
           "SCAN_COLUMNS", "linear_threshold"]
