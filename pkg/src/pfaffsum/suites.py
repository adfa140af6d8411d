"""Verification suites replaying the representability statements at desk scale.

Each case is run at every prime in ``primes`` with the same seed; a case
passes only if every run yields a full-rank witness.  Outcomes are
certificates over F_p at the recorded seed and prime, not proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .degree_matrix import DegreeMatrix
from .exact_core import DEFAULT_PRIME, SECOND_PRIME, PrimeField
from .pfaffian import random_skew
from .polyring import SeededRng, child_seed
from .terracini import (GeneratorSet, RankWitness, estimate_s, generic_forms_full,
                        ideal_full_in_degree, lefschetz_surjective, replay_linmain,
                        replay_ternary)

DEFAULT_PRIMES = (DEFAULT_PRIME, SECOND_PRIME)


@dataclass
class CaseResult:
    label: str
    ok: bool
    witnesses: list[RankWitness] = field(default_factory=list)
    notes: dict = field(default_factory=dict)


@dataclass
class SuiteResult:
    name: str
    cases: list[CaseResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def summary(self) -> str:
        lines = []
        for c in self.cases:
            status = "certified" if c.ok else "NOT certified"
            extra = "".join(f" {k}={v}" for k, v in c.notes.items())
            primes = ",".join(str(p) for p in sorted({w.prime for w in c.witnesses})) or "-"
            lines.append(f"[{status}] {self.name}: {c.label}{extra} (over F_p, p in {primes})")
        return "\n".join(lines)


def _fields(primes: Sequence[int]) -> list[PrimeField]:
    return [PrimeField(p) for p in primes]


def _estimate_case(label: str, A: DegreeMatrix, n: int, bound: int, seed: int,
                   primes: Sequence[int], jobs: int, s_max: int | None = None) -> CaseResult:
    witnesses, found = [], []
    for fld in _fields(primes):
        res = estimate_s(A, n, seed, fld, s_max or bound, jobs=jobs)
        witnesses.extend(res.witnesses)
        found.append(res.s_found)
    ok = all(s is not None and s <= bound for s in found)
    return CaseResult(label, ok, witnesses, {"s_found": found, "bound": bound})


TERNARY_DIAGONALS = ([1, 1, 1, 1], [1] * 6, [1] * 8, [4, 2, 2, 2], [3, 3, 1, 1])
FOUR_BY_FOUR_DIAGONALS = ([2, 2, 2, 2], [4, 2, 2, 2], [6, 4, 4, 2], [5, 3, 3, 1], [8, 2, 2, 2])
MAIN_DIAGONALS = ([1] * 6, [1] * 8, [3, 3, 3, 1, 1, 1])


def _replay_case(label: str, run: Callable[[PrimeField], list], primes: Sequence[int]) -> CaseResult:
    witnesses, ok = [], True
    failed = []
    for fld in _fields(primes):
        for step in run(fld):
            ok &= step.ok
            if step.witness is not None:
                witnesses.append(step.witness)
            if not step.ok:
                failed.append(step.label)
    return CaseResult(label, ok, witnesses, {"failed_steps": failed} if failed else {})


def thm_ternary(seed: int = 0, primes: Sequence[int] = DEFAULT_PRIMES, jobs: int = 1,
                replay: bool = True) -> SuiteResult:
    """Ternary forms are single pfaffians: ``s = 1`` for ``n = 3``."""
    cases = []
    for i, diag in enumerate(TERNARY_DIAGONALS):
        A = DegreeMatrix.from_diagonal(diag)
        cases.append(_estimate_case(f"n=3 diag={diag}", A, 3, 1, child_seed(seed, i), primes, jobs))
    if replay:
        for i, diag in enumerate(TERNARY_DIAGONALS):
            A = DegreeMatrix.from_diagonal(diag)
            s = child_seed(seed, 100 + i)
            cases.append(_replay_case(f"trace induction diag={diag}",
                                      lambda f, A=A, s=s: replay_ternary(A, s, f), primes))
    return SuiteResult("thm-ternary", cases)


def thm_4x4(seed: int = 0, primes: Sequence[int] = DEFAULT_PRIMES, jobs: int = 1) -> SuiteResult:
    """Quaternary forms are sums of two 4x4 pfaffians: ``s <= 2``."""
    cases = [_estimate_case(f"n=4 diag={diag}", DegreeMatrix.from_diagonal(diag), 4, 2,
                            child_seed(seed, i), primes, jobs)
             for i, diag in enumerate(FOUR_BY_FOUR_DIAGONALS)]
    return SuiteResult("thm-4x4", cases)


def thm_main(seed: int = 0, primes: Sequence[int] = DEFAULT_PRIMES, jobs: int = 1,
             replay: bool = True) -> SuiteResult:
    """Quaternary forms are sums of ``k`` pfaffians of size ``2k``."""
    cases = []
    for i, diag in enumerate(MAIN_DIAGONALS):
        A = DegreeMatrix.from_diagonal(diag)
        cases.append(_estimate_case(f"n=4 diag={diag}", A, 4, A.m // 2, child_seed(seed, i),
                                    primes, jobs))
    if replay:
        for k in (2, 3, 4):
            s = child_seed(seed, 200 + k)
            cases.append(_replay_case(f"linear-forms induction k={k}",
                                      lambda f, k=k, s=s: replay_linmain(k, s, f), primes))
    return SuiteResult("thm-main", cases)


STEP3_CASES = (([1] * 5, 3), ([3, 1, 1], 2), ([3, 3, 1, 1, 1], 3))


def prop_step3(seed: int = 0, primes: Sequence[int] = DEFAULT_PRIMES, jobs: int = 1) -> SuiteResult:
    """``k`` general odd ``(2k-1)``-size ternary matrices: pooled ideal fills
    degree ``(a_11 + tr A)/2``."""
    cases = []
    for i, (diag, k) in enumerate(STEP3_CASES):
        A, _ = DegreeMatrix.from_diagonal(diag).order()
        d = (A[0, 0] + A.trace) // 2
        witnesses = []
        for fld in _fields(primes):
            rng = SeededRng(child_seed(seed, i))
            Ms = [random_skew(A, 3, rng.child(j), fld) for j in range(k)]
            G = GeneratorSet.of_submaximal(Ms).up_to(d)
            witnesses.append(ideal_full_in_degree(G, d, seed=child_seed(seed, i),
                                                  A=A.to_json()["matrix"], s=k))
        cases.append(CaseResult(f"n=3 k={k} diag={diag} d={d}", all(w.full for w in witnesses),
                                witnesses))
    return SuiteResult("prop-step3", cases)


@dataclass
class LefschetzCase:
    n: int
    A: DegreeMatrix
    matrices: int
    degrees: tuple[int, ...]
    rule: str


def lefschetz_cases(n: int, count: int, seed: int) -> list[LefschetzCase]:
    """Random cases alternating odd and even sizes, with the thresholds that apply.

    n=3, odd size, one matrix: ``d >= tr/2 - 1``.
    n=3, even size, one matrix: ``d >= tr/2`` (the ideal already fills R_d).
    n=4, even size, linear entries: ``d >= k``.
    n=4, odd size ``2k-1``, ``k`` matrices: ``d >= (a_11 + tr)/2``.
    """
    rng = SeededRng(seed)
    out = []
    for i in range(count):
        odd = i % 2 == 0
        if n == 3:
            m = [3, 5, 7][rng.uniform(3)] if odd else [4, 6][rng.uniform(2)]
            parity = rng.uniform(2)
            diag = [parity + 2 * rng.uniform(3 if m <= 5 else 2) for _ in range(m)]
            if not any(diag):
                diag[0] = 2
            A, _ = DegreeMatrix.from_diagonal(diag).order()
            if odd:
                t = max(math.ceil(A.trace / 2 - 1), 0)
                rule = "d >= tr/2 - 1"
            else:
                t = A.pfaffian_degree()
                rule = "d >= tr/2"
            out.append(LefschetzCase(3, A, 1, (t, t + 1), rule))
        else:
            if odd:
                k = 2 + rng.uniform(2)
                parity = rng.uniform(2)
                diag = [parity + 2 * rng.uniform(2) for _ in range(2 * k - 1)]
                if not any(diag):
                    diag[0] = 2
                A, _ = DegreeMatrix.from_diagonal(diag).order()
                t = (A[0, 0] + A.trace) // 2
                out.append(LefschetzCase(4, A, k, (t, t + 1), "d >= (a_11 + tr)/2"))
            else:
                k = 2 + rng.uniform(3)
                out.append(LefschetzCase(4, DegreeMatrix.constant(2 * k, 1), 1, (k, k + 1), "d >= k"))
    return out


def lemma_wl(seed: int = 0, primes: Sequence[int] = DEFAULT_PRIMES, jobs: int = 1,
             count: int = 10) -> SuiteResult:
    """Multiplication by a general linear form is surjective at the thresholds."""
    cases = []
    for n in (3, 4):
        for i, case in enumerate(lefschetz_cases(n, count, child_seed(seed, n))):
            case_seed = child_seed(seed, 1000 * n + i)
            witnesses = []
            for fld in _fields(primes):
                rng = SeededRng(case_seed)
                Ms = [random_skew(case.A, n, rng.child(j), fld) for j in range(case.matrices)]
                G = GeneratorSet.of_submaximal(Ms)
                for d in case.degrees:
                    witnesses.append(lefschetz_surjective(
                        G.up_to(d), d, rng.child(100 + d), seed=case_seed,
                        A=case.A.to_json()["matrix"], s=case.matrices))
            label = (f"n={n} diag={list(case.A.diagonal)} matrices={case.matrices} "
                     f"d={list(case.degrees)} ({case.rule})")
            cases.append(CaseResult(label, all(w.full for w in witnesses), witnesses))
    return SuiteResult("lemma-wl", cases)


GENERIC_FORMS_CASES = ((1, 1, 1, 1), (2, 3, 3, 4))


def generic_forms(seed: int = 0, primes: Sequence[int] = DEFAULT_PRIMES, jobs: int = 1) -> SuiteResult:
    """Eight general forms of degrees a,b,c,e,a,b,c,e (a+e = b+c) fill degree a+e."""
    cases = []
    for i, (a, b, c, e) in enumerate(GENERIC_FORMS_CASES):
        degrees = [a, b, c, e] * 2
        d = a + e
        case_seed = child_seed(seed, i)
        witnesses = [generic_forms_full(degrees, d, 4, SeededRng(case_seed), fld, seed=case_seed)
                     for fld in _fields(primes)]
        cases.append(CaseResult(f"n=4 degrees={degrees} d={d}", all(w.full for w in witnesses),
                                witnesses))
    return SuiteResult("generic-forms", cases)


SUITES = {
    "thm-ternary": thm_ternary,
    "thm-4x4": thm_4x4,
    "thm-main": thm_main,
    "prop-step3": prop_step3,
    "lemma-wl": lemma_wl,
    "generic-forms": generic_forms,
}
