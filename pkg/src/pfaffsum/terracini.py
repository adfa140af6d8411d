"""Fullness of ideals in a single degree, and the sum-of-pfaffians criterion.

A general form of degree ``d = tr(A)/2`` is a sum of ``s`` pfaffians with
degree matrix ``A`` exactly when the submaximal pfaffians of ``s`` general
such matrices generate all of ``R_d``.  Every check here reduces to the rank
of the matrix whose columns are the coefficient vectors of ``g * mono`` for
each generator ``g`` and each monomial ``mono`` of complementary degree.

A full-rank sample over F_p certifies the statement on a Zariski-dense set
over the algebraic closure of F_p.  A deficient sample proves nothing: the
sample or the characteristic may be unlucky.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .degree_matrix import DegreeMatrix
from .exact_core import DenseMatrixFp, DomainError, PrimeField, SpanBuilder
from .pfaffian import SkewPolyMatrix, pfaffian, random_skew, submaximal_pfaffians
from .polyring import HomogeneousPoly, SeededRng, basis_size, child_seed, mul_table, random_form

FORMAT_VERSION = 1


@dataclass
class GeneratorSet:
    n: int
    field: PrimeField
    members: list[HomogeneousPoly] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)

    def add(self, *forms: HomogeneousPoly) -> GeneratorSet:
        for f in forms:
            if f.n != self.n or f.field.p != self.field.p:
                raise DomainError("generator lives in a different ring")
            self.members.append(f)
        return self

    def extend(self, forms: Iterable[HomogeneousPoly]) -> GeneratorSet:
        return self.add(*forms)

    def up_to(self, d: int) -> GeneratorSet:
        """Members of degree at most ``d``; the others contribute nothing to ``I_d``."""
        return GeneratorSet(self.n, self.field, [f for f in self.members if f.d <= d])

    @classmethod
    def of_submaximal(cls, matrices: Sequence[SkewPolyMatrix]) -> GeneratorSet:
        """Pooled submaximal pfaffians of ``matrices``, in sequence order."""
        if not matrices:
            raise DomainError("need at least one matrix")
        G = cls(matrices[0].n, matrices[0].field)
        for M in matrices:
            G.extend(submaximal_pfaffians(M).values())
        return G


@dataclass
class RankWitness:
    prime: int
    seed: int | None
    A: list | None
    n: int
    s: int
    target_degree: int
    target_dim: int
    rank: int
    columns: int
    elapsed_s: float
    verdict: str
    format_version: int = FORMAT_VERSION

    @property
    def full(self) -> bool:
        return self.verdict == "full"

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("elapsed_s")
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> RankWitness:
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


def _verdict(rank: int, dim: int) -> str:
    return "full" if rank == dim else "deficient"


def multiples_block(g: HomogeneousPoly, d: int) -> np.ndarray:
    """Coefficient vectors (as rows) of ``g * mono`` for each monomial of degree ``d - deg g``."""
    e = d - g.d
    if e < 0:
        raise DomainError(f"generator of degree {g.d} exceeds target degree {d}")
    table = mul_table(g.n, g.d, e)
    out = np.zeros((table.shape[1], basis_size(g.n, d)), dtype=np.int64)
    out[np.arange(table.shape[1])[None, :], table] = g.coeffs[:, None]
    return out


def _blocks(forms: Iterable[HomogeneousPoly], n: int, d: int) -> np.ndarray:
    blocks = [multiples_block(g, d) for g in forms]
    if not blocks:
        return np.zeros((0, basis_size(n, d)), dtype=np.int64)
    return np.vstack(blocks)


def assemble_degree_piece(G: GeneratorSet, d: int) -> DenseMatrixFp:
    """Matrix with rows indexed by the degree-``d`` basis and one column per
    (generator, monomial) pair, generators in order, monomials by index."""
    return DenseMatrixFp(_blocks(G.members, G.n, d).T, G.field)


def _witness(span: SpanBuilder, *, n: int, d: int, s: int, seed, A, t0: float) -> RankWitness:
    return RankWitness(
        prime=span.field.p, seed=seed, A=A, n=n, s=s, target_degree=d,
        target_dim=span.dim, rank=span.rank, columns=span.columns_seen,
        elapsed_s=round(time.perf_counter() - t0, 6), verdict=_verdict(span.rank, span.dim))


def ideal_full_in_degree(G: GeneratorSet, d: int, *, seed: int | None = None, A=None,
                         s: int = 1) -> RankWitness:
    t0 = time.perf_counter()
    span = SpanBuilder(basis_size(G.n, d), G.field)
    span.add(_blocks(G.members, G.n, d))
    return _witness(span, n=G.n, d=d, s=s, seed=seed, A=A, t0=t0)


def _matrix_block(A: DegreeMatrix, n: int, p: int, seed: int, index: int,
                  include_pfaffian: bool) -> np.ndarray:
    fld = PrimeField(p, allow_small=True)
    M = random_skew(A, n, SeededRng(child_seed(seed, index)), fld)
    forms = list(submaximal_pfaffians(M).values())
    if include_pfaffian:
        forms.append(pfaffian(M))
    return _blocks(forms, n, A.pfaffian_degree())


@dataclass
class EstimateResult:
    s_found: int | None
    witnesses: list[RankWitness]

    @property
    def rank_profile(self) -> list[int]:
        return [w.rank for w in self.witnesses]


def estimate_s(A: DegreeMatrix, n: int, seed: int, field: PrimeField, s_max: int, *,
               jobs: int = 1, include_pfaffian: bool = False) -> EstimateResult:
    """Smallest ``s <= s_max`` whose pooled submaximal pfaffians fill ``R_d``.

    Matrix ``i`` is drawn from substream ``child_seed(seed, i)``, so the
    outcome does not depend on ``jobs``.  ``include_pfaffian`` also pools the
    pfaffians themselves (a debugging aid; they are redundant).
    """
    if s_max < 1:
        raise DomainError("s_max must be at least 1")
    d = A.pfaffian_degree()
    t0 = time.perf_counter()
    span = SpanBuilder(basis_size(n, d), field)
    witnesses: list[RankWitness] = []
    Ajson = [list(r) for r in A.entries]
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        s = 0
        while s < s_max:
            batch = range(s, min(s_max, s + max(jobs, 1)))
            args = [(A, n, field.p, seed, i, include_pfaffian) for i in batch]
            if pool is None:
                blocks = [_matrix_block(*a) for a in args]
            else:
                blocks = list(pool.map(_matrix_block, *zip(*args)))
            for block in blocks:
                s += 1
                span.add(block)
                witnesses.append(_witness(span, n=n, d=d, s=s, seed=seed, A=Ajson, t0=t0))
                if span.full:
                    return EstimateResult(s, witnesses)
    finally:
        if pool is not None:
            pool.shutdown()
    return EstimateResult(None, witnesses)


def lefschetz_surjective(G: GeneratorSet, d: int, rng: SeededRng, *,
                         L: HomogeneousPoly | None = None, seed: int | None = None,
                         A=None, s: int = 1) -> RankWitness:
    """Is ``L * R_{d-1} + I_d = R_d`` for a random linear form ``L``?

    That is surjectivity of multiplication by ``L`` from ``(R/I)_{d-1}`` to
    ``(R/I)_d``.
    """
    t0 = time.perf_counter()
    if L is None:
        L = random_form(G.n, 1, rng, G.field)
    span = SpanBuilder(basis_size(G.n, d), G.field)
    if d >= 1:
        span.add(multiples_block(L, d))
    span.add(_blocks(G.members, G.n, d))
    return _witness(span, n=G.n, d=d, s=s, seed=seed, A=A, t0=t0)


def generic_forms_full(degrees: Sequence[int], d: int, n: int, rng: SeededRng,
                       field: PrimeField, *, seed: int | None = None) -> RankWitness:
    """Do random forms of the given degrees generate ``R_d``?"""
    G = GeneratorSet(n, field, [random_form(n, e, rng, field) for e in degrees])
    return ideal_full_in_degree(G, d, seed=seed, A=list(degrees), s=1)


# --- replays of the inductive constructions ---------------------------------


@dataclass
class ReplayStep:
    label: str
    ok: bool
    witness: RankWitness | None = None


def bordered(G: SkewPolyMatrix, L: HomogeneousPoly) -> SkewPolyMatrix:
    """Prepend rows/columns ``(0, L, 0, ..., 0)`` and ``(-L, 0, ..., 0)``.

    The new border entries other than ``L`` are zero forms of nominal degree
    given by the extended (constant-ish) degree matrix.
    """
    diag = list(G.A.diagonal)
    if len(set(diag)) != 1 or diag[0] != L.d:
        raise DomainError("bordering is defined here for constant degree matrices matching deg L")
    m = G.m + 2
    A = DegreeMatrix.constant(m, L.d)
    upper = {}
    for i in range(m):
        for j in range(i + 1, m):
            if i >= 2:
                upper[(i, j)] = G.upper[(i - 2, j - 2)]
            elif (i, j) == (0, 1):
                upper[(i, j)] = L
            else:
                upper[(i, j)] = HomogeneousPoly.zero(G.n, A[i, j], G.field)
    return SkewPolyMatrix(A, G.n, G.field, upper)


def _same_up_to_sign(f: HomogeneousPoly, g: HomogeneousPoly) -> bool:
    return f == g or f == -g


def replay_linmain(k: int, seed: int, field: PrimeField, n: int = 4) -> list[ReplayStep]:
    """Replay one inductive step for ``k`` matrices of linear forms of size ``2k``."""
    rng = SeededRng(seed)
    steps: list[ReplayStep] = []
    one = lambda m: DegreeMatrix.constant(m, 1)  # noqa: E731
    if k < 2:
        raise DomainError("the linear-forms induction starts at k = 2")
    if k == 2:
        Ms = [random_skew(one(4), n, rng.child(i), field) for i in range(2)]
        w1 = ideal_full_in_degree(GeneratorSet.of_submaximal(Ms[:1]), 1, seed=seed, A=one(4).to_json()["matrix"])
        steps.append(ReplayStep("k=2: six submaximal pfaffians span R_1", w1.full, w1))
        w2 = ideal_full_in_degree(GeneratorSet.of_submaximal(Ms), 2, seed=seed,
                                  A=one(4).to_json()["matrix"], s=2)
        steps.append(ReplayStep("k=2: pooled ideal fills R_2", w2.full, w2))
        return steps

    Gs = [random_skew(one(2 * k - 2), n, rng.child(i), field) for i in range(k - 1)]
    w = ideal_full_in_degree(GeneratorSet.of_submaximal(Gs), k - 1, seed=seed,
                             A=one(2 * k - 2).to_json()["matrix"], s=k - 1)
    steps.append(ReplayStep(f"induction: {k - 1} matrices of size {2 * k - 2} fill R_{k - 1}", w.full, w))

    M = random_skew(one(2 * k), n, rng.child(k), field)
    L = random_form(n, 1, rng.child(k + 1), field)
    IM = GeneratorSet.of_submaximal([M])
    w = lefschetz_surjective(IM, k, rng, L=L, seed=seed, A=one(2 * k).to_json()["matrix"])
    steps.append(ReplayStep(f"multiplication by L onto (R/I(M))_{k} is surjective", w.full, w))

    Hs = [bordered(G, L) for G in Gs]
    shape_ok = True
    for G, H in zip(Gs, Hs):
        subG = submaximal_pfaffians(G)
        subH = submaximal_pfaffians(H)
        expected = {(i + 2, j + 2): f * L for (i, j), f in subG.items()}
        expected[(0, 1)] = pfaffian(G)
        for key, f in subH.items():
            if key in expected:
                shape_ok &= _same_up_to_sign(f, expected[key])
            else:
                shape_ok &= f.is_zero()
    steps.append(ReplayStep("bordered matrices: nonzero submaximal pfaffians are L*I(G_i) and Pf(G_i)",
                            shape_ok))

    w = ideal_full_in_degree(GeneratorSet.of_submaximal(Hs + [M]), k, seed=seed,
                             A=one(2 * k).to_json()["matrix"], s=k)
    steps.append(ReplayStep(f"bordered matrices plus M fill R_{k}", w.full, w))
    return steps


def _is_base(A: DegreeMatrix) -> bool:
    return all(x == A.diagonal[0] for x in A.diagonal) and A.diagonal[0] in (0, 1)


def replay_ternary(A: DegreeMatrix, seed: int, field: PrimeField, n: int = 3) -> list[ReplayStep]:
    """Replay the trace induction behind single-pfaffian representability.

    At each level with ordered ``A`` and ``B`` = ``A`` minus one on the first
    row and column: a general ``H`` with degree matrix ``B`` fills
    ``R_{d-1}``; its minor ``G'`` (first row/column erased) has a Lefschetz
    surjection onto degree ``d``; ``G`` = ``H`` with first row/column times
    ``L`` has ideal containing ``L*I(H) + I(G')`` and filling ``R_d``.
    """
    steps: list[ReplayStep] = []
    level = 0
    A, _ = A.order()
    while True:
        d = A.pfaffian_degree()
        Ajson = A.to_json()["matrix"]
        rng = SeededRng(child_seed(seed, level))
        if _is_base(A):
            M = random_skew(A, n, rng, field)
            w = ideal_full_in_degree(GeneratorSet.of_submaximal([M]), d, seed=seed, A=Ajson)
            steps.append(ReplayStep(f"base diag {A.diagonal}: submaximal pfaffians fill R_{d}", w.full, w))
            return steps
        B = A.reduce_first()
        H = random_skew(B, n, rng.child(0), field)
        L = random_form(n, 1, rng.child(1), field)
        IH = GeneratorSet.of_submaximal([H])
        w = ideal_full_in_degree(IH, d - 1, seed=seed, A=B.to_json()["matrix"])
        steps.append(ReplayStep(f"diag {B.diagonal}: I(H) fills R_{d - 1}", w.full, w))

        Gp = H.erase({0})
        IGp = GeneratorSet.of_submaximal([Gp])
        w = lefschetz_surjective(IGp, d, rng, L=L, seed=seed, A=Gp.A.to_json()["matrix"])
        steps.append(ReplayStep(f"diag {Gp.A.diagonal}: L onto (R/I(G'))_{d} surjective", w.full, w))

        G = H.multiply_first(L)
        IG = GeneratorSet.of_submaximal([G])
        span = SpanBuilder(basis_size(n, d), field)
        span.add(_blocks(IG.members, n, d))
        before = span.rank
        span.add(_blocks([L * h for h in IH.members], n, d))
        span.add(_blocks(IGp.members, n, d))
        steps.append(ReplayStep(f"diag {A.diagonal}: I(G) contains L*I(H) + I(G')",
                                G.A == A and span.rank == before))
        w = ideal_full_in_degree(IG, d, seed=seed, A=Ajson)
        steps.append(ReplayStep(f"diag {A.diagonal}: I(G) fills R_{d}", w.full, w))
        A, _ = B.order()
        level += 1


def replay_proof_construction(mode: str, params: dict, seed: int,
                              field: PrimeField) -> list[ReplayStep]:
    if mode == "linmain":
        return replay_linmain(int(params["k"]), seed, field, int(params.get("n", 4)))
    if mode == "ternary":
        return replay_ternary(params["A"], seed, field, int(params.get("n", 3)))
    raise DomainError(f"unknown replay mode {mode!r}")
