from __future__ import annotations

import json
from math import comb

import numpy as np
import pytest

from pfaffsum.degree_matrix import DegreeMatrix, from_diagonal
from pfaffsum.exact_core import DEFAULT_PRIME, DomainError, PrimeField, rank
from pfaffsum.pfaffian import pfaffian, random_skew, submaximal_pfaffians
from pfaffsum.polyring import HomogeneousPoly, SeededRng, basis_size, child_seed, random_form
from pfaffsum.terracini import (RankWitness, GeneratorSet, assemble_degree_piece, bordered,
                               estimate_s, generic_forms_full, ideal_full_in_degree,
                               lefschetz_surjective, replay_proof_construction)

P = DEFAULT_PRIME
F = PrimeField(P)


def froberg_ideal_dim(n, degrees, d):
    """dim I_d for general forms predicted by the truncated series prod(1 - t^e) / (1 - t)^n.

    Proven for n <= 3; for n = 4 the Koszul count used below is a special case.
    """
    series = [0] * (d + 1)
    series[0] = 1
    for e in degrees:
        series = [series[t] - (series[t - e] if t >= e else 0) for t in range(d + 1)]
    hf = []
    for t in range(d + 1):
        v = sum(series[u] * comb(n - 1 + t - u, n - 1) for u in range(t + 1))
        if v <= 0:
            hf.extend([0] * (d + 1 - t))
            break
        hf.append(v)
    return basis_size(n, d) - hf[d]


def variables(n, field=F):
    return GeneratorSet(n, field, [HomogeneousPoly.variable(n, i, field) for i in range(n)])


def test_assembly_shapes():
    g = random_form(3, 4, SeededRng(1), F)
    M = assemble_degree_piece(GeneratorSet(3, F, [g]), 4)
    assert (M.rows, M.cols) == (15, 1)
    assert M.entries[:, 0].tolist() == g.coeffs.tolist()
    M = assemble_degree_piece(variables(4), 2)
    assert (M.rows, M.cols) == (10, 16)
    assert assemble_degree_piece(GeneratorSet(4, F), 3).cols == 0
    with pytest.raises(DomainError):
        assemble_degree_piece(GeneratorSet(3, F, [g]), 3)


def test_assembly_columns_are_products():
    rng = SeededRng(2)
    gens = [random_form(3, 1, rng, F), random_form(3, 2, rng, F)]
    M = assemble_degree_piece(GeneratorSet(3, F, gens), 3)
    cols = []
    for g in gens:
        for idx in range(basis_size(3, 3 - g.d)):
            mono = HomogeneousPoly(3, 3 - g.d, np.eye(basis_size(3, 3 - g.d), dtype=np.int64)[idx], F)
            cols.append((g * mono).coeffs.tolist())
    assert M.entries.T.tolist() == cols


def test_linear_forms_fill_quadrics():
    w = ideal_full_in_degree(variables(4), 2)
    assert w.full and w.rank == 10 and w.columns == 16
    gens = GeneratorSet(4, F, [random_form(4, 1, SeededRng(i), F) for i in range(4)])
    w2 = ideal_full_in_degree(gens, 2)
    assert w2.full
    assert rank(assemble_degree_piece(gens, 2)) == 10


def test_one_quadric_is_deficient():
    w = ideal_full_in_degree(GeneratorSet(4, F, [random_form(4, 2, SeededRng(3), F)]), 2)
    assert w.rank == 1 and w.verdict == "deficient"


def test_six_by_six_ternary_single_pfaffian(field):
    M = random_skew(DegreeMatrix.constant(6, 1), 3, SeededRng(4), field)
    G = GeneratorSet.of_submaximal([M])
    assert len(G) == 15
    w = ideal_full_in_degree(G, 3)
    assert w.full and w.rank == 10


@pytest.mark.parametrize("degrees,d", [((2, 2, 2), 4), ((2, 3, 3), 5), ((3, 3, 3, 3), 5),
                                        ((1, 2, 4), 5), ((4, 4, 4), 6), ((2, 2, 3, 3), 4)])
def test_ideal_rank_matches_froberg_in_three_variables(degrees, d):
    gens = GeneratorSet(3, F, [random_form(3, e, SeededRng(child_seed(9, i)), F)
                               for i, e in enumerate(degrees)])
    w = ideal_full_in_degree(gens, d)
    assert w.rank == froberg_ideal_dim(3, degrees, d)
    assert rank(assemble_degree_piece(gens, d)) == w.rank


def test_estimate_s_all_ones_quaternary(field):
    res = estimate_s(DegreeMatrix.constant(4, 1), 4, 5, field, 3)
    assert res.s_found == 1
    assert res.witnesses[0].rank == 10 and res.witnesses[0].target_degree == 2


@pytest.mark.parametrize("diag,n,bound", [([6, 4, 4, 2], 4, 2), ([1] * 6, 4, 3)])
def test_estimate_s_within_bound(field, diag, n, bound):
    res = estimate_s(from_diagonal(diag), n, 17, field, bound)
    assert res.s_found is not None and res.s_found <= bound
    for w in res.witnesses:
        assert w.rank <= w.target_dim
        assert w.full == (w.rank == w.target_dim)


def test_deficient_sweep_matches_koszul_count():
    # six general degree-9 forms meet 15 Koszul relations in degree 18
    res = estimate_s(from_diagonal([9, 9, 9, 9]), 4, 3, F, 2)
    assert res.rank_profile == [6 * 220 - 15, 1330]
    assert res.rank_profile[0] == froberg_ideal_dim(4, [9] * 6, 18)
    assert res.s_found == 2


def test_rank_profile_is_monotone_and_seed_deterministic():
    A = DegreeMatrix.constant(4, 2)
    a = estimate_s(A, 6, 11, F, 3)
    b = estimate_s(A, 6, 11, F, 3)
    assert a.rank_profile == sorted(a.rank_profile)
    assert [w.to_json(timing=False) for w in a.witnesses] == [w.to_json(timing=False) for w in b.witnesses]
    assert a.rank_profile[0] == froberg_ideal_dim(6, [2] * 6, 4) == 111


def test_pfaffian_is_redundant_in_the_tangent_span():
    A = DegreeMatrix.constant(4, 2)
    plain = estimate_s(A, 6, 11, F, 1)
    with_pf = estimate_s(A, 6, 11, F, 1, include_pfaffian=True)
    assert plain.rank_profile == with_pf.rank_profile
    assert with_pf.witnesses[0].columns == plain.witnesses[0].columns + 1


def test_jobs_do_not_change_witnesses():
    A = DegreeMatrix.constant(4, 2)
    serial = estimate_s(A, 6, 21, F, 3, jobs=1)
    pooled = estimate_s(A, 6, 21, F, 3, jobs=2)
    assert [w.to_json(timing=False) for w in serial.witnesses] == \
        [w.to_json(timing=False) for w in pooled.witnesses]


def test_estimate_s_rejects_nonpositive_s_max():
    with pytest.raises(DomainError):
        estimate_s(DegreeMatrix.constant(4, 1), 4, 0, F, 0)


def test_witness_json_fields():
    w = estimate_s(DegreeMatrix.constant(4, 1), 4, 42, F, 1).witnesses[0]
    d = json.loads(w.to_json())
    assert list(d) == ["prime", "seed", "A", "n", "s", "target_degree", "target_dim", "rank",
                       "columns", "elapsed_s", "verdict", "format_version"]
    assert "elapsed_s" not in json.loads(w.to_json(timing=False))
    assert RankWitness.from_dict(d) == w


def test_lefschetz_examples(field):
    assert lefschetz_surjective(GeneratorSet(3, field), 2, SeededRng(1)).verdict == "deficient"
    M = random_skew(DegreeMatrix.constant(5, 1), 3, SeededRng(2), field)
    G = GeneratorSet.of_submaximal([M])
    assert lefschetz_surjective(G, 3, SeededRng(3)).full
    spanning = GeneratorSet(3, field, [random_form(3, 2, SeededRng(child_seed(5, i)), field)
                                       for i in range(6)])
    assert lefschetz_surjective(spanning, 2, SeededRng(4), L=HomogeneousPoly.zero(3, 1, field)).full


def test_lefschetz_threshold_is_sharp_for_five_by_five():
    M = random_skew(DegreeMatrix.constant(5, 1), 3, SeededRng(2), F)
    G = GeneratorSet.of_submaximal([M])
    assert not lefschetz_surjective(G.up_to(1), 1, SeededRng(3)).full


@pytest.mark.parametrize("degrees,d,full", [((1,) * 8, 2, True), ((2, 3, 3, 4) * 2, 6, True),
                                             ((6,), 6, False)])
def test_generic_forms(field, degrees, d, full):
    assert generic_forms_full(degrees, d, 4, SeededRng(8), field).full is full


def test_bordered_matrix_shape():
    G = random_skew(DegreeMatrix.constant(4, 1), 4, SeededRng(1), F)
    L = random_form(4, 1, SeededRng(2), F)
    H = bordered(G, L)
    assert H.m == 6 and H.entry(0, 1) == L and H.entry(1, 0) == -L
    assert H.entry(0, 3).is_zero() and H.entry(3, 5) == G.entry(1, 3)
    assert pfaffian(H) == L * pfaffian(G)
    subs = submaximal_pfaffians(H)
    assert subs[(0, 1)] == pfaffian(G)
    with pytest.raises(DomainError):
        bordered(random_skew(from_diagonal([3, 1, 1, 1]), 4, SeededRng(1), F), L)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_linear_forms_replay(field, k):
    steps = replay_proof_construction("linmain", {"k": k}, 7, field)
    assert steps and all(s.ok for s in steps), [s.label for s in steps if not s.ok]
    assert len(steps) == (2 if k == 2 else 4)


@pytest.mark.parametrize("diag", [[1, 1, 1, 1], [3, 3, 1, 1], [4, 2, 2, 2], [5, 3, 3, 1], [2] * 6])
def test_ternary_replay(field, diag):
    steps = replay_proof_construction("ternary", {"A": from_diagonal(diag)}, 7, field)
    assert steps and all(s.ok for s in steps), [s.label for s in steps if not s.ok]


def test_ternary_replay_all_ones_witness():
    steps = replay_proof_construction("ternary", {"A": DegreeMatrix.constant(4, 1)}, 1, F)
    final = [s.witness for s in steps if s.witness is not None][-1]
    assert final.full and final.target_degree == 2


def test_unknown_replay_mode():
    with pytest.raises(DomainError):
        replay_proof_construction("other", {}, 0, F)
