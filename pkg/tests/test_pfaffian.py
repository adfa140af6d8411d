from __future__ import annotations

import itertools
import math
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation

from pfaffsum.degree_matrix import DegreeMatrix, from_diagonal
from pfaffsum.exact_core import DEFAULT_PRIME, DenseMatrixFp, DomainError, PrimeField, det
from pfaffsum.pfaffian import (SkewPolyMatrix, pfaffian, pfaffian_identity_check,
                               pfaffian_scalar, random_skew, submaximal_pfaffians)
from pfaffsum.polyring import HomogeneousPoly, SeededRng, evaluate

P = DEFAULT_PRIME
F = PrimeField(P)


def random_scalar_skew(m, rng):
    a = rng.integers(0, P, size=(m, m), dtype=np.int64)
    a = np.triu(a, 1)
    return (a - a.T) % P


def permutation_sum_pfaffian(S, p):
    """Pf = (1 / (2^k k!)) sum over all permutations of sgn * prod of paired entries."""
    m = len(S)
    k = m // 2
    total = 0
    for perm in itertools.permutations(range(m)):
        term = Permutation(list(perm)).signature()
        for i in range(k):
            term = term * int(S[perm[2 * i]][perm[2 * i + 1]]) % p
        total += term
    return total * pow(2**k * math.factorial(k), -1, p) % p


@pytest.mark.parametrize("m", [0, 2, 4, 6, 8])
def test_scalar_pfaffian_matches_permutation_sum(m):
    rng = np.random.default_rng(m)
    for _ in range(3 if m < 8 else 1):
        S = random_scalar_skew(m, rng)
        assert pfaffian_scalar(S, P) == permutation_sum_pfaffian(S.tolist(), P)


@pytest.mark.parametrize("m", [2, 4, 6, 8, 10])
def test_pfaffian_squared_is_determinant_and_covariant(m):
    rng = np.random.default_rng(100 + m)
    for _ in range(5):
        S = random_scalar_skew(m, rng)
        Pm = rng.integers(0, P, size=(m, m), dtype=np.int64)
        pf = pfaffian_scalar(S, P)
        assert pf * pf % P == det(DenseMatrixFp(S, F))
        Pd, Sd = DenseMatrixFp(Pm, F), DenseMatrixFp(S, F)
        conj = (Pd @ Sd @ Pd.transpose()).entries
        assert pfaffian_scalar(conj, P) == det(Pd) * pf % P


def test_two_by_two_is_its_entry():
    f = HomogeneousPoly.from_terms(3, 2, {(1, 1, 0): 4, (0, 0, 2): 1}, F)
    M = SkewPolyMatrix(from_diagonal([2, 2]), 3, F, {(0, 1): f})
    assert pfaffian(M) == f
    subs = submaximal_pfaffians(M)
    assert list(subs) == [(0, 1)]
    assert subs[(0, 1)] == HomogeneousPoly.constant(3, 1, F)
    check = pfaffian_identity_check(M, 5, SeededRng(0))
    assert check.ok


def test_four_by_four_formula():
    M = random_skew(DegreeMatrix.constant(4, 1), 4, SeededRng(3), F)
    e = M.entry
    want = e(0, 1) * e(2, 3) - e(0, 2) * e(1, 3) + e(0, 3) * e(1, 2)
    assert pfaffian(M) == want
    assert pfaffian(M).d == 2
    rng = SeededRng(4)
    for _ in range(50):
        point = [rng.uniform(P) for _ in range(4)]
        v = evaluate(want, point)
        assert v * v % P == det(DenseMatrixFp(M.evaluate(point), F))


def test_four_by_four_submaximal_are_the_entries():
    M = random_skew(from_diagonal([3, 1, 1, 1]), 4, SeededRng(8), F)
    subs = submaximal_pfaffians(M)
    assert len(subs) == 6
    for (i, j), g in subs.items():
        k, l = (t for t in range(4) if t not in (i, j))
        assert g == M.entry(k, l)


def test_random_skew_examples():
    M = random_skew(DegreeMatrix.constant(2, 1), 4, SeededRng(1), F)
    assert list(M.upper) == [(0, 1)] and M.upper[(0, 1)].d == 1
    A = from_diagonal([4, 2, 2, 2])
    M1 = random_skew(A, 4, SeededRng(9), F)
    assert M1 == random_skew(A, 4, SeededRng(9), F)
    assert M1 != random_skew(A, 4, SeededRng(10), F)
    assert [M1.upper[k].d for k in sorted(M1.upper)] == [3, 3, 3, 2, 2, 2]


def test_skew_matrix_validation():
    A = DegreeMatrix.constant(2, 1)
    with pytest.raises(DomainError, match="degree"):
        SkewPolyMatrix(A, 3, F, {(0, 1): HomogeneousPoly.zero(3, 2, F)})
    with pytest.raises(DomainError, match="missing"):
        SkewPolyMatrix(A, 3, F, {})
    zero = SkewPolyMatrix(A, 3, F, {(0, 1): HomogeneousPoly.zero(3, 1, F)})
    assert pfaffian(zero).is_zero() and pfaffian(zero).d == 1


def test_odd_size_rejected():
    M = random_skew(DegreeMatrix.constant(3, 1), 3, SeededRng(0), F)
    with pytest.raises(DomainError):
        pfaffian(M)
    subs = submaximal_pfaffians(M)
    assert sorted(subs) == [0, 1, 2]
    assert all(g.d == 1 for g in subs.values())


def test_six_by_six_all_ones_submaximal():
    M = random_skew(DegreeMatrix.constant(6, 1), 3, SeededRng(5), F)
    subs = submaximal_pfaffians(M)
    assert len(subs) == 15 and {g.d for g in subs.values()} == {2}


diag_strategy = st.tuples(st.integers(0, 1), st.sampled_from([2, 4, 6]), st.integers(0, 2**32)).map(
    lambda t: [t[0] + 2 * int(x) for x in np.random.default_rng(t[2]).integers(0, 3, size=t[1])])


@settings(max_examples=15, deadline=None)
@given(diag_strategy, st.integers(3, 4), st.integers(0, 2**63))
def test_degree_law_and_expansion(diag, n, seed):
    A = from_diagonal(diag)
    M = random_skew(A, n, SeededRng(seed), F)
    pf = pfaffian(M)
    assert pf.d == A.trace // 2
    subs = submaximal_pfaffians(M)
    for (i, j), g in subs.items():
        assert g.d == A.trace // 2 - A[i, j]
    expansion = HomogeneousPoly.zero(n, pf.d, F)
    for j in range(1, A.m):
        term = M.entry(0, j) * subs[(0, j)]
        expansion = expansion + (term if j % 2 else -term)
    assert expansion == pf


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([4, 6]), st.integers(0, 5), st.integers(0, 2**63))
def test_swap_negates(m, i, seed):
    M = random_skew(DegreeMatrix.constant(m, 1), 3, SeededRng(seed), F)
    j = (i + 1 + seed % (m - 1)) % m
    i %= m
    if i == j:
        return
    assert pfaffian(M.swap(i, j)) == -pfaffian(M)


@pytest.mark.parametrize("diag,trials", [([1] * 6, 100), ([2] * 8, 20)])
def test_identity_check_passes(diag, trials):
    M = random_skew(from_diagonal(diag), 4, SeededRng(len(diag)), F)
    res = pfaffian_identity_check(M, trials, SeededRng(1))
    assert res.ok and res.trials == trials


def test_identity_check_catches_a_corrupted_pfaffian(monkeypatch):
    mod = sys.modules["pfaffsum.pfaffian"]
    M = random_skew(DegreeMatrix.constant(4, 1), 3, SeededRng(2), F)
    real = mod.pfaffian
    monkeypatch.setattr(mod, "pfaffian", lambda M: real(M) + real(M))
    res = pfaffian_identity_check(M, 5, SeededRng(0))
    assert not res.ok and res.point is not None and "Pf(M)(P)" in res.reason


def test_json_round_trip():
    M = random_skew(from_diagonal([3, 1, 1, 1]), 4, SeededRng(6), F)
    data = M.to_json()
    assert "1,2" in data["entries"]
    assert SkewPolyMatrix.from_json(data) == M


def test_multiply_first_scales_pfaffian():
    M = random_skew(DegreeMatrix.constant(4, 1), 3, SeededRng(7), F)
    L = HomogeneousPoly.variable(3, 0, F)
    assert pfaffian(M.multiply_first(L)) == pfaffian(M) * L
