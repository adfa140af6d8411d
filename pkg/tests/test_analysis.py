from __future__ import annotations

import csv
import io
from math import comb

import pytest

from pfaffsum.analysis import SCAN_COLUMNS, linear_threshold, param_count, scan_conjecture, scan_csv
from pfaffsum.degree_matrix import from_diagonal
from pfaffsum.exact_core import DEFAULT_PRIME, PrimeField


def hand_count(n, k, b):
    m = 2 * k
    source = comb(m, 2) * comb(n - 1 + b, b)
    return max(source - m * m, 0), comb(n - 1 + k * b, k * b)


def test_sixteen_by_sixteen_linear_quaternary():
    pc = param_count(4, k=16, b=1)
    assert (pc.dim_V_source, pc.group_correction, pc.expected_dim_V) == (1984, 1024, 960)
    assert pc.ambient_N + 1 == 969 and pc.d == 16
    assert pc.verdict == "nondominant-expected"


def test_fifteen_by_fifteen_linear_quaternary():
    pc = param_count(4, k=15, b=1)
    assert (pc.expected_dim_V, pc.ambient_N + 1) == (840, 816)
    assert pc.verdict == "dominant-expected"


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("k", range(1, 21))
@pytest.mark.parametrize("b", [1, 2, 3])
def test_constant_counts_match_hand_arithmetic(n, k, b):
    pc = param_count(n, k=k, b=b)
    expected, dim = hand_count(n, k, b)
    assert pc.expected_dim_V == expected and pc.ambient_N + 1 == dim
    assert pc.verdict == ("dominant-expected" if expected >= dim else "nondominant-expected")
    assert pc.expected_s == -(-dim // (expected + 1))


def test_ternary_linear_counts():
    # large k is dominant; the (2k)^2 correction overshoots for tiny k
    assert all(param_count(3, k=k, b=1).verdict == "dominant-expected" for k in range(4, 21))
    assert [param_count(3, k=k, b=1).expected_dim_V for k in (1, 2, 3)] == [0, 2, 9]


def test_linear_thresholds():
    assert linear_threshold(4) == 16
    assert linear_threshold(3) is None


def test_general_matrix_carries_caveat():
    pc = param_count(4, from_diagonal([4, 2, 2, 2]))
    assert pc.group_correction is None and pc.caveat
    assert pc.dim_V_source == 3 * comb(6, 3) + 3 * comb(5, 2) and pc.d == 5
    assert param_count(4, k=2, b=1).caveat == ""


def test_param_count_needs_input():
    with pytest.raises(ValueError):
        param_count(4)


def test_scan_rows_and_csv():
    rows = scan_conjecture(range(2, 4), 1, 4, 5, PrimeField(DEFAULT_PRIME))
    assert [r.k for r in rows] == [2, 3]
    for r in rows:
        assert r.bound_k == r.k and r.s_certified is not None and r.s_certified <= r.k
        assert r.rank_profile == sorted(r.rank_profile)
    text = scan_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert tuple(parsed[0]) == SCAN_COLUMNS
    assert parsed[0]["format_version"] == "1" and parsed[1]["d"] == "3"
    assert scan_csv(scan_conjecture(range(2, 4), 1, 4, 5, PrimeField(DEFAULT_PRIME))) == text
