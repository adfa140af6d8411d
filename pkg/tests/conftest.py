from __future__ import annotations

import sys

import pytest

from pfaffsum.exact_core import DEFAULT_PRIME, SECOND_PRIME, PrimeField


@pytest.fixture(params=[DEFAULT_PRIME, SECOND_PRIME], ids=["p31", "p30"])
def field(request) -> PrimeField:
    return PrimeField(request.param)


@pytest.fixture
def big() -> PrimeField:
    return PrimeField(DEFAULT_PRIME)


@pytest.fixture
def f7() -> PrimeField:
    return PrimeField(7, allow_small=True)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[number]
        terminalreporter.write_line(mod.format_line(number, ok, detail))
