import numpy as np
import pytest
from hypothesis import strategies as st

from groupoid_cipher import CipherKey, GroupoidTable, affine_groupoid
from groupoid_cipher.demo import example_key

ALPHA = (2, 2, 0)
BETA = (1, 1, 1)


@pytest.fixture
def ternary_table():
    return affine_groupoid([ALPHA, BETA], 3)


@pytest.fixture
def ternary_key():
    return example_key()


def random_last_place_table(rng, n, q):
    columns = np.array([rng.permutation(q) for _ in range(q ** (n - 1))])
    return GroupoidTable(n, q, columns.reshape(-1))


@st.composite
def keys(draw, ns=(2, 3, 4), max_q=16, max_schedule=5):
    n = draw(st.sampled_from(ns))
    q_cap = max_q if n < 4 else min(max_q, 8)
    q = draw(st.integers(1, q_cap))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    table = random_last_place_table(rng, n, q)
    leaders = draw(st.lists(st.integers(0, q - 1), min_size=(n * n - n) // 2, max_size=(n * n - n) // 2))
    exponents = draw(st.lists(st.integers(1, max(q, 1)), min_size=1, max_size=max_schedule))
    return CipherKey(table, leaders, exponents)


_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__ != "test_acceptance" or not item.name.startswith("test_ac"):
        return
    if report.when == "call" or report.failed:
        _acceptance[item.name] = (item.obj.__doc__, report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for title, passed in _acceptance.values():
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {title}")
