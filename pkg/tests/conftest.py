import random
import sys

import pytest
from hypothesis import strategies as st

from binpleth.core import BPoly


def int_bpolys(max_degree=4, bound=5):
    """Elements of Int(Z): integer coordinates on the binomial basis."""
    return st.lists(st.integers(-bound, bound), min_size=0, max_size=max_degree + 1).map(BPoly)


def rat_bpolys(max_degree=4):
    rats = st.fractions(min_value=-4, max_value=4, max_denominator=6)
    return st.lists(rats, min_size=0, max_size=max_degree + 1).map(BPoly)


def random_int_bpoly(rng: random.Random, deg=4, bound=3) -> BPoly:
    return BPoly(rng.randint(-bound, bound) for _ in range(rng.randint(0, deg) + 1))


@pytest.fixture
def rng():
    return random.Random(0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
