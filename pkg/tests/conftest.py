import itertools

import pytest
from hypothesis import strategies as st

from satreduce.formula import CnfFormula
from satreduce.harness import GenParams, generate


def naive_sat(clauses, num_vars):
    """Reference check kept independent of the numpy oracle: itertools over value tuples."""
    for values in itertools.product((False, True), repeat=num_vars):
        if all(any(values[abs(x) - 1] == (x > 0) for x in c) for c in clauses):
            return True
    return False


@pytest.fixture(scope="session")
def small_corpus():
    return list(generate(GenParams(2, 3, 2)))


@st.composite
def formulas(draw, max_vars=4, max_clauses=5, max_width=3):
    nv = draw(st.integers(1, max_vars))
    lit = st.integers(1, nv).flatmap(lambda v: st.sampled_from((v, -v)))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=max_width), min_size=1, max_size=max_clauses))
    return CnfFormula.from_ints(clauses, nv)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
