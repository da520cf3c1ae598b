import random

import pytest

from ramseysat.cnf import Formula


def random_cnf(rng: random.Random, max_vars: int = 15, max_clauses: int = 60, max_len: int = 4) -> Formula:
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_clauses)
    clauses = []
    for _ in range(m):
        k = rng.randint(1, min(max_len, n))
        vs = rng.sample(range(1, n + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Formula.build(n, clauses)


def random_2cnf(rng: random.Random, n: int = 10, m: int = 25) -> Formula:
    clauses = []
    for _ in range(m):
        a, b = rng.sample(range(1, n + 1), 2)
        clauses.append([a if rng.random() < 0.5 else -a, b if rng.random() < 0.5 else -b])
    return Formula.build(n, clauses)


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_3cnf(rng: random.Random, min_vars: int = 8, max_vars: int = 15) -> Formula:
    """Random 3-CNF near the satisfiability threshold (no unit clauses)."""
    n = rng.randint(min_vars, max_vars)
    m = int(n * rng.uniform(3.0, 5.0))
    return Formula.build(n, [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)]
                             for _ in range(m)])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance verdicts")
        for line in lines:
            terminalreporter.write_line(line)
