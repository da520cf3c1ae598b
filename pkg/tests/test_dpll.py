import random

import pytest

from conftest import random_2cnf, random_cnf
from ramseysat.cnf import Assignment, Formula, satisfies
from ramseysat.dpll import dpll_solve, pick_branch_literal, two_sat, unit_propagate
from ramseysat.encoders import ProblemSpec, decode, encode
from ramseysat.result import SearchStats, Status
from ramseysat.verifier import brute_force_solve, verify_coloring, verify_grid

ENGINES = ["compiled", "python"]


def F(n, *clauses):
    return Formula.build(n, clauses)


def test_unit_propagate_forced_chain():
    f = F(3, [-1], [1, 2], [-2, 3])
    g, a = unit_propagate(f, Assignment(3))
    assert len(g) == 0
    assert (a[1], a[2], a[3]) == (False, True, True)


def test_unit_propagate_conflict_and_identity():
    assert unit_propagate(F(2, [1], [-1, 2], [-2]), Assignment(2)) is None
    f = F(3, [1, 2, 3])
    g, a = unit_propagate(f, Assignment(3))
    assert g == f and a == Assignment(3)


def test_unit_propagate_does_not_mutate_input():
    a = Assignment(2)
    unit_propagate(F(2, [1], [-1, 2]), a)
    assert a == Assignment(2)


def test_two_sat_examples():
    assert two_sat(F(2, [1, 2], [1, -2], [-1, 2], [-1, -2])).status is Status.UNSAT
    res = two_sat(F(2, [1, 2]))
    assert res.status is Status.SAT and satisfies(F(2, [1, 2]), res.model)
    with pytest.raises(ValueError):
        two_sat(F(3, [1, 2, 3]))


def test_two_sat_unit_clause_is_forced():
    res = two_sat(F(3, [-3], [1, 3]))
    assert res.status is Status.SAT
    assert res.model[3] is False and res.model[1] is True


def test_two_sat_matches_brute_force(rng):
    for _ in range(200):
        f = random_2cnf(rng, 10, 25)
        res = two_sat(f)
        assert res.status is brute_force_solve(f)
        if res.is_sat:
            assert satisfies(f, res.model)


def test_pick_branch_literal_examples():
    assert pick_branch_literal(F(3, [3, 1, 2], [2, 3])) == 2
    assert pick_branch_literal(F(5, [1, 2, 3], [1, 4, 5], [-2, 3, 4, 5])) == 1
    assert pick_branch_literal(F(3, [1, 2, 3])) == 1


def test_pick_prefers_positive_on_equal_weight():
    assert pick_branch_literal(F(4, [-1, 2, 3], [1, 3, 4])) == 3  # 3 has weight 2/3
    assert pick_branch_literal(F(4, [-1, 2, 3], [1, -2, 4])) == 1


@pytest.mark.parametrize("engine", ENGINES)
def test_dpll_matches_brute_force(engine):
    rng = random.Random(1000 + len(engine))
    for _ in range(1000 if engine == "compiled" else 300):
        f = random_cnf(rng, 15, 60)
        res = dpll_solve(f, engine=engine)
        assert res.status is brute_force_solve(f)
        if res.is_sat:
            assert res.model.is_total() and satisfies(f, res.model)


def test_engines_take_identical_paths(rng):
    for _ in range(400):
        f = random_cnf(rng, 20, 80, max_len=5)
        a = dpll_solve(f, engine="compiled")
        b = dpll_solve(f, engine="python")
        assert (a.status, a.model, a.stats.decisions, a.stats.two_sat_calls) == \
               (b.status, b.model, b.stats.decisions, b.stats.two_sat_calls)


def test_engines_identical_on_encodings():
    for spec in [ProblemSpec("L", 4, 2), ProblemSpec("L", 5, 2), ProblemSpec("VDS", 12, 3),
                 ProblemSpec("VDC", 9, 2), ProblemSpec("L", 3, 3)]:
        f = encode(spec)
        a = dpll_solve(f, engine="compiled")
        b = dpll_solve(f, engine="python")
        assert (a.status, a.model, a.stats.decisions) == (b.status, b.model, b.stats.decisions)


def test_dpll_agrees_with_two_sat_on_2cnf(rng):
    for _ in range(200):
        f = random_2cnf(rng, 12, 30)
        assert dpll_solve(f).status is two_sat(f).status


def test_dpll_is_deterministic(rng):
    f = random_cnf(rng, 40, 170, max_len=3)
    runs = [dpll_solve(f) for _ in range(3)]
    assert len({(r.status, tuple(r.model.values) if r.model else None, r.stats.decisions) for r in runs}) == 1


def test_L_4_and_5_with_two_colors():
    spec = ProblemSpec("L", 4, 2)
    res = dpll_solve(encode(spec))
    assert res.status is Status.SAT
    assert verify_grid(4, 2, decode(spec, res.model).rows) is None
    assert dpll_solve(encode(ProblemSpec("L", 5, 2))).status is Status.UNSAT


def test_vds_three_colors_threshold():
    spec = ProblemSpec("VDS", 28, 3)
    res = dpll_solve(encode(spec))
    assert res.status is Status.SAT and verify_coloring(decode(spec, res.model)) is None
    assert dpll_solve(encode(ProblemSpec("VDS", 29, 3))).status is Status.UNSAT


def test_L_2_with_three_colors_round_trip():
    spec = ProblemSpec("L", 2, 3)
    res = dpll_solve(encode(spec))
    assert verify_grid(2, 3, decode(spec, res.model).rows) is None


def test_empty_and_trivial_formulas():
    assert dpll_solve(Formula(0, ())).status is Status.SAT
    res = dpll_solve(Formula(3, ()))
    assert res.model.values[1:] == [False, False, False]
    assert dpll_solve(F(1, [1], [-1])).status is Status.UNSAT


def test_timeout_gives_unknown():
    import time

    f = encode(ProblemSpec("VDS", 58, 4))
    res = dpll_solve(f, deadline=time.monotonic())
    assert res.status is Status.UNKNOWN and res.reason == "timeout"


def test_stats_are_counted():
    res = dpll_solve(encode(ProblemSpec("L", 5, 2)))
    assert res.stats.decisions > 0 and res.stats.propagations > 0
