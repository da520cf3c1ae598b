import dataclasses
import random
import time

import pytest

from conftest import random_3cnf, random_cnf
from ramseysat.cnf import satisfies
from ramseysat.dpll import dpll_solve
from ramseysat.encoders import ProblemSpec, encode
from ramseysat.parallel import (
    ParallelConfig, default_split_depth, parallel_dpll, portfolio_search, split_tree,
)
from ramseysat.result import Status
from ramseysat.verifier import verify_coloring
from ramseysat.walksat import WalksatConfig, coloring_search


def test_config_and_default_depth():
    with pytest.raises(ValueError):
        ParallelConfig(workers=0)
    assert default_split_depth(1) == 2
    assert default_split_depth(8) == 5
    assert default_split_depth(1000) == 10
    assert ParallelConfig(workers=8).depth == 5


def test_single_worker_portfolio_is_plain_search():
    spec = ProblemSpec("L", 10, 3)
    cfg = WalksatConfig(noise=0.5, seed=123)
    a = portfolio_search(spec, cfg, ParallelConfig(workers=1, base_seed=77))
    b = coloring_search(spec, dataclasses.replace(cfg, seed=77))
    assert a.coloring == b.coloring and a.stats.flips == b.stats.flips


def test_portfolio_vds_4_2_eight_workers():
    res = portfolio_search(ProblemSpec("VDS", 4, 2), WalksatConfig(), ParallelConfig(workers=8))
    assert res.is_sat and verify_coloring(res.coloring) is None


def test_portfolio_cancels_peers_on_success():
    # one seed succeeds quickly; the others must be stopped long before their budgets run out
    spec = ProblemSpec("L", 14, 3)
    cfg = WalksatConfig(noise=0.5, max_flips=10**9, restarts=1)
    start = time.monotonic()
    res = portfolio_search(spec, cfg, ParallelConfig(workers=3))
    assert res.is_sat and verify_coloring(res.coloring) is None
    assert time.monotonic() - start < 60


def test_portfolio_timeout_is_reported():
    res = portfolio_search(ProblemSpec("VDS", 5, 2), WalksatConfig(max_flips=10**9, restarts=10**6),
                           ParallelConfig(workers=2, timeout=0.5))
    assert res.status is Status.UNKNOWN and res.reason == "timeout"
    res = portfolio_search(ProblemSpec("VDS", 5, 2), WalksatConfig(max_flips=100, restarts=2),
                           ParallelConfig(workers=2))
    assert res.status is Status.UNKNOWN and res.reason == "budget"


def test_split_depth_zero_is_serial():
    f = encode(ProblemSpec("VDS", 20, 3))
    a = parallel_dpll(f, ParallelConfig(workers=4, split_depth=0))
    b = dpll_solve(f)
    assert (a.status, a.model, a.stats.decisions) == (b.status, b.model, b.stats.decisions)


def test_split_tree_bounds_leaf_count():
    f = encode(ProblemSpec("VDS", 40, 4))
    for depth in range(0, 6):
        assert len(split_tree(f, depth).leaves) <= 2**depth


def test_parallel_L_5_2_unsat_eight_workers():
    res = parallel_dpll(encode(ProblemSpec("L", 5, 2)), ParallelConfig(workers=8))
    assert res.status is Status.UNSAT


def test_parallel_sat_model_is_valid():
    f = encode(ProblemSpec("VDS", 28, 3))
    res = parallel_dpll(f, ParallelConfig(workers=3, split_depth=4))
    assert res.is_sat and satisfies(f, res.model)


def test_parallel_status_matches_serial_in_process():
    rng = random.Random(500)
    for _ in range(500):
        f = random_cnf(rng, 15, 60)
        res = parallel_dpll(f, ParallelConfig(workers=1, split_depth=rng.randint(1, 4)))
        assert res.status is dpll_solve(f).status
        if res.is_sat:
            assert satisfies(f, res.model)


def test_parallel_status_matches_serial_with_processes():
    rng = random.Random(501)
    pooled = 0
    for _ in range(500):
        f = random_3cnf(rng)
        pooled += len(split_tree(f, 2).leaves) > 1
        res = parallel_dpll(f, ParallelConfig(workers=2, split_depth=2))
        assert res.status is dpll_solve(f).status
        if res.is_sat:
            assert satisfies(f, res.model)
    assert pooled >= 100  # the worker pool was actually exercised


def test_parallel_dpll_timeout():
    res = parallel_dpll(encode(ProblemSpec("VDS", 58, 4)), ParallelConfig(workers=2, timeout=0.5))
    assert res.status is Status.UNKNOWN and res.reason in {"timeout", "cancelled"}
