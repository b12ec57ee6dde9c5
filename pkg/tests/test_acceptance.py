"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to watch the lines appear;
the simulation criteria (10-13) take a few minutes in total.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from creditnet import verify
from creditnet.core import (
    Transaction,
    build_network,
    execute_payment,
    random_feasible_path,
    score_vector,
    transact,
)
from creditnet.rates import TransactionMatrix
from creditnet.sim import ConvergenceConfig, run_ensemble, simulate_steps
from creditnet.topology import TopologySpec, generate

WORKERS = 2
CONV = ConvergenceConfig()


@pytest.fixture(scope="module")
def cache():
    return verify.InstanceCache()


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def assert_checks(criterion: str, checks) -> None:
    bad = [c for c in checks if not c.ok]
    detail = f"{len(checks) - len(bad)}/{len(checks)} checks"
    if bad:
        detail += "; first failure: " + bad[0].line()
    report(criterion, not bad, detail)


def test_criterion_01_uniform_stationary(cache):
    checks = verify.suite_uniform_stationary(cache)
    worst = max(c.computed for c in checks)
    assert_checks("criterion 1 (uniform stationary distribution <= 1e-9)", checks)
    print(f"       worst deviation: {worst:.3e}")


def test_criterion_02_cycle_class_counts(cache):
    checks = [c for c in verify.suite_cycles(cache) if c.name.startswith("class count")]
    assert len(checks) == 9
    assert_checks("criterion 2 (cycle class counts)", checks)


def test_criterion_03_forest_bijection(cache):
    checks = verify.suite_forest_bijection(cache)
    assert_checks("criterion 3 (forest bijection)", checks)


def test_criterion_04_cycle_success_formula(cache):
    checks = [c for c in verify.suite_cycles(cache)
              if c.name.startswith(("pair success", "overall success"))]
    assert_checks("criterion 4 (cycle success formula, 4/7 headline)", checks)


def test_criterion_05_tree_results(cache):
    checks = verify.suite_trees(cache)
    assert_checks("criterion 5 (tree uniformity and success formula)", checks)


def test_criterion_06_centralized_system():
    checks = verify.suite_centralized()
    assert_checks("criterion 6 (centralized chain vs (n-1)/(C+n-1))", checks)


def test_criterion_07_bankruptcy(cache):
    checks = verify.suite_bankruptcy(cache)
    assert_checks("criterion 7 (bankruptcy = F(G-v)/F(G) <= 1/(d_v+1))", checks)


def _random_instance(rng: random.Random):
    n = rng.randint(3, 6)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    k = rng.randint(1, len(pairs))
    rows = []
    for u, v in rng.sample(pairs, k):
        total = rng.randint(1, 3)
        fwd = rng.randint(0, total)
        rows.append((u, v, fwd, total - fwd))
    return build_network(rows, n=n)


def test_criterion_08_path_independence():
    """10^4 random unit-payment sequences: shortest-path vs random-feasible-path
    routing give identical outcome sequences and final score vectors."""
    t0 = time.time()
    rng = random.Random(20260809)
    sequences = 10_000
    for _ in range(sequences):
        net, shortest_state = _random_instance(rng)
        random_state = shortest_state.copy()
        for _ in range(rng.randint(1, 50)):
            s = rng.randrange(net.n)
            t = rng.randrange(net.n - 1)
            if t >= s:
                t += 1
            txn = Transaction(s, t, 1)
            ok_shortest, _ = transact(shortest_state, txn)
            path = random_feasible_path(random_state, txn, rng)
            if path is not None:
                execute_payment(random_state, path, 1)
            assert (path is not None) == ok_shortest
        assert score_vector(shortest_state) == score_vector(random_state)
    elapsed = time.time() - t0
    report("criterion 8 (path independence, 10^4 sequences)",
           elapsed < 60.0, f"{sequences} sequences in {elapsed:.1f}s")


def test_criterion_09_conservation_million_steps():
    spec = TopologySpec(kind="erdos_renyi", n=100, c=2, p=0.1, seed=90)
    net, state = generate(spec, connected=True)
    tm = TransactionMatrix.uniform(100)
    final, successes = simulate_steps(net, state, tm, 1_000_000, seed=90, check_every=100_000)
    ok = True
    for e, (u, v) in enumerate(net.edges):
        if final.capacity(u, v) + final.capacity(v, u) != net.totals[e]:
            ok = False
    ok = ok and sum(score_vector(final)) == net.total_credit() == 2 * net.m
    report("criterion 9 (conservation over 10^6 steps)",
           ok, f"{successes} successes, total credit {net.total_credit()}")


def test_criterion_10_figure3_capacity_sweep():
    """Ensemble means track 1 - 2/(npc) within +-0.05 for both families."""
    rows = []
    ok = True
    for c in range(2, 11):
        er = run_ensemble(TopologySpec(kind="erdos_renyi", n=100, c=c, p=0.1),
                          "uniform", CONV, runs=100, base_seed=31000 + c, workers=WORKERS)
        target = 1 - 2 / (100 * 0.1 * c)
        ok = ok and abs(er.mean - target) <= 0.05
        rows.append(f"ER c={c}: {er.mean:.3f} vs {target:.3f}")
        ba = run_ensemble(TopologySpec(kind="barabasi_albert", n=100, c=c, d=5),
                          "uniform", CONV, runs=100, base_seed=32000 + c, workers=WORKERS)
        target_ba = 1 - 2 / (2 * 5 * c)
        ok = ok and abs(ba.mean - target_ba) <= 0.05
        rows.append(f"BA c={c}: {ba.mean:.3f} vs {target_ba:.3f}")
    report("criterion 10 (Figure 3: means within 0.05 of 1 - 2/(npc))",
           ok, "; ".join(rows))


def test_criterion_11_figure2_density_sweep():
    """n=200, c=1: success > 0.9 at average degree 25; nondecreasing in
    density within one standard deviation."""
    degrees = [25, 36, 54, 72, 90]
    results = {}
    for family in ("erdos_renyi", "barabasi_albert"):
        means = []
        stds = []
        for i, deg in enumerate(degrees):
            if family == "erdos_renyi":
                spec = TopologySpec(kind=family, n=200, c=1, p=deg / 199)
            else:
                spec = TopologySpec(kind=family, n=200, c=1, d=round(deg / 2))
            ens = run_ensemble(spec, "uniform", CONV, runs=100,
                               base_seed=41000 + 100 * i, workers=WORKERS)
            means.append(ens.mean)
            stds.append(ens.std)
        results[family] = (means, stds)
    ok = True
    details = []
    for family, (means, stds) in results.items():
        details.append(f"{family}: " + ", ".join(f"{m:.3f}" for m in means))
        ok = ok and means[0] > 0.9
        for i in range(1, len(means)):
            ok = ok and means[i] >= means[i - 1] - stds[i - 1]
    report("criterion 11 (Figure 2: >0.9 at degree 25, nondecreasing)",
           ok, "; ".join(details))


def test_criterion_12_figure4_size_sweep():
    """Fixed np=10, c=1: flat success across n with family-specific bands."""
    sizes = [50, 100, 200, 500]
    ok = True
    details = []
    for family, band in (("erdos_renyi", (0.73, 0.83)), ("barabasi_albert", (0.70, 0.80))):
        means = []
        for i, n in enumerate(sizes):
            if family == "erdos_renyi":
                spec = TopologySpec(kind=family, n=n, c=1, p=10.0 / n)
            else:
                spec = TopologySpec(kind=family, n=n, c=1, d=5)
            ens = run_ensemble(spec, "uniform", CONV, runs=100,
                               base_seed=51000 + 100 * i, workers=WORKERS)
            means.append(ens.mean)
        lo, hi = band
        ok = ok and all(lo <= m <= hi for m in means)
        ok = ok and max(means) - min(means) <= 0.05
        details.append(f"{family}: " + ", ".join(f"{m:.3f}" for m in means)
                       + f" (band {lo}-{hi})")
    report("criterion 12 (Figure 4: size has no effect at fixed np)",
           ok, "; ".join(details))


def test_criterion_13_complete_graph_scaling(cache):
    exact_check = [c for c in verify.suite_complete(cache) if "ratio" in c.name]
    assert len(exact_check) == 1
    scaled_sim = []
    for n in (20, 50, 100):
        for c in (1, 2):
            ens = run_ensemble(TopologySpec(kind="complete", n=n, c=c),
                               "uniform", CONV, runs=20,
                               base_seed=61000 + n + c, workers=WORKERS)
            scaled_sim.append((1 - ens.mean) * n * c)
    sim_ratio = max(scaled_sim) / min(scaled_sim)
    ok = exact_check[0].ok and sim_ratio <= 2.0
    report("criterion 13 (complete-graph failure ~ Theta(1/nc))",
           ok,
           f"exact ratio {exact_check[0].computed:.3f}, simulated ratio {sim_ratio:.3f}")
