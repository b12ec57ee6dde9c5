"""Cross-check suites: exact oracle versus closed forms on small instances.

Each check compares an exhaustively computed quantity against an independent
formula or combinatorial count. The CLI `verify` command prints one line per
check; the acceptance tests assert over the same records.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Optional

import numpy as np

from . import formulas, oracle
from .core import CreditNetwork
from .rates import TransactionMatrix
from .topology import TopologySpec, generate

SUITE_CS = (1, 2, 3)
UNIFORMITY_TOL = 1e-9


@dataclass
class CheckResult:
    suite: str
    name: str
    ok: bool
    computed: object
    expected: object

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} [{self.suite}] {self.name}: computed={self.computed} expected={self.expected}"


def suite_instances() -> list[tuple[str, str, int, int]]:
    """(label, kind, n, c) for the standard small-instance suite."""
    out = []
    for kind, ns in (("line", range(3, 6)), ("star", range(3, 7)),
                     ("cycle", range(3, 6)), ("complete", range(3, 6))):
        for n in ns:
            for c in SUITE_CS:
                out.append((f"{kind}({n},c={c})", kind, n, c))
    return out


class InstanceCache:
    """Memoizes networks, partitions, and chains across suites."""

    def __init__(self) -> None:
        self._nets: dict[tuple[str, int, int], CreditNetwork] = {}
        self._parts: dict[tuple[str, int, int], oracle.ClassPartition] = {}
        self._pis: dict[tuple[str, int, int], np.ndarray] = {}

    def network(self, kind: str, n: int, c: int) -> CreditNetwork:
        key = (kind, n, c)
        if key not in self._nets:
            net, _ = generate(TopologySpec(kind=kind, n=n, c=c, init="all_toward_low_id"))
            self._nets[key] = net
        return self._nets[key]

    def partition(self, kind: str, n: int, c: int) -> oracle.ClassPartition:
        key = (kind, n, c)
        if key not in self._parts:
            self._parts[key] = oracle.partition_classes(self.network(kind, n, c))
        return self._parts[key]

    def stationary(self, kind: str, n: int, c: int) -> np.ndarray:
        key = (kind, n, c)
        if key not in self._pis:
            net = self.network(kind, n, c)
            chain = oracle.class_chain(net, self.partition(kind, n, c), TransactionMatrix.uniform(n))
            self._pis[key] = oracle.stationary_distribution(chain.P)
        return self._pis[key]


def suite_uniform_stationary(cache: Optional[InstanceCache] = None) -> list[CheckResult]:
    """Uniform steady state over classes for every suite instance (<= 1e-9)."""
    cache = cache or InstanceCache()
    checks = []
    for label, kind, n, c in suite_instances():
        pi = cache.stationary(kind, n, c)
        deviation = float(np.max(np.abs(pi - 1.0 / len(pi))))
        checks.append(CheckResult(
            "uniform-stationary", f"max |pi - 1/K| on {label}", deviation <= UNIFORMITY_TOL,
            deviation, f"<= {UNIFORMITY_TOL}",
        ))
    return checks


def suite_forest_bijection(cache: Optional[InstanceCache] = None) -> list[CheckResult]:
    """Class count equals labeled-forest count on every suite instance."""
    cache = cache or InstanceCache()
    checks = []
    for label, kind, n, c in suite_instances():
        net = cache.network(kind, n, c)
        k_classes = cache.partition(kind, n, c).K
        forests = oracle.count_forests(net)
        checks.append(CheckResult(
            "forest-bijection", f"classes vs forests on {label}",
            k_classes == forests, k_classes, forests,
        ))
    return checks


def suite_cycles(cache: Optional[InstanceCache] = None) -> list[CheckResult]:
    """Cycle class counts and per-pair success against the closed forms."""
    cache = cache or InstanceCache()
    checks = []
    for n in range(3, 6):
        for c in SUITE_CS:
            label = f"cycle({n},c={c})"
            part = cache.partition("cycle", n, c)
            expected_count = formulas.cycle_class_count(n, c)
            checks.append(CheckResult(
                "cycles", f"class count on {label}", part.K == expected_count,
                part.K, expected_count,
            ))
            net = cache.network("cycle", n, c)
            for l in range(1, n):
                got = oracle.exact_pair_success(net, l, 0, partition=part)
                expect = formulas.cycle_pair_success(n, c, l)
                checks.append(CheckResult(
                    "cycles", f"pair success l={l} on {label}", got == expect, got, expect,
                ))
    part31 = cache.partition("cycle", 3, 1)
    failure = oracle.exact_failure_probability(
        cache.network("cycle", 3, 1), TransactionMatrix.uniform(3), partition=part31
    )
    checks.append(CheckResult(
        "cycles", "overall success on cycle(3,c=1)", 1 - failure == Fraction(4, 7),
        1 - failure, Fraction(4, 7),
    ))
    return checks


def suite_trees(cache: Optional[InstanceCache] = None) -> list[CheckResult]:
    """Singleton classes, state-level uniformity, and the r^distance formula."""
    cache = cache or InstanceCache()
    checks = []
    instances = [("line", n) for n in range(3, 6)] + [("star", n) for n in range(3, 7)]
    for kind, n in instances:
        for c in SUITE_CS:
            label = f"{kind}({n},c={c})"
            part = cache.partition(kind, n, c)
            checks.append(CheckResult(
                "trees", f"singleton classes on {label}",
                part.K == part.space.size, part.K, part.space.size,
            ))
            pi = cache.stationary(kind, n, c)
            deviation = float(np.max(np.abs(pi - 1.0 / len(pi))))
            checks.append(CheckResult(
                "trees", f"state-level uniformity on {label}",
                deviation <= UNIFORMITY_TOL, deviation, f"<= {UNIFORMITY_TOL}",
            ))
            net = cache.network(kind, n, c)
            failure = oracle.exact_failure_probability(
                net, TransactionMatrix.uniform(n), partition=part, verify_uniform=False
            )
            expect = formulas.tree_success(net)
            checks.append(CheckResult(
                "trees", f"success formula on {label}", 1 - failure == expect,
                1 - failure, expect,
            ))
    return checks


def suite_centralized() -> list[CheckResult]:
    """Enumerated centralized chain versus the (n-1)/(C+n-1) closed form."""
    checks = []
    for n in range(2, 7):
        for C in range(0, 9):
            states = oracle.centralized_states(n, C)
            expected_count = comb(C + n - 1, n - 1)
            checks.append(CheckResult(
                "centralized", f"state count n={n} C={C}",
                len(states) == expected_count, len(states), expected_count,
            ))
            failure = oracle.centralized_exact_failure(n, C)
            expect = formulas.centralized_failure(n, C)
            checks.append(CheckResult(
                "centralized", f"failure n={n} C={C}", failure == expect, failure, expect,
            ))
    return checks


def suite_complete(cache: Optional[InstanceCache] = None) -> list[CheckResult]:
    """Complete graphs: cut-sum bound and Theta(1/nc) ratio stability."""
    cache = cache or InstanceCache()
    checks = []
    for n in range(3, 6):
        for c in SUITE_CS:
            label = f"complete({n},c={c})"
            net = cache.network("complete", n, c)
            part = cache.partition("complete", n, c)
            pair_failure = 1 - oracle.exact_pair_success(net, 0, 1, partition=part)
            bound = formulas.complete_cut_bound(n, c)
            checks.append(CheckResult(
                "complete", f"cut bound on {label}", bound >= pair_failure,
                f"bound {bound}", f">= failure {pair_failure}",
            ))
    scaled = []
    for n, c in ((3, 1), (3, 2), (4, 1), (4, 2), (5, 1)):
        net = cache.network("complete", n, c)
        part = cache.partition("complete", n, c)
        failure = oracle.exact_failure_probability(
            net, TransactionMatrix.uniform(n), partition=part, verify_uniform=False
        )
        scaled.append(float(failure) * n * c)
    ratio = max(scaled) / min(scaled)
    checks.append(CheckResult(
        "complete", "failure x nc ratio over {(3,1),(3,2),(4,1),(4,2),(5,1)}",
        ratio <= 2.0, ratio, "<= 2.0",
    ))
    return checks


def suite_bankruptcy(cache: Optional[InstanceCache] = None) -> list[CheckResult]:
    """Bankruptcy probability equals F(G-v)/F(G) and respects 1/(d_v+1)."""
    cache = cache or InstanceCache()
    checks = []
    for label, kind, n, c in suite_instances():
        net = cache.network(kind, n, c)
        part = cache.partition(kind, n, c)
        forests_all = oracle.count_forests(net)
        tm = TransactionMatrix.uniform(n)
        for v in range(n):
            got = oracle.exact_bankruptcy_probability(net, tm, v, partition=part)
            expect = Fraction(oracle.count_forests(net, excluded_node=v), forests_all)
            bound = Fraction(1, net.degree_capacity(v) + 1)
            checks.append(CheckResult(
                "bankruptcy", f"node {v} on {label}",
                got == expect and got <= bound, got, f"{expect} (<= {bound})",
            ))
    return checks


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "uniform-stationary": suite_uniform_stationary,
    "forests": suite_forest_bijection,
    "cycles": suite_cycles,
    "trees": suite_trees,
    "centralized": suite_centralized,
    "complete": suite_complete,
    "bankruptcy": suite_bankruptcy,
}


def run_suites(names: Iterable[str]) -> list[CheckResult]:
    cache = InstanceCache()
    checks = []
    for name in names:
        fn = SUITES[name]
        if name == "centralized":
            checks.extend(fn())
        else:
            checks.extend(fn(cache))
    return checks
