"""Closed-form steady-state results and reference scaling curves.

Rational arithmetic wherever the underlying statement is exact; plain floats
for the asymptotic reference curves used to read off simulation plots.
"""
from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from typing import Optional, Union

from .core import CreditNetwork, CreditNetworkError
from .oracle import count_forests
from .rates import TransactionMatrix


def _distances_from(network: CreditNetwork, source: int) -> list[int]:
    dist = [-1] * network.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y, _ in network.adj[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def tree_success(
    network: CreditNetwork, tm: Optional[TransactionMatrix] = None
) -> Union[Fraction, float]:
    """Steady-state success probability on a uniform-capacity tree.

    Every edge must carry the same total c; the per-pair probability is
    r^distance with r = c/(c+1), averaged over the rate matrix.
    """
    if not network.is_tree():
        raise CreditNetworkError("tree_success needs a connected acyclic network")
    c = network.totals[0]
    if any(t != c for t in network.totals):
        raise CreditNetworkError("tree_success needs equal edge totals")
    if tm is None:
        tm = TransactionMatrix.uniform(network.n)
    if tm.n != network.n:
        raise CreditNetworkError("rate matrix size does not match the network")
    r = Fraction(c, c + 1)
    exact = tm.has_exact
    total: Union[Fraction, float] = Fraction(0) if exact else 0.0
    for s in range(network.n):
        dist = _distances_from(network, s)
        for t in range(network.n):
            if s == t or tm.rates[s, t] == 0.0:
                continue
            if exact:
                total += tm.exact_rate(s, t) * r ** dist[t]
            else:
                total += tm.rate(s, t) * float(r) ** dist[t]
    return total


def cycle_success(
    n: int, c: int, tm: Optional[TransactionMatrix] = None
) -> Union[Fraction, float]:
    """Steady-state success probability on the n-cycle with per-edge total c.

    Per pair at cycle separation l: (r^l + r^(n-l) - 2 r^n) / (1 - r^n),
    r = c/(c+1); the result is the rate-matrix expectation over pairs.
    """
    if n < 3:
        raise CreditNetworkError(f"cycle needs n >= 3, got {n}")
    if c < 1:
        raise CreditNetworkError(f"need c >= 1, got {c}")
    if tm is None:
        tm = TransactionMatrix.uniform(n)
    if tm.n != n:
        raise CreditNetworkError("rate matrix size does not match n")
    values = [cycle_pair_success(n, c, l) for l in range(1, n)]
    exact = tm.has_exact
    total: Union[Fraction, float] = Fraction(0) if exact else 0.0
    for s in range(n):
        for t in range(n):
            if s == t or tm.rates[s, t] == 0.0:
                continue
            l = (t - s) % n
            if exact:
                total += tm.exact_rate(s, t) * values[l - 1]
            else:
                total += tm.rate(s, t) * float(values[l - 1])
    return total


def cycle_pair_success(n: int, c: int, l: int) -> Fraction:
    """Exact per-pair success at separation l on the n-cycle."""
    if not (1 <= l <= n - 1):
        raise CreditNetworkError(f"separation must be in 1..{n - 1}, got {l}")
    r = Fraction(c, c + 1)
    return (r ** l + r ** (n - l) - 2 * r ** n) / (1 - r ** n)


def cycle_class_count(n: int, c: int) -> int:
    """Number of cycle-reachable classes of the n-cycle: states with at least
    one saturated counterclockwise edge, (c+1)^(n-1) (1-r^n)/(1-r)."""
    if n < 3 or c < 1:
        raise CreditNetworkError(f"need n >= 3 and c >= 1, got n={n}, c={c}")
    r = Fraction(c, c + 1)
    value = (c + 1) ** (n - 1) * (1 - r ** n) / (1 - r)
    assert value.denominator == 1
    return int(value)


def centralized_failure(n_leaves: int, C: int) -> Fraction:
    """Steady-state failure probability of a centralized system: (n-1)/(C+n-1)."""
    if n_leaves < 2:
        raise CreditNetworkError(f"need at least two leaves, got {n_leaves}")
    if C < 0:
        raise CreditNetworkError(f"total credit must be nonnegative, got {C}")
    return Fraction(n_leaves - 1, C + n_leaves - 1)


def bankruptcy_bound(network: CreditNetwork) -> dict:
    """Per-node bankruptcy bounds 1/(d_v + 1) plus capacity-degree means.

    d_v is the total credit capacity incident on v; h is the harmonic mean of
    the d_v and dbar the arithmetic mean (bankruptcy scales as 1/h in credit
    networks versus 1/dbar centralized).
    """
    if not network.is_connected():
        raise CreditNetworkError("bankruptcy_bound needs a connected network")
    degrees = [network.degree_capacity(v) for v in range(network.n)]
    bounds = [Fraction(1, d + 1) for d in degrees]
    harmonic = Fraction(network.n) / sum(Fraction(1, d) for d in degrees)
    arithmetic = Fraction(sum(degrees), network.n)
    return {
        "degrees": degrees,
        "bounds": bounds,
        "harmonic_mean": harmonic,
        "arithmetic_mean": arithmetic,
    }


def _complete_network(n: int, c: int) -> CreditNetwork:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return CreditNetwork(n, edges, [c] * len(edges))


def complete_forest_count(k: int, c: int, forest_counter=count_forests) -> int:
    """a_{k,c}: forests of the complete multigraph on k nodes, c copies per edge.

    a_{k,c} grows like e^(1/2c) c^(k-1) k^(k-2); that asymptotic is a reference
    only, the value here is exact.
    """
    if k < 1:
        raise CreditNetworkError(f"need k >= 1, got {k}")
    if k == 1:
        return 1
    return forest_counter(_complete_network(k, c))


def complete_cut_bound(n: int, c: int, forest_counter=count_forests) -> Fraction:
    """Cut-sum upper bound on pairwise failure probability in the complete
    graph: sum over splits of binom(n-2, k-1) a_k a_{n-k} / a_n."""
    if n < 2:
        raise CreditNetworkError(f"need n >= 2, got {n}")
    a = {k: complete_forest_count(k, c, forest_counter) for k in range(1, n + 1)}
    total = sum(
        math.comb(n - 2, k - 1) * a[k] * a[n - k] for k in range(1, n)
    )
    return Fraction(total, a[n])


REFERENCE_KINDS = ("gnp_conjecture", "complete_centralized", "gnp_centralized", "ba_centralized")


def reference_curve(kind: str, **params) -> float:
    """Reference curves for reading simulation results.

    gnp_conjecture(n, p, c): success level 1 - 2/(npc) tracking the conjectured
    Theta(1/npc) failure. The *_centralized kinds give the equivalent
    centralized system's failure probability for complete, G(n,p), and
    Barabasi-Albert credit networks.
    """
    try:
        if kind == "gnp_conjecture":
            n, p, c = params["n"], params["p"], params["c"]
            return 1.0 - 2.0 / (n * p * c)
        if kind == "complete_centralized":
            n, c = params["n"], params["c"]
            return (n - 1) / (math.comb(n, 2) * c + n - 1)
        if kind == "gnp_centralized":
            n, p, c = params["n"], params["p"], params["c"]
            return (n - 1) / (math.comb(n, 2) * p * c + n - 1)
        if kind == "ba_centralized":
            n, d, c = params["n"], params["d"], params["c"]
            return (n - 1) / (n * d * c + n - 1)
    except KeyError as exc:
        raise CreditNetworkError(f"missing parameter {exc} for {kind}") from exc
    raise CreditNetworkError(f"unknown reference curve {kind!r}")
