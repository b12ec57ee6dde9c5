"""Seeded construction of the studied graph families with initial credit splits."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import CentralizedSystem, CreditNetwork, CreditNetworkError, NetworkState

KINDS = ("line", "star", "cycle", "complete", "erdos_renyi", "barabasi_albert")
INITS = ("random_unidirectional", "balanced", "all_toward_low_id")


@dataclass(frozen=True)
class TopologySpec:
    """Parameters fully determining a generated network (given the seed)."""

    kind: str
    n: int
    c: int
    p: Optional[float] = None
    d: Optional[int] = None
    init: str = "random_unidirectional"
    seed: int = 0

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise CreditNetworkError(f"unknown topology kind {self.kind!r}")
        if self.init not in INITS:
            raise CreditNetworkError(f"unknown init mode {self.init!r}")
        if self.n < 2:
            raise CreditNetworkError(f"need n >= 2, got {self.n}")
        if self.c < 1:
            raise CreditNetworkError(f"need c >= 1, got {self.c}")
        if self.kind == "cycle" and self.n < 3:
            raise CreditNetworkError("cycle needs n >= 3")
        if self.kind == "erdos_renyi":
            if self.p is None or not (0.0 < self.p <= 1.0):
                raise CreditNetworkError(f"erdos_renyi needs 0 < p <= 1, got {self.p}")
        if self.kind == "barabasi_albert":
            if self.d is None or not (1 <= self.d < self.n):
                raise CreditNetworkError(f"barabasi_albert needs 1 <= d < n, got {self.d}")
        if self.init == "balanced" and self.c % 2 != 0:
            raise CreditNetworkError("balanced init needs even c")


def _edges_for(spec: TopologySpec, rng: np.random.Generator) -> list[tuple[int, int]]:
    n = spec.n
    if spec.kind == "line":
        return [(i, i + 1) for i in range(n - 1)]
    if spec.kind == "star":
        return [(0, i) for i in range(1, n)]
    if spec.kind == "cycle":
        return [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    if spec.kind == "complete":
        return [(u, v) for u in range(n) for v in range(u + 1, n)]
    if spec.kind == "erdos_renyi":
        draws = rng.random(n * (n - 1) // 2)
        edges = []
        k = 0
        for u in range(n):
            for v in range(u + 1, n):
                if draws[k] < spec.p:
                    edges.append((u, v))
                k += 1
        return edges
    # barabasi_albert: complete seed graph on d+1 nodes, then degree-proportional
    # attachment of d distinct targets per arriving node (weights frozen at
    # arrival, chosen targets removed from the pool).
    d = spec.d
    edges = [(u, v) for u in range(d + 1) for v in range(u + 1, d + 1)]
    degree = np.zeros(n, dtype=np.int64)
    degree[: d + 1] = d
    for new in range(d + 1, n):
        weights = degree[:new].astype(float)
        for _ in range(d):
            total = weights.sum()
            x = rng.random() * total
            target = int(np.searchsorted(np.cumsum(weights), x, side="right"))
            target = min(target, new - 1)
            edges.append((target, new))
            weights[target] = 0.0
        for u, v in edges[-d:]:
            degree[u] += 1
            degree[v] += 1
    return edges


def _initial_forward(
    spec: TopologySpec, edges: Sequence[tuple[int, int]], rng: np.random.Generator
) -> list[int]:
    c = spec.c
    if spec.init == "balanced":
        return [c // 2] * len(edges)
    if spec.init == "all_toward_low_id":
        # Full capacity on the arc into the lower id, i.e. v -> u for u < v.
        return [0] * len(edges)
    return [c if rng.random() < 0.5 else 0 for _ in edges]


def generate(
    spec: TopologySpec, connected: bool = False, max_retries: int = 100
) -> tuple[CreditNetwork, NetworkState]:
    """Deterministic function of (spec, seed); every edge gets total credit c.

    With connected=True, disconnected Erdős–Rényi samples are redrawn from the
    same seeded stream up to max_retries times, then an error is raised. The
    fixed families are connected by construction.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    for attempt in range(max_retries + 1):
        edges = _edges_for(spec, rng)
        network = CreditNetwork(spec.n, edges, [spec.c] * len(edges))
        if not connected or network.is_connected():
            break
        if spec.kind != "erdos_renyi" or attempt == max_retries:
            raise CreditNetworkError(
                f"no connected sample after {attempt + 1} draws for {spec}"
            )
    state = NetworkState(network, _initial_forward(spec, network.edges, rng))
    return network, state


def centralized_chain(n_leaves: int, credits: Sequence[int]) -> CentralizedSystem:
    """Standalone centralized system over the given per-leaf root credits."""
    if n_leaves != len(credits):
        raise CreditNetworkError("n_leaves does not match the credit vector length")
    return CentralizedSystem(credits)
