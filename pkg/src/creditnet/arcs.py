"""Flat directed-arc arrays shared by the simulation kernels and the oracle."""
from __future__ import annotations

import numpy as np

from .core import CreditNetwork, NetworkState


class ArcTable:
    """Directed arcs in CSR layout: grouped by from-node, ascending to-node.

    Every undirected edge contributes two arcs; `arc_rev` pairs them, and
    `canon[e]` is the arc in the canonical u -> v (u < v) direction of edge e.
    """

    __slots__ = ("network", "indptr", "arc_from", "arc_to", "arc_rev", "arc_total", "canon")

    def __init__(self, network: CreditNetwork):
        n, m = network.n, network.m
        indptr = np.zeros(n + 1, dtype=np.int32)
        arc_from = np.zeros(2 * m, dtype=np.int32)
        arc_to = np.zeros(2 * m, dtype=np.int32)
        arc_edge = np.zeros(2 * m, dtype=np.int32)
        k = 0
        for u in range(n):
            indptr[u] = k
            for v, e in network.adj[u]:
                arc_from[k] = u
                arc_to[k] = v
                arc_edge[k] = e
                k += 1
        indptr[n] = k
        canon = np.zeros(m, dtype=np.int32)
        other = np.zeros(m, dtype=np.int32)
        for j in range(2 * m):
            e = arc_edge[j]
            if arc_from[j] < arc_to[j]:
                canon[e] = j
            else:
                other[e] = j
        arc_rev = np.zeros(2 * m, dtype=np.int32)
        arc_rev[canon] = other
        arc_rev[other] = canon
        arc_total = np.zeros(2 * m, dtype=np.int64)
        for e in range(m):
            arc_total[canon[e]] = network.totals[e]
            arc_total[other[e]] = network.totals[e]
        self.network = network
        self.indptr = indptr
        self.arc_from = arc_from
        self.arc_to = arc_to
        self.arc_rev = arc_rev
        self.arc_total = arc_total
        self.canon = canon

    def caps_from(self, state: NetworkState) -> np.ndarray:
        cap = np.zeros(len(self.arc_from), dtype=np.int64)
        fw = np.asarray(state.forward, dtype=np.int64)
        cap[self.canon] = fw
        cap[self.arc_rev[self.canon]] = self.arc_total[self.canon] - fw
        return cap

    def caps_from_forward(self, forward) -> np.ndarray:
        cap = np.zeros(len(self.arc_from), dtype=np.int64)
        fw = np.asarray(forward, dtype=np.int64)
        cap[self.canon] = fw
        cap[self.arc_rev[self.canon]] = self.arc_total[self.canon] - fw
        return cap

    def forward_from(self, cap: np.ndarray) -> list[int]:
        return cap[self.canon].tolist()

    def state_from(self, cap: np.ndarray) -> NetworkState:
        return NetworkState(self.network, self.forward_from(cap))
