"""Credit-network model: topology, credit state, payment routing, execution.

A credit network is an undirected graph where each edge (u, v) carries a fixed
total credit `c` split into two directed capacities c_uv + c_vu = c. A payment
from payer s to payee t of value p is feasible iff there is a directed path of
capacity >= p from t to s; executing it shifts p units of capacity from every
traversed arc to its reverse. Total credit is conserved by construction.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO


class CreditNetworkError(ValueError):
    """Invalid network construction or an operation violating a precondition."""


@dataclass(frozen=True)
class Transaction:
    """Payment of `p` units from payer `s` to payee `t`."""

    s: int
    t: int
    p: int = 1

    def __post_init__(self) -> None:
        if self.s == self.t:
            raise CreditNetworkError(f"payer and payee coincide: {self.s}")
        if self.p < 1:
            raise CreditNetworkError(f"payment value must be >= 1, got {self.p}")


class CreditNetwork:
    """Static topology: n nodes (ids 0..n-1) and undirected edges with totals.

    Edges are stored canonically with u < v; at most one edge per pair, no
    self-loops, every total >= 1.
    """

    __slots__ = ("n", "edges", "totals", "m", "adj", "edge_index")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]], totals: Sequence[int]):
        if n < 1:
            raise CreditNetworkError(f"need at least one node, got n={n}")
        if len(edges) != len(totals):
            raise CreditNetworkError("edges and totals length mismatch")
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self.totals: list[int] = []
        self.edge_index: dict[tuple[int, int], int] = {}
        for (u, v), total in zip(edges, totals):
            if not (0 <= u < n and 0 <= v < n):
                raise CreditNetworkError(f"node id out of range: edge ({u}, {v}) with n={n}")
            if u == v:
                raise CreditNetworkError(f"self-loop at node {u}")
            if u > v:
                u, v = v, u
            if (u, v) in self.edge_index:
                raise CreditNetworkError(f"duplicate edge ({u}, {v})")
            if total < 1:
                raise CreditNetworkError(f"edge ({u}, {v}) has zero total credit")
            self.edge_index[(u, v)] = len(self.edges)
            self.edges.append((u, v))
            self.totals.append(int(total))
        self.m = len(self.edges)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for e, (u, v) in enumerate(self.edges):
            adj[u].append((v, e))
            adj[v].append((u, e))
        for lst in adj:
            lst.sort()
        self.adj = adj

    def total_credit(self) -> int:
        return sum(self.totals)

    def degree_capacity(self, v: int) -> int:
        """Total credit capacity d_v of all edges incident on v."""
        self._check_node(v)
        return sum(self.totals[e] for _, e in self.adj[v])

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            x = stack.pop()
            for y, _ in self.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    stack.append(y)
        return count == self.n

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def _check_node(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise CreditNetworkError(f"unknown node id {v} (n={self.n})")

    def __repr__(self) -> str:
        return f"CreditNetwork(n={self.n}, m={self.m})"


class NetworkState:
    """Per-edge credit split; the Markov chain's state.

    `forward[e]` is the capacity in the canonical u -> v direction of edge e
    (u < v); the reverse capacity is total - forward. All values are integers
    in [0, total] at all times.
    """

    __slots__ = ("network", "forward")

    def __init__(self, network: CreditNetwork, forward: Sequence[int]):
        if len(forward) != network.m:
            raise CreditNetworkError("state length does not match edge count")
        fw = []
        for e, f in enumerate(forward):
            if not (0 <= f <= network.totals[e]):
                raise CreditNetworkError(
                    f"split {f} out of range for edge {network.edges[e]} "
                    f"(total {network.totals[e]})"
                )
            fw.append(int(f))
        self.network = network
        self.forward = fw

    def copy(self) -> "NetworkState":
        return NetworkState(self.network, list(self.forward))

    def capacity(self, a: int, b: int) -> int:
        """Unused credit on the directed edge a -> b (0 if no edge)."""
        key = (a, b) if a < b else (b, a)
        e = self.network.edge_index.get(key)
        if e is None:
            return 0
        f = self.forward[e]
        return f if a < b else self.network.totals[e] - f

    def shift(self, a: int, b: int, p: int) -> None:
        """Move p units of capacity from arc a -> b onto b -> a."""
        key = (a, b) if a < b else (b, a)
        e = self.network.edge_index.get(key)
        if e is None:
            raise CreditNetworkError(f"no edge between {a} and {b}")
        if a < b:
            if self.forward[e] < p:
                raise CreditNetworkError(f"capacity shortfall on {a}->{b}")
            self.forward[e] -= p
        else:
            if self.network.totals[e] - self.forward[e] < p:
                raise CreditNetworkError(f"capacity shortfall on {a}->{b}")
            self.forward[e] += p

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.forward)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, NetworkState)
            and other.network is self.network
            and other.forward == self.forward
        )

    def __repr__(self) -> str:
        return f"NetworkState({self.forward})"


class CentralizedSystem:
    """Star-shaped currency system: a root bank extends credits[u] to leaf u.

    Leaf-to-root credit is unbounded, so a unit transaction between leaves
    (s, t) fails iff leaf s has no credit left, and otherwise moves one unit
    of root credit from s to t.
    """

    __slots__ = ("credits",)

    def __init__(self, credits: Sequence[int]):
        if len(credits) == 0:
            raise CreditNetworkError("centralized system needs at least one leaf")
        if any(c < 0 or c != int(c) for c in credits):
            raise CreditNetworkError("leaf credits must be nonnegative integers")
        self.credits = [int(c) for c in credits]

    @property
    def n_leaves(self) -> int:
        return len(self.credits)

    @property
    def C(self) -> int:
        return sum(self.credits)

    def is_bankrupt(self, u: int) -> bool:
        return self.credits[u] == 0

    def transact(self, s: int, t: int) -> bool:
        """Unit payment from leaf s to leaf t; False leaves credits unchanged."""
        if s == t:
            raise CreditNetworkError("payer and payee coincide")
        if self.credits[s] == 0:
            return False
        self.credits[s] -= 1
        self.credits[t] += 1
        return True

    def __repr__(self) -> str:
        return f"CentralizedSystem(credits={self.credits})"


def build_network(
    edge_list: Iterable[tuple[int, int, int, int]], n: Optional[int] = None
) -> tuple[CreditNetwork, NetworkState]:
    """Build a network and its initial state from (u, v, c_uv, c_vu) rows.

    Edge totals are c_uv + c_vu. Pass `n` explicitly to include isolated
    nodes; otherwise it is inferred as max id + 1.
    """
    rows = list(edge_list)
    for u, v, cuv, cvu in rows:
        if cuv < 0 or cvu < 0:
            raise CreditNetworkError(f"negative capacity on edge ({u}, {v})")
    if n is None:
        if not rows:
            raise CreditNetworkError("empty edge list needs an explicit node count")
        n = max(max(u, v) for u, v, _, _ in rows) + 1
    edges = []
    totals = []
    forward = []
    for u, v, cuv, cvu in rows:
        edges.append((u, v) if u < v else (v, u))
        totals.append(cuv + cvu)
        forward.append(cuv if u < v else cvu)
    network = CreditNetwork(n, edges, totals)
    return network, NetworkState(network, forward)


def available_credit(state: NetworkState, v: int) -> int:
    """Total unused credit extended to v: sum of capacities on arcs into v."""
    state.network._check_node(v)
    return sum(state.capacity(u, v) for u, _ in state.network.adj[v])


def is_bankrupt(state: NetworkState, v: int) -> bool:
    """True iff no credit is extended to v; a bankrupt node cannot pay."""
    return available_credit(state, v) == 0


def score_vector(state: NetworkState) -> tuple[int, ...]:
    """Per-node total outgoing capacity; identifies cycle-reachable classes.

    The entries always sum to the network's total credit.
    """
    net = state.network
    score = [0] * net.n
    for e, (u, v) in enumerate(net.edges):
        f = state.forward[e]
        score[u] += f
        score[v] += net.totals[e] - f
    return tuple(score)


def shortest_feasible_path(state: NetworkState, txn: Transaction) -> Optional[list[int]]:
    """Hop-shortest directed path t -> ... -> s with every arc capacity >= p.

    Ties are broken toward the lexicographically smallest node sequence by
    expanding neighbors in ascending id order. Returns None if infeasible.
    """
    net = state.network
    net._check_node(txn.s)
    net._check_node(txn.t)
    s, t, p = txn.s, txn.t, txn.p
    parent = [-2] * net.n
    parent[t] = -1
    queue = deque([t])
    while queue:
        x = queue.popleft()
        for y, _ in net.adj[x]:
            if parent[y] == -2 and state.capacity(x, y) >= p:
                parent[y] = x
                if y == s:
                    path = [s]
                    while path[-1] != t:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(y)
    return None


def random_feasible_path(state: NetworkState, txn: Transaction, rng) -> Optional[list[int]]:
    """Any feasible (not necessarily shortest) path t -> ... -> s, or None.

    Depth-first search with rng-shuffled neighbor order; used to exercise the
    path-independence property against shortest-path routing.
    """
    net = state.network
    net._check_node(txn.s)
    net._check_node(txn.t)
    s, t, p = txn.s, txn.t, txn.p
    visited = [False] * net.n
    visited[t] = True
    path = [t]

    def dfs(x: int) -> bool:
        if x == s:
            return True
        nbrs = [y for y, _ in net.adj[x] if not visited[y] and state.capacity(x, y) >= p]
        rng.shuffle(nbrs)
        for y in nbrs:
            visited[y] = True
            path.append(y)
            if dfs(y):
                return True
            path.pop()
        return False

    return path if dfs(t) else None


def execute_payment(state: NetworkState, path: Sequence[int], p: int) -> NetworkState:
    """Route p units along the directed path, shifting capacity arc by arc.

    Requires capacity >= p on every arc; validates before mutating so a
    failed call leaves the state untouched. Returns the mutated state.
    """
    if p < 1:
        raise CreditNetworkError(f"payment value must be >= 1, got {p}")
    if len(path) < 2:
        raise CreditNetworkError("path needs at least two nodes")
    for a, b in zip(path, path[1:]):
        if state.capacity(a, b) < p:
            if state.network.edge_index.get((min(a, b), max(a, b))) is None:
                raise CreditNetworkError(f"no edge between {a} and {b}")
            raise CreditNetworkError(f"infeasible path: capacity shortfall on {a}->{b}")
    for a, b in zip(path, path[1:]):
        state.shift(a, b, p)
    return state


def transact(state: NetworkState, txn: Transaction) -> tuple[bool, NetworkState]:
    """Route txn along the shortest feasible path; a failure changes nothing."""
    path = shortest_feasible_path(state, txn)
    if path is None:
        return False, state
    execute_payment(state, path, txn.p)
    return True, state


def max_credit_flow(state: NetworkState, s: int, t: int) -> int:
    """Maximum credit flow from payee t to payer s in the directed graph.

    A payment (s, t, p) is flow-feasible iff this value is >= p. The credit
    graph is its own residual graph, so this is Edmonds-Karp on a scratch
    copy of the capacities.
    """
    net = state.network
    net._check_node(s)
    net._check_node(t)
    if s == t:
        raise CreditNetworkError("payer and payee coincide")
    work = state.copy()
    flow = 0
    while True:
        parent = [-2] * net.n
        parent[t] = -1
        queue = deque([t])
        while queue:
            x = queue.popleft()
            for y, _ in net.adj[x]:
                if parent[y] == -2 and work.capacity(x, y) >= 1:
                    parent[y] = x
                    queue.append(y)
        if parent[s] == -2:
            return flow
        path = [s]
        while path[-1] != t:
            path.append(parent[path[-1]])
        path.reverse()
        bottleneck = min(work.capacity(a, b) for a, b in zip(path, path[1:]))
        for a, b in zip(path, path[1:]):
            work.shift(a, b, bottleneck)
        flow += bottleneck


def equivalent_centralized(network: CreditNetwork, state: NetworkState) -> CentralizedSystem:
    """Centralized system with the same per-node credit as the given state."""
    return CentralizedSystem([available_credit(state, u) for u in range(network.n)])


def write_edge_list(state: NetworkState, f: TextIO) -> None:
    """Dump as one `u v c_uv c_vu` line per edge (canonical u < v order)."""
    net = state.network
    for e, (u, v) in enumerate(net.edges):
        fw = state.forward[e]
        f.write(f"{u} {v} {fw} {net.totals[e] - fw}\n")


def read_edge_list(f: TextIO, n: Optional[int] = None) -> tuple[CreditNetwork, NetworkState]:
    """Parse the `u v c_uv c_vu` format; `#` lines and blanks are ignored."""
    rows = []
    for lineno, line in enumerate(f, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) != 4:
            raise CreditNetworkError(f"line {lineno}: expected 'u v c_uv c_vu', got {text!r}")
        try:
            u, v, cuv, cvu = (int(x) for x in parts)
        except ValueError as exc:
            raise CreditNetworkError(f"line {lineno}: non-integer field in {text!r}") from exc
        rows.append((u, v, cuv, cvu))
    return build_network(rows, n=n)
