"""Exhaustive small-instance ground truth for the induced Markov chain.

Enumerates the full state space, partitions it into cycle-reachable
equivalence classes (keyed by score vector), builds the class-level transition
matrix, solves for the stationary distribution, and derives exact failure and
bankruptcy probabilities. Labeled-forest counting provides the independent
combinatorial cross-check (class count == forest count).

Exact rational results are produced under the uniform transaction regime;
everything else falls back to double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import spsolve

from .arcs import ArcTable
from .core import CreditNetwork, CreditNetworkError
from .rates import TransactionMatrix

DEFAULT_STATE_CAP = 2 ** 24
DEFAULT_FOREST_CAP = 40
DENSE_SOLVE_LIMIT = 5000


class StateSpaceCapExceeded(CreditNetworkError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"state space needs {required} states, cap is {cap}")
        self.required = required
        self.cap = cap


class ForestCapExceeded(CreditNetworkError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"forest counting needs {required} unit edges, cap is {cap}")
        self.required = required
        self.cap = cap


class ReducibleChainError(CreditNetworkError):
    """Chain is not irreducible; carries the strongly-connected decomposition."""

    def __init__(self, labels: np.ndarray):
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(i)
        super().__init__(f"chain is reducible: {len(groups)} strongly connected components")
        self.components = list(groups.values())


class PeriodicChainError(CreditNetworkError):
    def __init__(self, period: int):
        super().__init__(f"chain is periodic with period {period}")
        self.period = period


class StateSpace:
    """Mixed-radix codec over edge splits: digit e is forward capacity of edge e.

    Little-endian: edge 0 is the least significant digit. Indices run over
    0 .. prod(total_e + 1) - 1 and are bijective with network states.
    """

    __slots__ = ("network", "radices", "strides", "size")

    def __init__(self, network: CreditNetwork, cap: int = DEFAULT_STATE_CAP):
        self.network = network
        self.radices = [t + 1 for t in network.totals]
        size = 1
        for r in self.radices:
            size *= r
        if size > cap:
            raise StateSpaceCapExceeded(size, cap)
        strides = []
        acc = 1
        for r in self.radices:
            strides.append(acc)
            acc *= r
        self.strides = strides
        self.size = size

    def decode(self, index: int) -> tuple[int, ...]:
        digits = []
        for r in self.radices:
            digits.append(index % r)
            index //= r
        return tuple(digits)

    def encode(self, forward: Sequence[int]) -> int:
        index = 0
        for f, stride in zip(forward, self.strides):
            index += f * stride
        return index

    def score_matrix(self, block: int = 1 << 19) -> np.ndarray:
        """Score vectors of all states, one row per state index."""
        net = self.network
        out = np.empty((self.size, net.n), dtype=np.int64)
        for start in range(0, self.size, block):
            stop = min(start + block, self.size)
            idx = np.arange(start, stop, dtype=np.int64)
            scores = np.zeros((stop - start, net.n), dtype=np.int64)
            for e, (u, v) in enumerate(net.edges):
                digit = (idx // self.strides[e]) % self.radices[e]
                scores[:, u] += digit
                scores[:, v] += net.totals[e] - digit
            out[start:stop] = scores
        return out


def enumerate_states(network: CreditNetwork, cap: int = DEFAULT_STATE_CAP) -> StateSpace:
    """Complete, duplicate-free state enumeration via mixed-radix counting."""
    return StateSpace(network, cap)


class ClassPartition:
    """States grouped by score vector: the cycle-reachability classes."""

    __slots__ = ("network", "space", "class_of", "scores", "sizes", "reps", "K")

    def __init__(self, network: CreditNetwork, space: StateSpace):
        self.network = network
        self.space = space
        all_scores = space.score_matrix()
        scores, first, inverse, counts = np.unique(
            all_scores, axis=0, return_index=True, return_inverse=True, return_counts=True
        )
        self.class_of = inverse.astype(np.int64).ravel()
        self.scores = scores
        self.sizes = counts
        self.reps = first.astype(np.int64)
        self.K = scores.shape[0]

    def class_of_forward(self, forward: Sequence[int]) -> int:
        return int(self.class_of[self.space.encode(forward)])

    def members(self, k: int) -> np.ndarray:
        return np.nonzero(self.class_of == k)[0]

    def bankrupt_classes(self, v: int) -> np.ndarray:
        """Class ids where v has zero incoming credit (score_v == d_v)."""
        d_v = self.network.degree_capacity(v)
        return np.nonzero(self.scores[:, v] == d_v)[0]


def _simple_directed_cycles(network: CreditNetwork) -> list[list[int]]:
    """All simple directed cycles (length >= 3) as closed node sequences.

    Each cycle is rooted at its minimum node, so every orientation of every
    undirected cycle appears exactly once.
    """
    cycles: list[list[int]] = []
    n = network.n

    def extend(root: int, path: list[int], on_path: list[bool]) -> None:
        x = path[-1]
        for y, _ in network.adj[x]:
            if y == root and len(path) >= 3:
                cycles.append(path + [root])
            elif y > root and not on_path[y]:
                on_path[y] = True
                path.append(y)
                extend(root, path, on_path)
                path.pop()
                on_path[y] = False

    for root in range(n):
        on_path = [False] * n
        on_path[root] = True
        extend(root, [root], on_path)
    return cycles


def verify_partition(
    partition: ClassPartition, classes: Sequence[int]
) -> None:
    """Confirm mutual cycle-reachability inside the given classes.

    Breadth-first search over unit routings along feasible simple cycles must
    reach exactly the class members; anything else is an implementation bug.
    """
    net = partition.network
    space = partition.space
    cycles = _simple_directed_cycles(net)
    for k in classes:
        members = set(int(i) for i in partition.members(k))
        start = int(partition.reps[k])
        seen = {start}
        frontier = [start]
        while frontier:
            idx = frontier.pop()
            forward = list(space.decode(idx))
            for cycle in cycles:
                feasible = True
                for a, b in zip(cycle, cycle[1:]):
                    e = net.edge_index[(a, b) if a < b else (b, a)]
                    capacity = forward[e] if a < b else net.totals[e] - forward[e]
                    if capacity < 1:
                        feasible = False
                        break
                if not feasible:
                    continue
                new_forward = list(forward)
                for a, b in zip(cycle, cycle[1:]):
                    e = net.edge_index[(a, b) if a < b else (b, a)]
                    new_forward[e] += -1 if a < b else 1
                j = space.encode(new_forward)
                if j not in members:
                    raise AssertionError(
                        f"cycle routing left class {k}: state {idx} -> {j}"
                    )
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
        if seen != members:
            raise AssertionError(
                f"class {k} not mutually cycle-reachable: "
                f"reached {len(seen)} of {len(members)} states"
            )


def partition_classes(
    network: CreditNetwork,
    space: Optional[StateSpace] = None,
    verify_classes: int = 0,
    seed: int = 0,
) -> ClassPartition:
    """Group states by score vector; optionally verify a sample of classes."""
    if space is None:
        space = enumerate_states(network)
    partition = ClassPartition(network, space)
    if verify_classes > 0:
        rng = np.random.default_rng(seed)
        count = min(verify_classes, partition.K)
        sample = rng.choice(partition.K, size=count, replace=False)
        verify_partition(partition, [int(k) for k in sample])
    return partition


class _ChainWalker:
    """Feasibility tests and unit-payment execution on raw capacity arrays."""

    __slots__ = ("net", "table", "indptr", "arc_from", "arc_to", "arc_rev", "canon",
                 "seen", "parent", "queue", "generation")

    def __init__(self, network: CreditNetwork):
        self.net = network
        self.table = ArcTable(network)
        self.indptr = self.table.indptr.tolist()
        self.arc_from = self.table.arc_from.tolist()
        self.arc_to = self.table.arc_to.tolist()
        self.arc_rev = self.table.arc_rev.tolist()
        self.canon = self.table.canon.tolist()
        n = network.n
        self.seen = [0] * n
        self.parent = [-1] * n
        self.queue = [0] * n
        self.generation = 0

    def caps(self, forward: Sequence[int]) -> list[int]:
        return self.table.caps_from_forward(forward).tolist()

    def forward_of(self, caps: Sequence[int]) -> list[int]:
        return [caps[j] for j in self.canon]

    def route_unit(self, caps: list[int], s: int, t: int) -> bool:
        """Attempt payer s -> payee t unit payment in place; True on success."""
        self.generation += 1
        gen = self.generation
        seen, parent, queue = self.seen, self.parent, self.queue
        indptr, arc_to = self.indptr, self.arc_to
        seen[t] = gen
        parent[t] = -1
        queue[0] = t
        head, tail = 0, 1
        found = False
        while head < tail and not found:
            x = queue[head]
            head += 1
            for j in range(indptr[x], indptr[x + 1]):
                if caps[j] >= 1:
                    y = arc_to[j]
                    if seen[y] != gen:
                        seen[y] = gen
                        parent[y] = j
                        if y == s:
                            found = True
                            break
                        queue[tail] = y
                        tail += 1
        if not found:
            return False
        y = s
        while True:
            j = parent[y]
            if j < 0:
                return True
            caps[j] -= 1
            caps[self.arc_rev[j]] += 1
            y = self.arc_from[j]


@dataclass
class ClassChain:
    """Class-level transition matrix plus per-class infeasible transaction mass."""

    P: sp.csr_matrix
    failure_mass: np.ndarray
    infeasible_counts: np.ndarray


def class_chain(
    network: CreditNetwork,
    partition: ClassPartition,
    tm: TransactionMatrix,
    check_representatives: int = 0,
) -> ClassChain:
    """Apply every positive-rate transaction to one representative per class.

    Feasible transactions map to the resulting state's class; infeasible mass
    stays on the diagonal. With check_representatives > 0, up to that many
    extra members per class must agree on every transaction's outcome.
    """
    if tm.n != network.n:
        raise CreditNetworkError("rate matrix size does not match the network")
    walker = _ChainWalker(network)
    space = partition.space
    pairs = list(tm.support())
    K = partition.K
    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []
    failure_mass = np.zeros(K)
    infeasible_counts = np.zeros(K, dtype=np.int64)

    def outcomes(state_index: int) -> list[int]:
        """Target class per pair, -1 for infeasible."""
        base = walker.caps(list(space.decode(state_index)))
        result = []
        for s, t, _ in pairs:
            caps = list(base)
            if walker.route_unit(caps, s, t):
                result.append(partition.class_of_forward(walker.forward_of(caps)))
            else:
                result.append(-1)
        return result

    for k in range(K):
        targets = outcomes(int(partition.reps[k]))
        for (s, t, rate), j in zip(pairs, targets):
            if j < 0:
                failure_mass[k] += rate
                infeasible_counts[k] += 1
            else:
                rows.append(k)
                cols.append(j)
                data.append(rate)
        if failure_mass[k] > 0.0:
            rows.append(k)
            cols.append(k)
            data.append(failure_mass[k])
        if check_representatives > 0 and partition.sizes[k] > 1:
            extras = partition.members(k)[1 : check_representatives + 1]
            for idx in extras:
                if outcomes(int(idx)) != targets:
                    raise AssertionError(
                        f"representatives of class {k} disagree on transaction outcomes"
                    )
    P = sp.csr_matrix((data, (rows, cols)), shape=(K, K))
    return ClassChain(P=P, failure_mass=failure_mass, infeasible_counts=infeasible_counts)


def _check_aperiodic(P: sp.csr_matrix) -> None:
    if P.diagonal().max() > 0:
        return
    # gcd of (level[u] + 1 - level[v]) over edges, from a BFS levelling
    K = P.shape[0]
    level = np.full(K, -1, dtype=np.int64)
    level[0] = 0
    frontier = [0]
    indptr, indices = P.indptr, P.indices
    while frontier:
        nxt = []
        for u in frontier:
            for pos in range(indptr[u], indptr[u + 1]):
                v = indices[pos]
                if level[v] < 0:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    g = 0
    coo = P.tocoo()
    for u, v in zip(coo.row, coo.col):
        g = math.gcd(g, int(level[u]) + 1 - int(level[v]))
    if g > 1:
        raise PeriodicChainError(g)


def stationary_distribution(P: Union[np.ndarray, sp.spmatrix], tol: float = 1e-12) -> np.ndarray:
    """Solve pi P = pi, sum(pi) = 1 for an irreducible aperiodic chain.

    Direct dense solve up to DENSE_SOLVE_LIMIT classes, sparse direct solve
    beyond. Raises ReducibleChainError / PeriodicChainError otherwise.
    """
    P_sp = sp.csr_matrix(P)
    K = P_sp.shape[0]
    row_sums = np.asarray(P_sp.sum(axis=1)).ravel()
    if np.max(np.abs(row_sums - 1.0)) > 1e-9:
        raise CreditNetworkError("transition matrix is not row-stochastic")
    if K > 1:
        n_comp, labels = connected_components(P_sp, directed=True, connection="strong")
        if n_comp > 1:
            raise ReducibleChainError(labels)
    _check_aperiodic(P_sp)

    if K == 1:
        return np.array([1.0])
    if K <= DENSE_SOLVE_LIMIT:
        A = P_sp.toarray().T - np.eye(K)
        A[-1, :] = 1.0
        b = np.zeros(K)
        b[-1] = 1.0
        pi = np.linalg.solve(A, b)
    else:
        A = (P_sp.T - sp.identity(K, format="csr")).tolil()
        A[K - 1, :] = 1.0
        b = np.zeros(K)
        b[-1] = 1.0
        pi = spsolve(A.tocsr(), b)
    pi = np.maximum(pi, 0.0)
    pi = pi / pi.sum()
    residual = float(np.max(np.abs(P_sp.T @ pi - pi)))
    if residual > tol:
        raise CreditNetworkError(f"stationary solve residual {residual} exceeds {tol}")
    return pi


def accessible_classes(P: Union[np.ndarray, sp.spmatrix], start: int) -> np.ndarray:
    """Class ids reachable from `start` in the transition digraph."""
    P_sp = sp.csr_matrix(P)
    K = P_sp.shape[0]
    seen = np.zeros(K, dtype=bool)
    seen[start] = True
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for pos in range(P_sp.indptr[u], P_sp.indptr[u + 1]):
                v = int(P_sp.indices[pos])
                if not seen[v]:
                    seen[v] = True
                    nxt.append(v)
        frontier = nxt
    return np.nonzero(seen)[0]


def _pair_feasibility_counts(
    network: CreditNetwork, partition: ClassPartition, pairs: list[tuple[int, int]]
) -> np.ndarray:
    """Number of classes in which each ordered pair is feasible."""
    walker = _ChainWalker(network)
    space = partition.space
    counts = np.zeros(len(pairs), dtype=np.int64)
    for k in range(partition.K):
        caps = walker.caps(list(space.decode(int(partition.reps[k]))))
        for i, (s, t) in enumerate(pairs):
            if walker.route_unit(list(caps), s, t):
                counts[i] += 1
    return counts


def exact_pair_success(
    network: CreditNetwork, s: int, t: int, partition: Optional[ClassPartition] = None
) -> Fraction:
    """Steady-state success probability of (s, t) under a symmetric ergodic
    regime: the fraction of classes in which the pair is feasible."""
    if partition is None:
        partition = partition_classes(network)
    count = _pair_feasibility_counts(network, partition, [(s, t)])[0]
    return Fraction(int(count), partition.K)


def exact_failure_probability(
    network: CreditNetwork,
    tm: TransactionMatrix,
    partition: Optional[ClassPartition] = None,
    verify_uniform: bool = True,
    tol: float = 1e-9,
) -> Union[Fraction, float]:
    """Steady-state transaction failure probability.

    Uniform regime: exact rational count over classes, cross-checked against
    the numerically solved stationary distribution (must be uniform within
    tol). Other regimes: stationary solve, then pi . failure_mass.
    """
    if partition is None:
        partition = partition_classes(network)
    chain = class_chain(network, partition, tm)
    if tm.has_exact:
        if verify_uniform:
            pi = stationary_distribution(chain.P)
            deviation = float(np.max(np.abs(pi - 1.0 / partition.K)))
            if deviation > tol:
                raise CreditNetworkError(
                    f"stationary distribution deviates from uniform by {deviation}"
                )
        total_infeasible = int(chain.infeasible_counts.sum())
        n = network.n
        return Fraction(total_infeasible, partition.K * n * (n - 1))
    pi = stationary_distribution(chain.P)
    return float(pi @ chain.failure_mass)


def exact_bankruptcy_probability(
    network: CreditNetwork,
    tm: TransactionMatrix,
    v: int,
    partition: Optional[ClassPartition] = None,
) -> Union[Fraction, float]:
    """Steady-state probability that v has zero incoming credit.

    Requires a symmetric regime. Uniform rates give the exact fraction of
    classes with v bankrupt; symmetric explicit rates use the solved
    stationary distribution.
    """
    if not tm.symmetric:
        raise CreditNetworkError("bankruptcy analysis requires a symmetric rate matrix")
    network._check_node(v)
    if partition is None:
        partition = partition_classes(network)
    bankrupt = partition.bankrupt_classes(v)
    if tm.has_exact:
        return Fraction(len(bankrupt), partition.K)
    chain = class_chain(network, partition, tm)
    pi = stationary_distribution(chain.P)
    return float(pi[bankrupt].sum())


@dataclass
class StationaryResult:
    """Full steady-state analysis of one instance."""

    partition: ClassPartition
    P: sp.csr_matrix
    pi: np.ndarray
    failure_probability: Union[Fraction, float]
    bankruptcy: list[Union[Fraction, float]]


def analyze(network: CreditNetwork, tm: TransactionMatrix) -> StationaryResult:
    partition = partition_classes(network)
    chain = class_chain(network, partition, tm)
    pi = stationary_distribution(chain.P)
    if tm.has_exact:
        failure: Union[Fraction, float] = Fraction(
            int(chain.infeasible_counts.sum()), partition.K * network.n * (network.n - 1)
        )
        bankruptcy = [
            Fraction(len(partition.bankrupt_classes(v)), partition.K)
            for v in range(network.n)
        ]
    else:
        failure = float(pi @ chain.failure_mass)
        bankruptcy = [
            float(pi[partition.bankrupt_classes(v)].sum()) for v in range(network.n)
        ]
    return StationaryResult(partition, chain.P, pi, failure, bankruptcy)


class _RollbackUnionFind:
    """Union-find without path compression so unions can be undone."""

    __slots__ = ("parent", "size", "trail")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.trail: list[int] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.trail.append(rb)
        return True

    def undo(self) -> None:
        rb = self.trail.pop()
        ra = self.parent[rb]
        self.parent[rb] = rb
        self.size[ra] -= self.size[rb]


def count_forests(
    network: CreditNetwork,
    excluded_node: Optional[int] = None,
    cap: int = DEFAULT_FOREST_CAP,
) -> int:
    """Number of acyclic subsets of the labeled unit edges.

    An edge of total c contributes c distinguishable unit copies; two parallel
    copies already form a cycle. With excluded_node, only edges avoiding that
    node are available (forests on the remaining nodes). Brute-force
    backtracking with rollback union-find: slow and obviously correct.
    """
    if excluded_node is not None:
        network._check_node(excluded_node)
    unit_edges: list[tuple[int, int]] = []
    for e, (u, v) in enumerate(network.edges):
        if excluded_node is not None and excluded_node in (u, v):
            continue
        unit_edges.extend([(u, v)] * network.totals[e])
    if len(unit_edges) > cap:
        raise ForestCapExceeded(len(unit_edges), cap)
    uf = _RollbackUnionFind(network.n)

    def recurse(i: int) -> int:
        if i == len(unit_edges):
            return 1
        total = recurse(i + 1)
        u, v = unit_edges[i]
        if uf.union(u, v):
            total += recurse(i + 1)
            uf.undo()
        return total

    return recurse(0)


def centralized_states(n_leaves: int, C: int) -> list[tuple[int, ...]]:
    """All distributions of C credit units over n_leaves leaves, lexicographic."""
    if n_leaves < 1:
        raise CreditNetworkError("need at least one leaf")
    if C < 0:
        raise CreditNetworkError("total credit must be nonnegative")
    states: list[tuple[int, ...]] = []

    def build(prefix: list[int], remaining: int) -> None:
        if len(prefix) == n_leaves - 1:
            states.append(tuple(prefix + [remaining]))
            return
        for x in range(remaining + 1):
            build(prefix + [x], remaining - x)

    build([], C)
    return states


def centralized_exact_failure(n_leaves: int, C: int) -> Fraction:
    """Failure probability of the enumerated centralized chain, uniform rates.

    Builds the full chain over credit distributions, verifies exactly that the
    uniform distribution is stationary (all column sums equal 1), and averages
    the infeasible transaction mass.
    """
    if n_leaves < 2:
        raise CreditNetworkError("centralized chain needs at least two leaves")
    states = centralized_states(n_leaves, C)
    index = {s: i for i, s in enumerate(states)}
    K = len(states)
    rate = Fraction(1, n_leaves * (n_leaves - 1))
    column_sums = [Fraction(0)] * K
    total_failure = Fraction(0)
    for i, state in enumerate(states):
        for s in range(n_leaves):
            for t in range(n_leaves):
                if s == t:
                    continue
                if state[s] == 0:
                    column_sums[i] += rate
                    total_failure += rate
                else:
                    succ = list(state)
                    succ[s] -= 1
                    succ[t] += 1
                    column_sums[index[tuple(succ)]] += rate
    if any(cs != 1 for cs in column_sums):
        raise AssertionError("uniform distribution is not stationary for the centralized chain")
    return total_failure / K
