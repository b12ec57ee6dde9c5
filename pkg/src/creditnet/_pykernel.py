"""Pure-Python simulation kernel.

Mirrors the compiled extension (`_ckernel`) operation for operation: the same
xoshiro256** stream, the same pair sampling, the same breadth-first search
with ascending-id neighbor order, and the same window bookkeeping. Given equal
inputs both lanes produce identical results; this lane is just slower.
"""
from __future__ import annotations

import numpy as np

IMPL = "python"

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> tuple[int, int]:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return x, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256StarStar:
    """xoshiro256** seeded via splitmix64; the documented simulation RNG."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        x = seed & _MASK
        x, self.s0 = _splitmix64(x)
        x, self.s1 = _splitmix64(x)
        x, self.s2 = _splitmix64(x)
        x, self.s3 = _splitmix64(x)
        if self.s0 == self.s1 == self.s2 == self.s3 == 0:
            self.s0 = 1

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def next_below(self, n: int) -> int:
        # Masked rejection keeps the draw unbiased and lane-identical.
        mask = _mask_for(n)
        while True:
            x = self.next_u64() & mask
            if x < n:
                return x


def _mask_for(n: int) -> int:
    m = n - 1
    m |= m >> 1
    m |= m >> 2
    m |= m >> 4
    m |= m >> 8
    m |= m >> 16
    m |= m >> 32
    return m


def _sample_pair(rng: Xoshiro256StarStar, n: int, mode: int, cum) -> tuple[int, int]:
    if mode == 0:
        while True:
            s = rng.next_below(n)
            t = rng.next_below(n)
            if s != t:
                return s, t
    u = rng.next_double()
    lo, hi = 0, len(cum)
    while lo < hi:
        mid = (lo + hi) // 2
        if u < cum[mid]:
            hi = mid
        else:
            lo = mid + 1
    k = lo
    if k >= len(cum):
        k = len(cum) - 1
    while k > 0 and cum[k] == cum[k - 1]:
        k -= 1
    return k // n, k % n


def run_chain(
    n: int,
    indptr: np.ndarray,
    arc_from: np.ndarray,
    arc_to: np.ndarray,
    arc_rev: np.ndarray,
    cap: np.ndarray,
    arc_total: np.ndarray,
    mode: int,
    cum: np.ndarray,
    seed: int,
    window: int,
    epsilon: float,
    max_steps: int,
    check_invariants: bool = False,
) -> tuple[int, int, bool]:
    """Run unit transactions until window convergence or max_steps.

    Mutates `cap` in place; returns (steps, successes, converged).
    """
    indptr_l = indptr.tolist()
    arc_from_l = arc_from.tolist()
    arc_to_l = arc_to.tolist()
    arc_rev_l = arc_rev.tolist()
    cap_l = cap.tolist()
    total_l = arc_total.tolist()
    cum_l = cum.tolist()
    base_total = sum(cap_l)

    rng = Xoshiro256StarStar(seed)
    seen = [0] * n
    parent_arc = [-1] * n
    queue = [0] * n
    generation = 0

    steps = 0
    successes = 0
    window_start_successes = 0
    prev_rate = -1.0
    converged = False

    while steps < max_steps:
        s, t = _sample_pair(rng, n, mode, cum_l)

        generation += 1
        seen[t] = generation
        parent_arc[t] = -1
        queue[0] = t
        head, tail = 0, 1
        found = False
        while head < tail and not found:
            x = queue[head]
            head += 1
            for j in range(indptr_l[x], indptr_l[x + 1]):
                if cap_l[j] >= 1:
                    y = arc_to_l[j]
                    if seen[y] != generation:
                        seen[y] = generation
                        parent_arc[y] = j
                        if y == s:
                            found = True
                            break
                        queue[tail] = y
                        tail += 1

        if found:
            successes += 1
            y = s
            while True:
                j = parent_arc[y]
                if j < 0:
                    break
                cap_l[j] -= 1
                cap_l[arc_rev_l[j]] += 1
                y = arc_from_l[j]

        steps += 1
        if steps % window == 0:
            rate = (successes - window_start_successes) / float(window)
            if check_invariants:
                if sum(cap_l) != base_total:
                    raise AssertionError("credit conservation violated")
                for j in range(len(cap_l)):
                    if cap_l[j] + cap_l[arc_rev_l[j]] != total_l[j]:
                        raise AssertionError("edge split does not sum to its total")
            if prev_rate >= 0.0 and abs(rate - prev_rate) <= epsilon:
                converged = True
                cap[:] = cap_l
                return steps, successes, converged
            prev_rate = rate
            window_start_successes = successes

    cap[:] = cap_l
    return steps, successes, converged
