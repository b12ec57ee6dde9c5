# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel; semantics identical to `_pykernel`."""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint64_t

IMPL = "cython"


cdef struct Xoshiro:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3


cdef inline uint64_t _splitmix_next(uint64_t *x) nogil:
    cdef uint64_t z
    x[0] = x[0] + <uint64_t>0x9E3779B97F4A7C15
    z = x[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef void _seed(Xoshiro *rng, uint64_t seed) nogil:
    cdef uint64_t x = seed
    rng.s0 = _splitmix_next(&x)
    rng.s1 = _splitmix_next(&x)
    rng.s2 = _splitmix_next(&x)
    rng.s3 = _splitmix_next(&x)
    if rng.s0 == 0 and rng.s1 == 0 and rng.s2 == 0 and rng.s3 == 0:
        rng.s0 = 1


cdef inline uint64_t _next_u64(Xoshiro *rng) nogil:
    cdef uint64_t result = _rotl(rng.s1 * 5, 7) * 9
    cdef uint64_t t = rng.s1 << 17
    rng.s2 ^= rng.s0
    rng.s3 ^= rng.s1
    rng.s1 ^= rng.s2
    rng.s0 ^= rng.s3
    rng.s2 ^= t
    rng.s3 = _rotl(rng.s3, 45)
    return result


cdef inline double _next_double(Xoshiro *rng) nogil:
    return (_next_u64(rng) >> 11) * (1.0 / 9007199254740992.0)


cdef inline uint64_t _mask_for(uint64_t n) nogil:
    cdef uint64_t m = n - 1
    m |= m >> 1
    m |= m >> 2
    m |= m >> 4
    m |= m >> 8
    m |= m >> 16
    m |= m >> 32
    return m


cdef inline int64_t _next_below(Xoshiro *rng, int64_t n) nogil:
    cdef uint64_t mask = _mask_for(<uint64_t>n)
    cdef uint64_t x
    while True:
        x = _next_u64(rng) & mask
        if x < <uint64_t>n:
            return <int64_t>x


def run_chain(
    int n,
    int32_t[::1] indptr,
    int32_t[::1] arc_from,
    int32_t[::1] arc_to,
    int32_t[::1] arc_rev,
    int64_t[::1] cap,
    int64_t[::1] arc_total,
    int mode,
    double[::1] cum,
    unsigned long long seed,
    long long window,
    double epsilon,
    long long max_steps,
    bint check_invariants=False,
):
    """Run unit transactions until window convergence or max_steps.

    Mutates `cap` in place; returns (steps, successes, converged).
    """
    cdef Xoshiro rng
    _seed(&rng, <uint64_t>seed)

    cdef int n_arcs = cap.shape[0]
    cdef int n_pairs = cum.shape[0]

    seen_arr = np.zeros(n, dtype=np.int64)
    parent_arr = np.full(n, -1, dtype=np.int32)
    queue_arr = np.zeros(n, dtype=np.int32)
    cdef int64_t[::1] seen = seen_arr
    cdef int32_t[::1] parent_arc = parent_arr
    cdef int32_t[::1] queue = queue_arr

    cdef int64_t generation = 0
    cdef long long steps = 0
    cdef long long successes = 0
    cdef long long window_start_successes = 0
    cdef double prev_rate = -1.0
    cdef double rate
    cdef bint converged = False
    cdef bint found
    cdef bint bad = False

    cdef int s, t, x, y, head, tail, j, k, lo, hi, mid
    cdef double u
    cdef int64_t base_total = 0
    for j in range(n_arcs):
        base_total += cap[j]
    cdef int64_t check_sum

    with nogil:
        while steps < max_steps:
            # sample the ordered pair (s, t)
            if mode == 0:
                while True:
                    s = <int>_next_below(&rng, n)
                    t = <int>_next_below(&rng, n)
                    if s != t:
                        break
            else:
                u = _next_double(&rng)
                lo = 0
                hi = n_pairs
                while lo < hi:
                    mid = (lo + hi) // 2
                    if u < cum[mid]:
                        hi = mid
                    else:
                        lo = mid + 1
                k = lo
                if k >= n_pairs:
                    k = n_pairs - 1
                while k > 0 and cum[k] == cum[k - 1]:
                    k -= 1
                s = k // n
                t = k - s * n

            # breadth-first search for the shortest feasible path t -> s,
            # expanding neighbors in ascending id order
            generation += 1
            seen[t] = generation
            parent_arc[t] = -1
            queue[0] = t
            head = 0
            tail = 1
            found = False
            while head < tail and not found:
                x = queue[head]
                head += 1
                for j in range(indptr[x], indptr[x + 1]):
                    if cap[j] >= 1:
                        y = arc_to[j]
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
                    cap[j] -= 1
                    cap[arc_rev[j]] += 1
                    y = arc_from[j]

            steps += 1
            if steps % window == 0:
                rate = <double>(successes - window_start_successes) / <double>window
                if check_invariants:
                    check_sum = 0
                    for j in range(n_arcs):
                        check_sum += cap[j]
                        if cap[j] + cap[arc_rev[j]] != arc_total[j]:
                            bad = True
                    if check_sum != base_total:
                        bad = True
                    if bad:
                        break
                if prev_rate >= 0.0 and rate - prev_rate <= epsilon and prev_rate - rate <= epsilon:
                    converged = True
                    break
                prev_rate = rate
                window_start_successes = successes

    if bad:
        raise AssertionError("credit conservation violated")
    return steps, successes, bool(converged)
