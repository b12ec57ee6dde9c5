"""Shared hypothesis strategies: small random networks and transactions."""
from __future__ import annotations

import hypothesis.strategies as st

from creditnet.core import build_network


@st.composite
def network_states(draw, max_n: int = 6, max_c: int = 3, require_edges: bool = True):
    """A small CreditNetwork plus an arbitrary valid NetworkState."""
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    min_size = 1 if require_edges else 0
    chosen = draw(
        st.lists(st.sampled_from(pairs), unique=True, min_size=min_size, max_size=len(pairs))
    )
    rows = []
    for u, v in chosen:
        total = draw(st.integers(1, max_c))
        fwd = draw(st.integers(0, total))
        rows.append((u, v, fwd, total - fwd))
    return build_network(rows, n=n)


@st.composite
def transactions(draw, n: int, max_p: int = 3):
    s = draw(st.integers(0, n - 1))
    t = draw(st.integers(0, n - 2))
    if t >= s:
        t += 1
    return s, t, draw(st.integers(1, max_p))
