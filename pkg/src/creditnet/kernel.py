"""Kernel selection: compiled extension when built, pure Python otherwise.

Set CREDITNET_PURE_PYTHON=1 before import to force the fallback. Both lanes
implement the same algorithm and RNG and produce identical results.
"""
from __future__ import annotations

import os

if os.environ.get("CREDITNET_PURE_PYTHON") == "1":
    from . import _pykernel as _impl
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernel as _impl

IMPL: str = _impl.IMPL
run_chain = _impl.run_chain
