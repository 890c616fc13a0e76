"""Backend selection for the tick kernel.

STIGMASIM_BACKEND=numpy forces the pure-numpy loop; STIGMASIM_BACKEND=numba
requires the jit kernel and fails loudly if numba is missing. Unset, the jit
kernel is used when importable, numpy otherwise. Both produce bit-identical
event logs; the jit kernel is roughly two orders of magnitude faster on
default-sized runs (see benchmarks/backend_bench.py).
"""

from __future__ import annotations

import os

from . import _kernels_numpy

_ENV = "STIGMASIM_BACKEND"


def available_backends() -> tuple[str, ...]:
    try:
        from . import _kernels_numba  # noqa: F401
        return ("numba", "numpy")
    except ImportError:
        return ("numpy",)


def get_kernel(name: str | None = None):
    """Resolve a chunk-kernel callable by explicit name or environment."""
    if name is None:
        name = os.environ.get(_ENV, "").strip().lower() or None
    if name not in (None, "numpy", "numba"):
        raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")
    if name == "numpy":
        return _kernels_numpy.run_chunk
    try:
        from . import _kernels_numba
        return _kernels_numba.run_chunk
    except ImportError:
        if name == "numba":
            raise
        return _kernels_numpy.run_chunk
