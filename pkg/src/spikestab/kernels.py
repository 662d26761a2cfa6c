"""Backend selector for the hot kernels.

Prefers the compiled Cython extension; falls back to the pure-NumPy
implementation when the extension is missing or SPIKESTAB_PURE_PYTHON is set.
Both backends are bit-identical (see tests/test_kernels.py).
"""

import os

import numpy as np

if os.environ.get("SPIKESTAB_PURE_PYTHON"):
    from spikestab import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from spikestab import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from spikestab import _kernels_py as _impl

        BACKEND = "python"


def lif_forward(drives, beta, theta, signed):
    """LIF recursion over a (T, m) drive batch -> (spikes, potentials)."""
    drives = np.ascontiguousarray(drives, dtype=np.float64)
    return _impl.lif_forward(drives, float(beta), float(theta), bool(signed))


def fwht_inplace(a):
    """In-place Walsh-Hadamard butterfly on a power-of-two float64 array."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    _impl.fwht_inplace(a)
    return a
