"""Bit-identity of the compiled kernels and their pure-Python fallbacks."""

import numpy as np
import pytest

from spikestab import _kernels_py, kernels


def _compiled():
    try:
        from spikestab import _kernels  # noqa: F401

        return _kernels
    except ImportError:
        return None


compiled = _compiled()
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def test_backend_reports_selection():
    assert kernels.BACKEND in ("cython", "python")


@needs_compiled
@pytest.mark.parametrize("beta,theta,signed", [(1.0, 0.5, True), (0.9, 1.0, True), (1.0, 0.5, False)])
def test_lif_forward_backends_bit_identical(beta, theta, signed):
    rng = np.random.default_rng(7)
    drives = rng.normal(size=(13, 64))
    s1, u1 = compiled.lif_forward(np.ascontiguousarray(drives), beta, theta, signed)
    s2, u2 = _kernels_py.lif_forward(drives, beta, theta, signed)
    assert np.array_equal(np.asarray(s1), s2)
    assert np.array_equal(np.asarray(u1), u2)


@needs_compiled
def test_fwht_backends_bit_identical():
    rng = np.random.default_rng(11)
    a1 = rng.normal(size=1 << 12)
    a2 = a1.copy()
    compiled.fwht_inplace(a1)
    _kernels_py.fwht_inplace(a2)
    assert np.array_equal(a1, a2)


def test_fwht_involution_scaled():
    rng = np.random.default_rng(3)
    a = rng.normal(size=256)
    b = a.copy()
    kernels.fwht_inplace(b)
    kernels.fwht_inplace(b)
    assert np.allclose(b / 256, a, atol=1e-12)


def test_pure_python_env_override(monkeypatch):
    import importlib
    import os
    import subprocess
    import sys

    env = dict(os.environ, SPIKESTAB_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import spikestab.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
