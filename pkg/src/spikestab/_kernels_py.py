"""Pure-NumPy implementations of the hot kernels.

Used as a fallback when the compiled extension is unavailable (or when
SPIKESTAB_PURE_PYTHON is set).  Both backends must produce bit-identical
results; the elementwise update order below mirrors the compiled loop.
"""

import numpy as np


def lif_forward(drives, beta, theta, signed):
    """Run the discrete-time LIF recursion over a batch of drive columns.

    drives: (T, m) float64 synaptic inputs, one column per independent neuron.
    Returns (spikes, potentials) with shapes (T, m) int8 / (T, m) float64.

    Signed update:    u_t = beta*u_{t-1} + drive_t - (theta/2)*(s_{t-1}+1),
                      s_t = +1 if u_t >= theta else -1,  s_0 = -1.
    Heaviside update: u_t = beta*u_{t-1} + drive_t - theta*s_{t-1},
                      s_t = 1 if u_t >= theta else 0,    s_0 = 0.
    """
    drives = np.ascontiguousarray(drives, dtype=np.float64)
    T, m = drives.shape
    u = np.zeros(m, dtype=np.float64)
    s = np.full(m, -1.0 if signed else 0.0, dtype=np.float64)
    spikes = np.empty((T, m), dtype=np.int8)
    potentials = np.empty((T, m), dtype=np.float64)
    for t in range(T):
        if signed:
            u = beta * u + drives[t] - 0.5 * theta * (s + 1.0)
            s = np.where(u >= theta, 1.0, -1.0)
        else:
            u = beta * u + drives[t] - theta * s
            s = np.where(u >= theta, 1.0, 0.0)
        potentials[t] = u
        spikes[t] = s.astype(np.int8)
    return spikes, potentials


def fwht_inplace(a):
    """In-place fast Walsh-Hadamard butterfly, O(n * 2^n).

    a: 1-D float64 array of power-of-two length.  Computes
    out[s] = sum_m (-1)^{popcount(s & m)} a[m].
    """
    n = a.shape[0]
    h = 1
    while h < n:
        view = a.reshape(-1, 2 * h)
        x = view[:, :h].copy()
        y = view[:, h:].copy()
        view[:, :h] = x + y
        view[:, h:] = x - y
        h *= 2
    return a
