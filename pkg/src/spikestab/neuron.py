"""Single spiking-neuron dynamics.

Signed (sLIF / sIF) and Heaviside (LIF / IF) variants of the discrete-time
reset-by-subtraction recursion, plus the closed-form beta=1 reformulation used
as an equivalence oracle against the step-by-step dynamics.

Conventions: sign(0) = +1, so the signed neuron fires iff u_t >= theta; the
Heaviside neuron fires iff u_t >= theta.  The initial spike symbol is -1
(signed) or 0 (Heaviside).  Membrane potentials are kept as unclamped reals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from spikestab import kernels
from spikestab.core import InputSequence

SIGNED = "signed"
HEAVISIDE = "heaviside"


@dataclass(frozen=True)
class NeuronParams:
    """Leak factor, threshold, latency, and spike alphabet."""

    beta: float
    theta: float
    latency: int
    alphabet: str = SIGNED

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        if self.theta < 0.0:
            raise ValueError("theta must be nonnegative")
        if self.latency < 1:
            raise ValueError("latency T must be >= 1")
        if self.alphabet not in (SIGNED, HEAVISIDE):
            raise ValueError(f"unknown alphabet {self.alphabet!r}")

    @property
    def signed(self) -> bool:
        return self.alphabet == SIGNED

    @property
    def no_spike(self) -> int:
        return -1 if self.signed else 0


@dataclass(frozen=True)
class NeuronState:
    """Membrane potential, previous spike, and time index."""

    u: float
    s_prev: int
    t: int


def fresh_state(params: NeuronParams) -> NeuronState:
    return NeuronState(u=0.0, s_prev=params.no_spike, t=0)


@dataclass(frozen=True)
class SpikeTrain:
    """Length-T spike vector plus the membrane potential trace."""

    spikes: np.ndarray
    potentials: np.ndarray

    @property
    def T(self) -> int:
        return self.spikes.shape[0]


def step(state: NeuronState, drive: float, params: NeuronParams):
    """One update of the recursion; returns (new_state, spike)."""
    if params.signed:
        u = params.beta * state.u + drive - 0.5 * params.theta * (state.s_prev + 1)
        s = 1 if u >= params.theta else -1
    else:
        u = params.beta * state.u + drive - params.theta * state.s_prev
        s = 1 if u >= params.theta else 0
    return NeuronState(u=u, s_prev=s, t=state.t + 1), s


def run(params: NeuronParams, w: np.ndarray, inputs: InputSequence) -> SpikeTrain:
    """Iterate the recursion over t = 1..T from the zero state."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (inputs.n,):
        raise ValueError(f"weight dimension {w.shape} does not match input n={inputs.n}")
    if inputs.T != params.latency:
        raise ValueError(f"input length {inputs.T} does not match latency {params.latency}")
    drives = inputs.steps.astype(np.float64) @ w
    spikes, potentials = kernels.lif_forward(
        drives[:, None], params.beta, params.theta, params.signed
    )
    return SpikeTrain(spikes[:, 0], potentials[:, 0])


def run_closed_form(params: NeuronParams, w: np.ndarray, inputs: InputSequence) -> SpikeTrain:
    """Closed-form beta=1 signed recursion over cumulative sums.

    s_t = sign( w . (sum_{k<=t} x_k) - theta * (1 + (1/2) sum_{k<t} (s_k + 1)) )
    with s_0 = -1.  Bit-identical to run() for beta=1 and the signed alphabet.
    """
    if params.beta != 1.0:
        raise ValueError("closed form requires beta = 1")
    if not params.signed:
        raise ValueError("closed form requires the signed alphabet")
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (inputs.n,):
        raise ValueError(f"weight dimension {w.shape} does not match input n={inputs.n}")
    csum = np.cumsum(inputs.steps.astype(np.float64) @ w)
    spikes = np.empty(inputs.T, dtype=np.int8)
    potentials = np.empty(inputs.T, dtype=np.float64)
    fired = 0  # (1/2) sum_{k<t} (s_k + 1), with s_0 = -1 contributing 0
    for t in range(inputs.T):
        u = csum[t] - params.theta * fired
        spikes[t] = 1 if u >= params.theta else -1
        potentials[t] = u
        if spikes[t] == 1:
            fired += 1
    return SpikeTrain(spikes, potentials)
