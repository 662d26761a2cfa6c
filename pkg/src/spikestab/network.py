"""L-layer feedforward spiking networks and the spike-count argmax classifier.

Evaluation is time-synchronous: at each step, layer l consumes layer l-1's
spikes from the same step.  Because the topology is feedforward, each layer's
full spike train can be computed from the previous layer's train in one pass.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np

from spikestab import kernels
from spikestab.core import (
    STREAM_WEIGHTS,
    InputSequence,
    SeedSpec,
    gaussian_weights,
)
from spikestab.neuron import HEAVISIDE, SIGNED, NeuronParams

_MAGIC = b"SSNN"
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class NetworkConfig:
    """Layer widths, shared neuron parameters, and per-layer weight matrices."""

    layer_widths: tuple
    params: NeuronParams
    weights: tuple

    def __post_init__(self):
        widths = tuple(int(w) for w in self.layer_widths)
        if len(widths) < 2 or any(w < 1 for w in widths):
            raise ValueError("layer_widths must list n_0..n_L with all widths >= 1")
        weights = tuple(np.asarray(W, dtype=np.float64) for W in self.weights)
        if len(weights) != len(widths) - 1:
            raise ValueError("need one weight matrix per layer")
        for l, W in enumerate(weights):
            if W.shape != (widths[l + 1], widths[l]):
                raise ValueError(
                    f"layer {l + 1} weights have shape {W.shape}, "
                    f"expected {(widths[l + 1], widths[l])}"
                )
        object.__setattr__(self, "layer_widths", widths)
        object.__setattr__(self, "weights", weights)

    @property
    def L(self) -> int:
        return len(self.layer_widths) - 1

    @property
    def n_in(self) -> int:
        return self.layer_widths[0]

    @property
    def n_out(self) -> int:
        return self.layer_widths[-1]

    @property
    def d(self) -> int:
        return sum(W.size for W in self.weights)


@dataclass(frozen=True)
class ForwardRecord:
    """Per-layer spike trains and potential traces of one forward pass."""

    layer_spikes: tuple  # (T, n_l) int8 per layer, l = 1..L
    layer_potentials: tuple
    spike_counts: np.ndarray  # per output neuron, sum over time


@dataclass(frozen=True)
class Classification:
    predicted_class: int
    counts: np.ndarray
    tie: bool


def init_random(layer_widths, params: NeuronParams, seed: SeedSpec, draw: int = 0) -> NetworkConfig:
    """Network with i.i.d. N(0, 1/fan_in) weights, deterministic under the seed."""
    widths = tuple(int(w) for w in layer_widths)
    weights = []
    for l in range(1, len(widths)):
        fan_in = widths[l - 1]
        rng = seed.rng(STREAM_WEIGHTS, draw, l)
        weights.append(gaussian_weights(widths[l], fan_in, 1.0 / fan_in, rng))
    return NetworkConfig(widths, params, tuple(weights))


def forward(net: NetworkConfig, inputs: InputSequence) -> ForwardRecord:
    """Full forward pass returning every layer's train and potentials."""
    if inputs.n != net.n_in:
        raise ValueError(f"input dimension {inputs.n} does not match n_0={net.n_in}")
    if inputs.T != net.params.latency:
        raise ValueError(f"input length {inputs.T} does not match latency {net.params.latency}")
    s = inputs.steps.astype(np.float64)
    all_spikes, all_potentials = [], []
    for W in net.weights:
        drives = s @ W.T
        spikes, potentials = kernels.lif_forward(
            drives, net.params.beta, net.params.theta, net.params.signed
        )
        all_spikes.append(spikes)
        all_potentials.append(potentials)
        s = spikes.astype(np.float64)
    counts = all_spikes[-1].sum(axis=0, dtype=np.int64)
    return ForwardRecord(tuple(all_spikes), tuple(all_potentials), counts)


def classify_counts(counts: np.ndarray) -> Classification:
    """Argmax with lowest-index tie-breaking and an explicit tie flag."""
    counts = np.asarray(counts)
    best = int(np.argmax(counts))
    tie = bool(np.count_nonzero(counts == counts[best]) > 1)
    return Classification(best, counts, tie)


def classify(net: NetworkConfig, inputs: InputSequence) -> Classification:
    return classify_counts(forward(net, inputs).spike_counts)


def forward_counts_batch(net: NetworkConfig, steps: np.ndarray) -> np.ndarray:
    """Output spike counts for a batch of input sequences.

    steps: (T, m, n_0) array of +-1 inputs; returns (m, n_L) int64 counts.
    """
    T, m, _ = steps.shape
    # flatten (T, m) into one axis so each layer is a single large GEMM
    s = steps.reshape(T * m, -1).astype(np.float64)
    for W in net.weights:
        drives = s @ W.T  # (T*m, n_l)
        spikes, _ = kernels.lif_forward(
            drives.reshape(T, m * W.shape[0]), net.params.beta, net.params.theta, net.params.signed
        )
        s = spikes.reshape(T * m, W.shape[0]).astype(np.float64)
    return s.reshape(T, m, -1).sum(axis=0).astype(np.int64)


def classify_static_batch(net: NetworkConfig, X: np.ndarray, chunk: int = 1024):
    """Classify a batch of static inputs; returns (labels, ties) arrays.

    X: (m, n_0) array of +-1 points, each presented for the full latency.
    """
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[1] != net.n_in:
        raise ValueError(f"expected (m, {net.n_in}) inputs, got {X.shape}")
    m = X.shape[0]
    T = net.params.latency
    labels = np.empty(m, dtype=np.int64)
    ties = np.empty(m, dtype=bool)
    for start in range(0, m, chunk):
        block = X[start : start + chunk]
        steps = np.broadcast_to(block, (T,) + block.shape)
        counts = forward_counts_batch(net, steps)
        labels[start : start + block.shape[0]] = counts.argmax(axis=1)
        best = counts.max(axis=1, keepdims=True)
        ties[start : start + block.shape[0]] = (counts == best).sum(axis=1) > 1
    return labels, ties


class NetworkClassifier:
    """Batch classifier view of a network on static inputs."""

    def __init__(self, net: NetworkConfig):
        self.net = net
        self.n = net.n_in

    def predict(self, X: np.ndarray):
        return classify_static_batch(self.net, X)


class BooleanClassifier:
    """Wrap a +-1-valued batch function as a two-class classifier.

    Output +1 maps to class 0, -1 to class 1; ties never occur.
    """

    def __init__(self, fn, n: int):
        self.fn = fn
        self.n = int(n)

    def predict(self, X: np.ndarray):
        vals = np.asarray(self.fn(np.asarray(X)))
        labels = (vals < 0).astype(np.int64)
        return labels, np.zeros(labels.shape, dtype=bool)


def network_family(layer_widths, params: NeuronParams, seed: SeedSpec):
    """Weight-draw-indexed sampler of network classifiers."""

    def sample(draw: int) -> NetworkClassifier:
        return NetworkClassifier(init_random(layer_widths, params, seed, draw=draw))

    return sample


def save_network(net: NetworkConfig, path, provenance: dict | None = None):
    """Versioned binary container plus a JSON provenance descriptor.

    Layout: magic, u32 version, u8 alphabet, f64 beta, f64 theta, u32 T,
    u32 L, u32 widths[L+1], then row-major little-endian f64 weights.
    """
    path = str(path)
    p = net.params
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<IB", _FORMAT_VERSION, 0 if p.signed else 1))
        f.write(struct.pack("<ddI", p.beta, p.theta, p.latency))
        f.write(struct.pack("<I", net.L))
        f.write(struct.pack(f"<{net.L + 1}I", *net.layer_widths))
        for W in net.weights:
            f.write(np.ascontiguousarray(W, dtype="<f8").tobytes())
    descriptor = {
        "format_version": _FORMAT_VERSION,
        "layer_widths": list(net.layer_widths),
        "beta": p.beta,
        "theta": p.theta,
        "latency": p.latency,
        "alphabet": p.alphabet,
        "d": net.d,
    }
    if provenance:
        descriptor["provenance"] = provenance
    with open(path + ".json", "w") as f:
        json.dump(descriptor, f, indent=2, sort_keys=True)
        f.write("\n")


def load_network(path) -> NetworkConfig:
    with open(str(path), "rb") as f:
        if f.read(4) != _MAGIC:
            raise ValueError("not a spikestab network file")
        version, alphabet_code = struct.unpack("<IB", f.read(5))
        if version != _FORMAT_VERSION:
            raise ValueError(f"unsupported format version {version}")
        beta, theta, latency = struct.unpack("<ddI", f.read(20))
        (L,) = struct.unpack("<I", f.read(4))
        widths = struct.unpack(f"<{L + 1}I", f.read(4 * (L + 1)))
        params = NeuronParams(
            beta=beta,
            theta=theta,
            latency=latency,
            alphabet=SIGNED if alphabet_code == 0 else HEAVISIDE,
        )
        weights = []
        for l in range(1, L + 1):
            count = widths[l] * widths[l - 1]
            buf = f.read(8 * count)
            W = np.frombuffer(buf, dtype="<f8").reshape(widths[l], widths[l - 1])
            weights.append(W.astype(np.float64))
    return NetworkConfig(widths, params, tuple(weights))
