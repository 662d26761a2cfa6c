"""Noise sensitivity and Fourier-Walsh analysis of discrete-time LIF
spiking-network classifiers."""

__version__ = "0.1.0"

from spikestab.core import (  # noqa: F401
    HypercubePoint,
    InputSequence,
    PerturbationModel,
    SeedSpec,
    hamming_distance,
    perturb,
    sample_uniform_point,
    gaussian_weights,
)
from spikestab.neuron import NeuronParams, SpikeTrain, run, run_closed_form  # noqa: F401
from spikestab.network import (  # noqa: F401
    NetworkConfig,
    classify,
    forward,
    init_random,
    load_network,
    save_network,
)
