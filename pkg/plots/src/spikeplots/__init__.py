"""Figure rendering for spikestab experiment CSV outputs."""

__version__ = "0.1.0"

from spikeplots.render import PlotSpec, SchemaError, render

__all__ = ["PlotSpec", "SchemaError", "render", "__version__"]
