"""Discrete-event simulator for single-path vs multipath source routing in
information-centric networks."""

from .config import SimulationConfig

__version__ = "0.1.0"
__all__ = ["SimulationConfig", "__version__"]
