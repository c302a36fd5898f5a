"""Inverse resonance scattering for radial waveguides."""
from .geometry import Potential, RadiusProfile, TransversalMode, reduce_potential
from .jost import BoundStateList, JostEvaluator, bound_states, s_matrix

__version__ = "0.1.0"

__all__ = [
    "Potential",
    "RadiusProfile",
    "TransversalMode",
    "reduce_potential",
    "JostEvaluator",
    "BoundStateList",
    "bound_states",
    "s_matrix",
    "__version__",
]
