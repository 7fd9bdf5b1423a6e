"""Planar loop-erased random walk: exact laws, samplers and estimators."""

from .lattice import Domain, ball, square
from .loop_erase import loop_erase, reverse_loop_erase
from .potential import GreenOperator, PreconditionError, hitting_probability
from .rng import RngStream

__all__ = [
    "Domain",
    "GreenOperator",
    "PreconditionError",
    "RngStream",
    "ball",
    "hitting_probability",
    "loop_erase",
    "reverse_loop_erase",
    "square",
]

__version__ = "0.1.0"
