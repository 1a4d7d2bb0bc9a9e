"""Quantum-channel calculus with entropy-inequality verification suites.

The package is organized around the Choi-matrix representation of quantum
maps: ``matcore`` provides the linear-algebra and entropy primitives,
``channels`` the channel calculus, ``statecomp`` the reshuffling-based
composition of bipartite states, ``classical`` the stochastic-matrix layer,
``quasifree`` the fermionic quasi-free special case, ``randgen`` seeded
object samplers, and ``harness`` the randomized verification suites behind
the ``dynsub`` command line tool.
"""

from . import channels, classical, harness, matcore, quasifree, randgen, statecomp
from .errors import DynsubError

__all__ = [
    "channels",
    "classical",
    "harness",
    "matcore",
    "quasifree",
    "randgen",
    "statecomp",
    "DynsubError",
]

__version__ = "0.1.0"
