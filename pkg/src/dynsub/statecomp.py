"""Composition of bipartite operators through the reshuffling involution.

The product ``x (.) y = reshuffle(reshuffle(x) @ reshuffle(y))`` mirrors the
concatenation of quantum maps at the level of their Choi matrices.  It is
associative, non-commutative, preserves Hermiticity and positivity, and the
rescaled identity ``reshuffle(eye) = N * P_plus`` is its neutral element.

Unit-trace operators are not closed under the raw product: composing two
unit-trace bipartite states yields trace 1/N.  ``odot_state`` multiplies by
N, which restores closure on the class of states with maximally mixed left
marginal and makes the maximally entangled projector the neutral element.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import ClassError, DimensionError
from .matcore import _square_side, kron, max_entangled_projector, partial_trace, reshuffle

MEMBERSHIP_TOL = 1e-8


class StateClass(enum.Enum):
    GENERAL = "general"
    D_I = "left marginal maximally mixed"
    D_II = "both marginals maximally mixed"


def odot_raw(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Reshuffled product of two matrices of dimension N**2."""
    if np.asarray(x).shape != np.asarray(y).shape:
        raise DimensionError(f"operand shapes differ: {x.shape} vs {y.shape}")
    _square_side(x)
    return reshuffle(reshuffle(x) @ reshuffle(y))


def membership(sigma: np.ndarray, tol: float = MEMBERSHIP_TOL) -> StateClass:
    """Classify a bipartite state by which marginals are maximally mixed."""
    n = _square_side(sigma)
    flat = np.eye(n) / n
    left = np.abs(partial_trace(sigma, "A") - flat).max() <= tol
    if not left:
        return StateClass.GENERAL
    right = np.abs(partial_trace(sigma, "B") - flat).max() <= tol
    return StateClass.D_II if right else StateClass.D_I


def odot_state(sigma1: np.ndarray, sigma2: np.ndarray, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """State-level composition: N times the raw product.

    Both operands must have maximally mixed left marginal; the result is
    again such a state, with unit trace.  If both operands also have
    maximally mixed right marginal, so does the result.
    """
    n = _square_side(sigma1)
    for name, s in (("first", sigma1), ("second", sigma2)):
        if membership(s, tol) is StateClass.GENERAL:
            raise ClassError(f"{name} operand has left marginal away from maximally mixed")
    return n * odot_raw(sigma1, sigma2)


def idempotent_extension(rho0: np.ndarray) -> np.ndarray:
    """Extend a state by the maximally mixed one: ``rho0 (x) eye/N``.

    The result is idempotent under ``odot_state`` and, rescaled by N, is the
    Choi matrix of the channel that maps every input to ``rho0``.
    """
    n = np.asarray(rho0).shape[0]
    return kron(rho0, np.eye(n)) / n


def not_square_witness(sigma: np.ndarray) -> float:
    """Max-norm gap between the self-composition and the matrix square."""
    return float(np.abs(odot_raw(sigma, sigma) - sigma @ sigma).max())


__all__ = [
    "StateClass",
    "odot_raw",
    "odot_state",
    "membership",
    "idempotent_extension",
    "not_square_witness",
    "max_entangled_projector",
]
