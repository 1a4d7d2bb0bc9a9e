"""Quasi-free fermionic states and maps at the level of one-particle symbols.

A quasi-free state on N fermionic modes is determined by its symbol, an
N-dimensional Hermitian matrix Q with 0 <= Q <= 1; it is pure iff Q is a
projector.  A quasi-free channel is a pair (R, Z) of N-dimensional matrices
with 0 <= Z <= 1 - R^dag R, acting on symbols as Q -> R^dag Q R + Z.  The
map is bistochastic iff Z = (1 - R^dag R)/2, fixing the tracial symbol 1/2.

The analogue of the Jamiolkowski state is the 2N-mode symbol

    1/2 [[1, R], [R^dag, R^dag R + 2 Z]]

whose entropy is the entropy of the map.  ``fock_density`` realizes a
symbol as an explicit 2**N-dimensional density matrix for small N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    BlockFormError,
    ConstraintError,
    DimensionError,
    HermiticityError,
    ModeLimitError,
    NormError,
    ProjectorError,
    SingularSymbolError,
)
from .matcore import _as_square, eta, hermiticity_defect, singular_values

SYMBOL_TOL = 1e-9


def _herm(x: np.ndarray) -> np.ndarray:
    return (x + x.conj().T) / 2


def _psd_sqrt(x: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(_herm(x))
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


def validate_symbol(q: np.ndarray, tol: float = SYMBOL_TOL) -> np.ndarray:
    """Check 0 <= Q <= 1 and Hermiticity within ``tol``."""
    q = _as_square(np.asarray(q, dtype=complex))
    if hermiticity_defect(q) > tol:
        raise HermiticityError("symbol is not Hermitian within tolerance")
    vals = np.linalg.eigvalsh(_herm(q))
    if vals.min() < -tol:
        raise ConstraintError(f"symbol eigenvalue {vals.min():.3e} below 0")
    if vals.max() > 1 + tol:
        raise ConstraintError(f"symbol eigenvalue {vals.max():.3e} above 1")
    return q


@dataclass(frozen=True)
class QFMap:
    """A quasi-free channel, stored as the defining pair (R, Z)."""

    r: np.ndarray
    z: np.ndarray

    @property
    def modes(self) -> int:
        return self.r.shape[0]


def qf_validate(r: np.ndarray, z: np.ndarray, tol: float = SYMBOL_TOL) -> QFMap:
    """Validate the defining constraint 0 <= Z <= 1 - R^dag R."""
    r = _as_square(np.asarray(r, dtype=complex))
    z = _as_square(np.asarray(z, dtype=complex))
    if r.shape != z.shape:
        raise DimensionError(f"R and Z shapes differ: {r.shape} vs {z.shape}")
    if hermiticity_defect(z) > tol:
        raise HermiticityError("Z is not Hermitian within tolerance")
    z_min = np.linalg.eigvalsh(_herm(z)).min()
    if z_min < -tol:
        raise ConstraintError(f"constraint Z >= 0 violated: min eigenvalue {z_min:.3e}")
    gap = _herm(np.eye(r.shape[0]) - r.conj().T @ r - z)
    gap_min = np.linalg.eigvalsh(gap).min()
    if gap_min < -tol:
        raise ConstraintError(
            f"constraint Z <= 1 - R^dag R violated: min eigenvalue {gap_min:.3e}"
        )
    return QFMap(r, z)


def qf_apply(m: QFMap, q: np.ndarray) -> np.ndarray:
    """Symbol action Q -> R^dag Q R + Z."""
    q = _as_square(np.asarray(q, dtype=complex))
    if q.shape[0] != m.modes:
        raise DimensionError(f"symbol dim {q.shape[0]} does not match map modes {m.modes}")
    return m.r.conj().T @ q @ m.r + m.z


def qf_compose(later: QFMap, earlier: QFMap) -> QFMap:
    """Concatenation later after earlier.

    Defined by qf_apply(result, Q) == qf_apply(later, qf_apply(earlier, Q))
    for every symbol, which forces

        R = R_earlier R_later,
        Z = R_later^dag Z_earlier R_later + Z_later.
    """
    if later.modes != earlier.modes:
        raise DimensionError(f"modes differ: {later.modes} vs {earlier.modes}")
    r = earlier.r @ later.r
    z = _herm(later.r.conj().T @ earlier.z @ later.r + later.z)
    return QFMap(r, z)


def qf_jam_symbol(m: QFMap) -> np.ndarray:
    """The 2N-mode symbol encoding the map, block form [[1, R], [R^dag, R^dag R + 2Z]]/2."""
    n = m.modes
    return 0.5 * np.block(
        [[np.eye(n, dtype=complex), m.r], [m.r.conj().T, _herm(m.r.conj().T @ m.r + 2 * m.z)]]
    )


def _split_blocks(sym: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    sym = _as_square(np.asarray(sym, dtype=complex))
    d = sym.shape[0]
    if d % 2 != 0:
        raise BlockFormError(f"symbol dimension {d} is odd")
    n = d // 2
    if np.abs(sym[:n, :n] - 0.5 * np.eye(n)).max() > tol:
        raise BlockFormError("top-left block is not 1/2 identity")
    return 2 * sym[:n, n:], 2 * sym[n:, n:]


def qf_odot_symbol(later_sym: np.ndarray, earlier_sym: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Composition law on 2N-mode map symbols, later operand on the left.

    Matches qf_jam_symbol(qf_compose(later, earlier)); the law is affine in
    the earlier operand and quadratic in the later one.
    """
    l1, l2 = _split_blocks(later_sym, tol)
    e1, e2 = _split_blocks(earlier_sym, tol)
    if l1.shape != e1.shape:
        raise DimensionError(f"operand mode counts differ: {l1.shape[0]} vs {e1.shape[0]}")
    n = l1.shape[0]
    t1 = e1 @ l1
    t2 = _herm(l1.conj().T @ (e2 - np.eye(n)) @ l1 + l2)
    return 0.5 * np.block([[np.eye(n, dtype=complex), t1], [t1.conj().T, t2]])


def qf_state_entropy(q: np.ndarray, tol: float = SYMBOL_TOL) -> float:
    """Entropy of a quasi-free state: sum over eigenvalues of eta(q) + eta(1-q)."""
    q = _as_square(np.asarray(q, dtype=complex))
    if hermiticity_defect(q) > tol:
        raise HermiticityError("symbol is not Hermitian within tolerance")
    vals = np.linalg.eigvalsh(_herm(q))
    if vals.min() < -tol:
        raise ConstraintError(f"symbol eigenvalue {vals.min():.3e} below 0")
    if vals.max() > 1 + tol:
        raise ConstraintError(f"symbol eigenvalue {vals.max():.3e} above 1")
    vals = np.clip(vals, 0.0, 1.0)
    return float(np.sum(eta(vals)) + np.sum(eta(1.0 - vals)))


def qf_map_entropy(m: QFMap) -> float:
    """Entropy of the 2N-mode symbol encoding the map."""
    return qf_state_entropy(qf_jam_symbol(m))


def qf_bistochastic_entropy(r: np.ndarray) -> float:
    """Closed form for bistochastic maps: 2 sum_j eta((1+l_j)/2) + eta((1-l_j)/2)
    over the singular values l_j of R."""
    lam = np.clip(singular_values(r), 0.0, 1.0)
    return float(2 * np.sum(eta((1 + lam) / 2) + eta((1 - lam) / 2)))


def qf_extreme_entropy(r: np.ndarray, p: np.ndarray) -> float:
    """Closed form for extreme maps via the N-dim symbol (1 + |R|^2 - 2|R| P |R|)/2."""
    r = _as_square(np.asarray(r, dtype=complex))
    abs_r = _psd_sqrt(r.conj().T @ r)
    sym = _herm(0.5 * (np.eye(r.shape[0]) + abs_r @ abs_r - 2 * abs_r @ p @ abs_r))
    return qf_state_entropy(sym, tol=1e-8)


def qf_bistochastic(r: np.ndarray, tol: float = SYMBOL_TOL) -> QFMap:
    """The bistochastic map with Z = (1 - R^dag R)/2; requires ||R|| <= 1."""
    r = _as_square(np.asarray(r, dtype=complex))
    if singular_values(r).max() > 1 + tol:
        raise NormError("R has operator norm above 1")
    z = _herm(np.eye(r.shape[0]) - r.conj().T @ r) / 2
    return QFMap(r, z)


def qf_extreme(r: np.ndarray, p: np.ndarray, tol: float = SYMBOL_TOL) -> QFMap:
    """The extreme map with Z = sqrt(1 - R^dag R) P sqrt(1 - R^dag R)."""
    r = _as_square(np.asarray(r, dtype=complex))
    p = _as_square(np.asarray(p, dtype=complex))
    if p.shape != r.shape:
        raise DimensionError(f"P shape {p.shape} does not match R shape {r.shape}")
    if singular_values(r).max() > 1 + tol:
        raise NormError("R has operator norm above 1")
    if hermiticity_defect(p) > tol or np.abs(p @ p - p).max() > 1e-8:
        raise ProjectorError("P is not an orthogonal projector within tolerance")
    w = _psd_sqrt(np.eye(r.shape[0]) - r.conj().T @ r)
    return QFMap(r, _herm(w @ p @ w))


# -- Fock-space realization --------------------------------------------------

MODE_LIMIT = 4


def _compound(m: np.ndarray, k: int) -> np.ndarray:
    """k-th compound matrix: minors det(m[rows, cols]) over k-subsets.

    Equals the restriction of the k-fold tensor power to the antisymmetric
    subspace, in the basis of lexicographically ordered Slater vectors.
    """
    n = m.shape[0]
    if k == 0:
        return np.ones((1, 1), dtype=m.dtype)
    subs = list(combinations(range(n), k))
    out = np.empty((len(subs), len(subs)), dtype=m.dtype)
    for i, rows in enumerate(subs):
        for j, cols in enumerate(subs):
            out[i, j] = np.linalg.det(m[np.ix_(rows, cols)])
    return out


def fock_density(q: np.ndarray, tol: float = SYMBOL_TOL) -> np.ndarray:
    """Density matrix of the quasi-free state with symbol Q on Fock space.

    The 2**N-dimensional space is ordered by particle sectors k = 0..N,
    each sector in lexicographic Slater order.  For eigenvalues strictly
    below 1 the state is det(1-Q) times the direct sum of the compound
    matrices of Q/(1-Q); a projector symbol yields the corresponding pure
    Slater state.  Symbols with unit eigenvalues that are not projectors
    are refused.
    """
    q = validate_symbol(q, tol)
    n = q.shape[0]
    if n > MODE_LIMIT:
        raise ModeLimitError(f"explicit Fock construction limited to {MODE_LIMIT} modes")
    vals, vecs = np.linalg.eigh(_herm(q))
    vals = np.clip(vals, 0.0, 1.0)
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    if vals.max() < 1 - tol:
        ratio = (vecs * (vals / (1 - vals))) @ vecs.conj().T
        weight = float(np.prod(1 - vals))
        offset = 0
        for k in range(n + 1):
            block = weight * _compound(ratio, k)
            s = block.shape[0]
            out[offset : offset + s, offset : offset + s] = block
            offset += s
    elif np.abs(vals - np.round(vals)).max() <= tol:
        # projector symbol: pure Slater-type state in the rank-k sector
        k = int(np.round(vals.sum()))
        offset = sum(math.comb(n, j) for j in range(k))
        block = _compound((vecs * np.round(vals)) @ vecs.conj().T, k)
        out[offset : offset + block.shape[0], offset : offset + block.shape[0]] = block
    else:
        raise SingularSymbolError(
            "symbol has a unit eigenvalue but is not a projector; no finite density form"
        )
    return out
