"""JSON matrix files.

A matrix file is an object ``{"kind": "complex"|"real", "rows": [...]}``
where ``rows`` is a rectangular list of rows; a complex entry is a two-item
list ``[re, im]`` and a real entry is a bare number.  Probability vectors
are real matrices with a single row or a single column.  Transition
matrices follow the column-stochastic convention: every column sums to 1
and the matrix acts on probability vectors from the left, p' = T p.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import DynsubError


class MatrixFileError(DynsubError):
    """Malformed matrix file."""


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFileError("matrix file must be a JSON object")
    kind = obj.get("kind")
    rows = obj.get("rows")
    if kind not in ("complex", "real"):
        raise MatrixFileError(f"kind must be 'complex' or 'real', got {kind!r}")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise MatrixFileError("rows must be a nonempty list of lists")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise MatrixFileError("rows must be rectangular and nonempty")
    try:
        if kind == "complex":
            data = [[complex(e[0], e[1]) for e in r] for r in rows]
            out = np.array(data, dtype=complex)
        else:
            out = np.array(rows, dtype=float)
    except (TypeError, ValueError, IndexError) as exc:
        raise MatrixFileError(f"bad matrix entry: {exc}") from None
    finite = np.isfinite(out.real) & np.isfinite(out.imag) if kind == "complex" else np.isfinite(out)
    if not finite.all():
        raise MatrixFileError("matrix entries must be finite")
    return out


def matrix_to_obj(mat: np.ndarray) -> dict:
    mat = np.asarray(mat)
    if np.iscomplexobj(mat):
        rows = [[[float(e.real), float(e.imag)] for e in r] for r in mat]
        return {"kind": "complex", "rows": rows}
    rows = [[float(e) for e in r] for r in mat]
    return {"kind": "real", "rows": rows}


def load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFileError(f"cannot read matrix file {path}: {exc}") from None
    return matrix_from_obj(obj)


def load_vector(path: str) -> np.ndarray:
    mat = load_matrix(path)
    if mat.ndim != 2 or (1 not in mat.shape):
        raise MatrixFileError(f"expected a single-row or single-column matrix, got {mat.shape}")
    if np.iscomplexobj(mat):
        raise MatrixFileError("probability vectors must be real")
    return mat.reshape(-1)


def save_matrix(mat: np.ndarray, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_obj(mat), fh)
        fh.write("\n")


def round_scalar(x: float) -> float:
    """Scalars are emitted rounded to 12 decimal places."""
    if not math.isfinite(x):
        raise MatrixFileError(f"non-finite scalar {x}")
    return round(float(x), 12)
