"""
Rango numerico con umbral σmax·dim(A)·ε y base del nucleo.
"""
from typing import Tuple

import numpy as np

from .exceptions import NonFiniteMatrixError

EPSILON = np.finfo(float).eps


def _checked(matrix) -> np.ndarray:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteMatrixError(matrix.shape)
    return matrix


def singular_threshold(singular_values: np.ndarray, shape: Tuple[int, int]) -> float:
    if singular_values.size == 0:
        return 0.0
    return float(singular_values.max()) * max(shape) * EPSILON


def rank_with_threshold(matrix) -> Tuple[int, bool]:
    """(rango, robusto) con robusto sii el rango es maximo."""
    matrix = _checked(matrix)
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return 0, True
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    threshold = singular_threshold(singular_values, matrix.shape)
    rank = int(np.count_nonzero(singular_values > threshold))
    return rank, rank == min(rows, cols)


def null_space(matrix) -> np.ndarray:
    """Base (una fila por vector) del nucleo: vectores singulares derechos con σ <= umbral."""
    matrix = _checked(matrix)
    rows, cols = matrix.shape
    if cols == 0:
        return np.zeros((0, 0))
    if rows == 0:
        return np.eye(cols)
    _, singular_values, vt = np.linalg.svd(matrix, full_matrices=True)
    threshold = singular_threshold(singular_values, matrix.shape)
    rank = int(np.count_nonzero(singular_values > threshold))
    return vt[rank:, :]
