"""Dense row-major real matrices (numpy float64) and the Frobenius geometry on them."""

from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from core.errors import DimensionError, ValidationError

DenseMatrix = NDArray[np.float64]


def frobenius_norm(M: DenseMatrix) -> float:
    """sqrt of the sum of squared entries; for a stack of matrices, one norm per matrix."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim == 2:
        return float(np.sqrt(np.sum(M * M)))
    return np.sqrt(np.sum(M * M, axis=(-2, -1)))


def frobenius_inner(M: DenseMatrix, N: DenseMatrix) -> float:
    """<M, N> = tr(M^T N)."""
    if np.shape(M) != np.shape(N):
        raise DimensionError(f"shape mismatch: {np.shape(M)} vs {np.shape(N)}")
    return float(np.sum(np.asarray(M) * np.asarray(N)))


def identity(w: int) -> DenseMatrix:
    return np.eye(w, dtype=np.float64)


def transition_matrix(successors: Sequence[int]) -> DenseMatrix:
    """The 0/1 matrix with a single 1 in row s at column successors[s]."""
    w = len(successors)
    M = np.zeros((w, w), dtype=np.float64)
    M[np.arange(w), np.asarray(successors, dtype=np.int64)] = 1.0
    return M


def successors_of(M: DenseMatrix) -> NDArray[np.int64]:
    """Inverse of `transition_matrix`; rejects anything that is not one 1 per row."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"transition matrices must be square, got {M.shape}")
    if not np.all((M == 0) | (M == 1)) or not np.all(M.sum(axis=1) == 1):
        raise ValidationError("transition matrix must have exactly one 1 per row and 0 elsewhere")
    return np.argmax(M, axis=1).astype(np.int64)
