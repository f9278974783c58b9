"""Unitary DFT and the block-diagonal Fourier-domain Hankel lifts.

``ghat_lift`` sends a d x n matrix X to the block-diagonal matrix whose i-th
block is the normalized Hankel lift of row i of F @ X, where F is the unitary
DFT.  It is an isometry (its adjoint is a left inverse), so Parseval holds and
``ghat_lift`` composed with ``ghat_adjoint`` is the orthogonal projector onto
block-diagonal Hankel matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hankel import (
    HankelShape,
    _adjoint_rows,
    _lift_rows,
    antidiag_weights,
    g_lift,
)

__all__ = [
    "BlockDiagonal",
    "unitary_dft",
    "ghat_lift",
    "ghat_adjoint",
    "ghat_basis",
    "hankel_blockdiag",
    "hankel_blockdiag_adjoint",
    "tube_dft",
    "inverse_tube_dft",
]


@lru_cache(maxsize=None)
def unitary_dft(d: int) -> np.ndarray:
    """Unitary DFT matrix F[j, k] = exp(-2*pi*i*j*k/d) / sqrt(d) (read-only).

    With this sign convention F @ ones(d) = sqrt(d) * e_1.
    """
    if d < 1:
        raise ValueError(f"DFT size must be positive, got {d}")
    j = np.arange(d)
    f = np.exp(-2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)
    f.flags.writeable = False
    return f


@dataclass(frozen=True)
class BlockDiagonal:
    """A d-block diagonal matrix with equally shaped blocks, stored as a stack.

    ``data`` has shape (d, n1, n2); the dense d*n1 x d*n2 matrix is never
    materialized.  Frobenius norm and inner product aggregate over blocks; the
    spectral norm is the maximum block spectral norm.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 3:
            raise ValueError(f"expected a (d, n1, n2) stack, got shape {self.data.shape}")

    @property
    def d(self) -> int:
        return self.data.shape[0]

    @property
    def block_shape(self) -> HankelShape:
        return HankelShape(self.data.shape[1], self.data.shape[2])

    def block(self, i: int) -> np.ndarray:
        return self.data[i]

    @classmethod
    def zeros(cls, d: int, n1: int, n2: int) -> "BlockDiagonal":
        return cls(np.zeros((d, n1, n2), dtype=complex))

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def inner(self, other: "BlockDiagonal") -> complex:
        """Trace inner product <self, other> = sum_i tr(other_i^H self_i)."""
        return complex(np.vdot(other.data, self.data))

    def spectral_norm(self) -> float:
        return float(np.linalg.svd(self.data, compute_uv=False).max())

    def nuclear_norm(self) -> float:
        return float(np.linalg.svd(self.data, compute_uv=False).sum())

    def __add__(self, other: "BlockDiagonal") -> "BlockDiagonal":
        return BlockDiagonal(self.data + other.data)

    def __sub__(self, other: "BlockDiagonal") -> "BlockDiagonal":
        return BlockDiagonal(self.data - other.data)

    def __mul__(self, scalar: complex) -> "BlockDiagonal":
        return BlockDiagonal(self.data * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "BlockDiagonal":
        return BlockDiagonal(-self.data)


def _check_matrix(x: np.ndarray, shape: HankelShape) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[1] != shape.n:
        raise ValueError(f"expected a d x {shape.n} matrix, got shape {x.shape}")
    return x


def ghat_lift(x: np.ndarray, shape: HankelShape) -> BlockDiagonal:
    """Normalized Fourier-domain lift: block i = g_lift(row i of F @ X)."""
    x = _check_matrix(x, shape)
    rows = unitary_dft(x.shape[0]) @ x
    w = antidiag_weights(shape)
    return BlockDiagonal(_lift_rows(rows / np.sqrt(w), shape))


def ghat_adjoint(z: BlockDiagonal) -> np.ndarray:
    """Adjoint of ``ghat_lift``; left-inverts it: ghat_adjoint(ghat_lift(X)) == X."""
    shape = z.block_shape
    w = antidiag_weights(shape)
    rows = _adjoint_rows(z.data, shape) / np.sqrt(w)
    return unitary_dft(z.d).conj().T @ rows


def hankel_blockdiag(x: np.ndarray, shape: HankelShape) -> BlockDiagonal:
    """Unnormalized lift: block i = hankel_lift(row i of F @ X).

    Equals ghat_lift(X @ diag(sqrt(w))); this is the block-diagonal object
    whose nuclear norm the completion program minimizes.
    """
    x = _check_matrix(x, shape)
    rows = unitary_dft(x.shape[0]) @ x
    return BlockDiagonal(_lift_rows(rows, shape))


def hankel_blockdiag_adjoint(z: BlockDiagonal) -> np.ndarray:
    """Adjoint of ``hankel_blockdiag``: inverse DFT of the stacked anti-diagonal sums."""
    rows = _adjoint_rows(z.data, z.block_shape)
    return unitary_dft(z.d).conj().T @ rows


def ghat_basis(j: int, k: int, d: int, shape: HankelShape) -> BlockDiagonal:
    """Orthonormal basis element ghat_lift(e_j e_k^T) (0-based j < d, k < n).

    Its spectral norm is exactly 1 / sqrt(d * w_k) because every DFT entry has
    modulus 1 / sqrt(d).
    """
    if not 0 <= j < d:
        raise IndexError(f"row index {j} out of range [0, {d})")
    if not 0 <= k < shape.n:
        raise IndexError(f"column index {k} out of range [0, {shape.n})")
    e_k = np.zeros(shape.n)
    e_k[k] = 1.0
    gk = g_lift(e_k, shape)
    col = unitary_dft(d)[:, j]
    return BlockDiagonal(col[:, None, None] * gk[None, :, :])


def tube_dft(x: np.ndarray) -> np.ndarray:
    """Apply the unitary DFT along the last axis (the tubes) of an n x s x d array."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 3:
        raise ValueError(f"expected a 3-D array, got shape {x.shape}")
    f = unitary_dft(x.shape[2])
    return np.einsum("ml,jkl->jkm", f, x)


def inverse_tube_dft(x: np.ndarray) -> np.ndarray:
    """Inverse of ``tube_dft``; exact round trip up to rounding."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 3:
        raise ValueError(f"expected a 3-D array, got shape {x.shape}")
    f = unitary_dft(x.shape[2])
    return np.einsum("lm,jkm->jkl", f.conj().T, x)
