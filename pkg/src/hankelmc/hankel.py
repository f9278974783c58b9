"""One- and two-level Hankel lifts, their adjoints, and anti-diagonal weights.

The lift of a length-n vector places entry a on the a-th anti-diagonal of an
n1 x n2 matrix (n = n1 + n2 - 1); the adjoint sums anti-diagonals.  Composing
the two scales coordinate a by the number of positions w_a on that
anti-diagonal, which the normalized variants ``g_lift``/``g_adjoint`` divide
out so that the composition is the identity.

Vectors and matrices are indexed 0-based here; anti-diagonal a (0-based)
collects the positions with j + k == a.  File formats and user documentation
use 1-based indices (a + 1, j + 1, k + 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "HankelShape",
    "TwoLevelShape",
    "hankel_lift",
    "hankel_adjoint",
    "antidiag_weights",
    "g_lift",
    "g_adjoint",
    "two_level_lift",
    "two_level_adjoint",
    "two_level_weights",
]


@dataclass(frozen=True)
class HankelShape:
    """Shape of a Hankel lift: length-(n1+n2-1) vectors map to n1 x n2 matrices."""

    n1: int
    n2: int

    def __post_init__(self) -> None:
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError(f"invalid Hankel shape ({self.n1}, {self.n2})")

    @property
    def n(self) -> int:
        return self.n1 + self.n2 - 1

    @classmethod
    def square(cls, n: int) -> "HankelShape":
        """Default lift shape for a length-n vector.

        Odd n gives the square ((n+1)/2, (n+1)/2); even n gives
        (n/2 + 1, n/2).  The geometry and certificate modules only accept
        the odd/square case.
        """
        if n < 1:
            raise ValueError(f"vector length must be positive, got {n}")
        if n % 2:
            return cls((n + 1) // 2, (n + 1) // 2)
        return cls(n // 2 + 1, n // 2)


@dataclass(frozen=True)
class TwoLevelShape:
    """Two-level block Hankel shape: n x s slices lift to (L1*L2) x (K1*K2).

    Level 1 is the outer block structure (n = L1 + K1 - 1 rows of the slice),
    level 2 the inner Hankel lift of each row (s = L2 + K2 - 1 columns).
    """

    L1: int
    K1: int
    L2: int
    K2: int

    def __post_init__(self) -> None:
        if min(self.L1, self.K1, self.L2, self.K2) < 1:
            raise ValueError(
                f"invalid two-level shape ({self.L1}, {self.K1}, {self.L2}, {self.K2})"
            )

    @property
    def n(self) -> int:
        return self.L1 + self.K1 - 1

    @property
    def s(self) -> int:
        return self.L2 + self.K2 - 1

    @property
    def outer(self) -> HankelShape:
        return HankelShape(self.L1, self.K1)

    @property
    def inner(self) -> HankelShape:
        return HankelShape(self.L2, self.K2)

    @property
    def lifted(self) -> tuple[int, int]:
        return (self.L1 * self.L2, self.K1 * self.K2)

    @classmethod
    def square(cls, n: int, s: int) -> "TwoLevelShape":
        a = HankelShape.square(n)
        b = HankelShape.square(s)
        return cls(a.n1, a.n2, b.n1, b.n2)


@lru_cache(maxsize=None)
def _antidiag_index(n1: int, n2: int) -> np.ndarray:
    idx = np.add.outer(np.arange(n1), np.arange(n2))
    idx.flags.writeable = False
    return idx


@lru_cache(maxsize=None)
def _adjoint_matrix(n1: int, n2: int) -> np.ndarray:
    # P[j*n2 + k, a] = 1 iff j + k == a; right-multiplying a row-flattened
    # matrix by P sums its anti-diagonals.
    idx = _antidiag_index(n1, n2)
    p = np.zeros((n1 * n2, n1 + n2 - 1))
    p[np.arange(n1 * n2), idx.ravel()] = 1.0
    p.flags.writeable = False
    return p


@lru_cache(maxsize=None)
def _two_level_index(L1: int, K1: int, L2: int, K2: int) -> tuple[np.ndarray, np.ndarray]:
    outer = np.add.outer(np.arange(L1), np.arange(K1))
    inner = np.add.outer(np.arange(L2), np.arange(K2))
    row = outer[:, None, :, None]
    col = inner[None, :, None, :]
    row, col = np.broadcast_arrays(row, col)  # (L1, L2, K1, K2)
    row.flags.writeable = False
    col.flags.writeable = False
    return row, col


@lru_cache(maxsize=None)
def _two_level_adjoint_matrix(L1: int, K1: int, L2: int, K2: int) -> np.ndarray:
    row, col = _two_level_index(L1, K1, L2, K2)
    n, s = L1 + K1 - 1, L2 + K2 - 1
    targets = (row * s + col).ravel()
    q = np.zeros((L1 * L2 * K1 * K2, n * s))
    q[np.arange(targets.size), targets] = 1.0
    q.flags.writeable = False
    return q


def hankel_lift(x: np.ndarray, shape: HankelShape) -> np.ndarray:
    """Lift a length-n vector to the n1 x n2 matrix M[j, k] = x[j + k]."""
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != shape.n:
        raise ValueError(f"expected vector of length {shape.n}, got shape {x.shape}")
    return x[_antidiag_index(shape.n1, shape.n2)]


def hankel_adjoint(m: np.ndarray, shape: HankelShape) -> np.ndarray:
    """Adjoint of the lift: y[a] = sum of the entries on anti-diagonal a."""
    m = np.asarray(m)
    if m.shape != (shape.n1, shape.n2):
        raise ValueError(f"expected {shape.n1} x {shape.n2} matrix, got shape {m.shape}")
    return m.ravel() @ _adjoint_matrix(shape.n1, shape.n2)


def antidiag_weights(shape: HankelShape) -> np.ndarray:
    """Number of positions on each anti-diagonal of an n1 x n2 matrix.

    Symmetric (w[a] == w[n-1-a]), sums to n1*n2, peaks at min(n1, n2).
    """
    idx = _antidiag_index(shape.n1, shape.n2)
    return np.bincount(idx.ravel(), minlength=shape.n)


def g_lift(x: np.ndarray, shape: HankelShape) -> np.ndarray:
    """Weight-normalized lift; g_lift(e_a) are orthonormal in Frobenius norm."""
    w = antidiag_weights(shape)
    return hankel_lift(np.asarray(x) / np.sqrt(w), shape)


def g_adjoint(m: np.ndarray, shape: HankelShape) -> np.ndarray:
    """Adjoint of ``g_lift``; inverts it on its range: g_adjoint(g_lift(x)) == x."""
    w = antidiag_weights(shape)
    return hankel_adjoint(m, shape) / np.sqrt(w)


def _lift_rows(rows: np.ndarray, shape: HankelShape) -> np.ndarray:
    """Hankel-lift each row of a (d, n) array into a (d, n1, n2) stack."""
    if rows.ndim != 2 or rows.shape[1] != shape.n:
        raise ValueError(f"expected (d, {shape.n}) rows, got shape {rows.shape}")
    return rows[:, _antidiag_index(shape.n1, shape.n2)]


def _adjoint_rows(blocks: np.ndarray, shape: HankelShape) -> np.ndarray:
    """Apply ``hankel_adjoint`` to each block of a (d, n1, n2) stack."""
    if blocks.ndim != 3 or blocks.shape[1:] != (shape.n1, shape.n2):
        raise ValueError(
            f"expected (d, {shape.n1}, {shape.n2}) stack, got shape {blocks.shape}"
        )
    p = _adjoint_matrix(shape.n1, shape.n2)
    flat = blocks.reshape(blocks.shape[0], -1)
    if np.iscomplexobj(flat):
        # two real GEMMs beat promoting the 0/1 matrix to complex every call
        return flat.real @ p + 1j * (flat.imag @ p)
    return flat @ p


def two_level_lift(s_mat: np.ndarray, shape: TwoLevelShape) -> np.ndarray:
    """Two-level block Hankel lift of an n x s slice.

    Block (p, q) of the output, p < L1 and q < K1, is the (L2, K2) Hankel lift
    of row p + q of the slice; level 1 is the outer block index.
    """
    s_mat = np.asarray(s_mat)
    if s_mat.shape != (shape.n, shape.s):
        raise ValueError(f"expected {shape.n} x {shape.s} slice, got shape {s_mat.shape}")
    row, col = _two_level_index(shape.L1, shape.K1, shape.L2, shape.K2)
    return s_mat[row, col].reshape(shape.lifted)


def two_level_adjoint(m: np.ndarray, shape: TwoLevelShape) -> np.ndarray:
    """Adjoint of ``two_level_lift``: sums every lifted copy of each slice entry."""
    m = np.asarray(m)
    if m.shape != shape.lifted:
        raise ValueError(f"expected {shape.lifted} matrix, got shape {m.shape}")
    q = _two_level_adjoint_matrix(shape.L1, shape.K1, shape.L2, shape.K2)
    return (m.ravel() @ q).reshape(shape.n, shape.s)


def two_level_weights(shape: TwoLevelShape) -> np.ndarray:
    """Copy counts of the two-level lift: the outer product of the level weights."""
    return np.outer(antidiag_weights(shape.outer), antidiag_weights(shape.inner))


def _lift_slices(slices: np.ndarray, shape: TwoLevelShape) -> np.ndarray:
    """Two-level lift of a (d, n, s) stack into (d, L1*L2, K1*K2)."""
    if slices.ndim != 3 or slices.shape[1:] != (shape.n, shape.s):
        raise ValueError(
            f"expected (d, {shape.n}, {shape.s}) stack, got shape {slices.shape}"
        )
    row, col = _two_level_index(shape.L1, shape.K1, shape.L2, shape.K2)
    return slices[:, row, col].reshape(slices.shape[0], *shape.lifted)


def _adjoint_slices(blocks: np.ndarray, shape: TwoLevelShape) -> np.ndarray:
    """Apply ``two_level_adjoint`` to each block of a (d, L1*L2, K1*K2) stack."""
    if blocks.ndim != 3 or blocks.shape[1:] != shape.lifted:
        raise ValueError(
            f"expected (d, {shape.lifted[0]}, {shape.lifted[1]}) stack, got {blocks.shape}"
        )
    q = _two_level_adjoint_matrix(shape.L1, shape.K1, shape.L2, shape.K2)
    flat = blocks.reshape(blocks.shape[0], -1)
    if np.iscomplexobj(flat):
        out = flat.real @ q + 1j * (flat.imag @ q)
    else:
        out = flat @ q
    return out.reshape(-1, shape.n, shape.s)
