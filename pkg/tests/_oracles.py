"""Brute-force reference implementations used to cross-check the library.

Everything here is deliberately slow and index-by-index so it stays
independent of the vectorized code paths it validates.
"""

from __future__ import annotations

import numpy as np

from hankelmc import BlockDiagonal, HankelShape, TwoLevelShape, ghat_basis
from hankelmc.geometry import TangentSpace, tangent_project
from hankelmc.sampling import SamplingMask


def hankel_lift_loops(x: np.ndarray, shape: HankelShape) -> np.ndarray:
    out = np.zeros((shape.n1, shape.n2), dtype=complex)
    for j in range(shape.n1):
        for k in range(shape.n2):
            out[j, k] = x[j + k]
    return out


def hankel_adjoint_loops(m: np.ndarray, shape: HankelShape) -> np.ndarray:
    out = np.zeros(shape.n, dtype=complex)
    for j in range(shape.n1):
        for k in range(shape.n2):
            out[j + k] += m[j, k]
    return out


def antidiag_weights_loops(shape: HankelShape) -> np.ndarray:
    out = np.zeros(shape.n, dtype=int)
    for j in range(shape.n1):
        for k in range(shape.n2):
            out[j + k] += 1
    return out


def two_level_lift_loops(s_mat: np.ndarray, shape: TwoLevelShape) -> np.ndarray:
    out = np.zeros(shape.lifted, dtype=complex)
    for p in range(shape.L1):
        for q in range(shape.K1):
            for u in range(shape.L2):
                for v in range(shape.K2):
                    out[p * shape.L2 + u, q * shape.K2 + v] = s_mat[p + q, u + v]
    return out


def two_level_weights_loops(shape: TwoLevelShape) -> np.ndarray:
    out = np.zeros((shape.n, shape.s), dtype=int)
    for p in range(shape.L1):
        for q in range(shape.K1):
            for u in range(shape.L2):
                for v in range(shape.K2):
                    out[p + q, u + v] += 1
    return out


def gf_norm_basis_sum(z: BlockDiagonal, weights: np.ndarray) -> float:
    """The basis-coefficient form of the weighted Frobenius norm."""
    d = z.d
    n = weights.size
    total = 0.0
    for j in range(d):
        for k in range(n):
            coeff = z.inner(ghat_basis(j, k, d, z.block_shape))
            total += abs(coeff) ** 2 / (d * weights[k])
    return float(np.sqrt(total))


def dense_deviation_matrix(
    t: TangentSpace, mask: SamplingMask, p: float
) -> np.ndarray:
    """Matricization of the sampled-vs-expected tangent-restricted lift deviation.

    Columns are the images of the canonical block-diagonal basis elements, so
    the result is a (d*n1*n2) x (d*n1*n2) Hermitian complex matrix.
    """
    from hankelmc.lifts import ghat_adjoint, ghat_lift

    d, n1, n2 = t.d, t.shape.n1, t.shape.n2
    dim = d * n1 * n2
    coeff = mask.observed / p - 1.0
    mat = np.zeros((dim, dim), dtype=complex)
    col = 0
    for i in range(d):
        for a in range(n1):
            for b in range(n2):
                e = np.zeros((d, n1, n2), dtype=complex)
                e[i, a, b] = 1.0
                w = tangent_project(t, BlockDiagonal(e))
                img = tangent_project(
                    t, ghat_lift(coeff * ghat_adjoint(w), t.shape)
                )
                mat[:, col] = img.data.ravel()
                col += 1
    return mat


def xstep_least_squares(
    target_blocks: np.ndarray,
    observed: np.ndarray,
    mask: SamplingMask,
    shape: HankelShape,
) -> np.ndarray:
    """Solve min_X sum_i ||hankel_lift(row i of F X) - M_i||_F^2 subject to the
    observed entries of X, by dense normal equations over the free entries."""
    from hankelmc.hankel import _lift_rows
    from hankelmc.lifts import unitary_dft

    d, n = observed.shape
    f = unitary_dft(d)

    def forward(x: np.ndarray) -> np.ndarray:
        return _lift_rows(f @ x, shape).ravel()

    free = np.argwhere(~mask.observed)
    base = np.where(mask.observed, observed, 0)
    rhs = target_blocks.ravel() - forward(base)
    design = np.zeros((rhs.size, len(free)), dtype=complex)
    for col, (i, k) in enumerate(free):
        e = np.zeros((d, n), dtype=complex)
        e[i, k] = 1.0
        design[:, col] = forward(e)
    coef, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    x = base.astype(complex)
    for (i, k), c in zip(free, coef):
        x[i, k] = c
    return x
