"""Block SVDs, tangent spaces of block-diagonal low-rank matrices, and incoherence.

The tangent space at a block-diagonal point with per-block singular factors
(U_a, V_a) is, blockwise, { U_a A^H + B V_a^H }.  Incoherence measures how the
row energy of the singular factors spreads: the average-case parameter bounds
the per-row energy averaged over blocks, the worst-case parameter bounds each
block individually.  These quantities are only defined here for square blocks
(odd vector length n with n1 = n2 = (n+1)/2); non-square inputs are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hankel import HankelShape, g_lift
from .lifts import BlockDiagonal, ghat_basis

__all__ = [
    "TangentSpace",
    "IncoherenceConsequences",
    "block_svd",
    "tangent_project",
    "tangent_complement",
    "uv_product",
    "average_row_energy",
    "worst_row_energy",
    "avg_incoherence",
    "worst_incoherence",
    "check_incoherence_consequences",
]

ZERO_BLOCK_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class TangentSpace:
    """Per-block orthonormal singular factors (U_a, V_a); rank-0 blocks allowed."""

    factors: tuple[tuple[np.ndarray, np.ndarray], ...]
    shape: HankelShape

    def __post_init__(self) -> None:
        for u, v in self.factors:
            if u.shape[0] != self.shape.n1 or v.shape[0] != self.shape.n2:
                raise ValueError("factor dimensions do not match the block shape")
            if u.shape[1] != v.shape[1]:
                raise ValueError("U and V must have the same number of columns")

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(u.shape[1] for u, _ in self.factors)

    @property
    def max_rank(self) -> int:
        return max(self.ranks)


def block_svd(
    z: BlockDiagonal, rank_tol: float = DEFAULT_RANK_TOL
) -> tuple[TangentSpace, list[np.ndarray]]:
    """Compact SVD of every block, truncated at ``rank_tol`` times the block's
    largest singular value; blocks below ``ZERO_BLOCK_TOL`` in Frobenius norm
    get rank 0.  Returns the tangent space and the full singular values."""
    if rank_tol <= 0:
        raise ValueError(f"rank_tol must be positive, got {rank_tol}")
    if not np.all(np.isfinite(z.data)):
        raise ValueError("block-diagonal input contains non-finite entries")
    factors = []
    sigmas = []
    for i in range(z.d):
        block = z.block(i)
        if np.linalg.norm(block) < ZERO_BLOCK_TOL:
            n1, n2 = block.shape
            factors.append(
                (np.zeros((n1, 0), dtype=complex), np.zeros((n2, 0), dtype=complex))
            )
            sigmas.append(np.zeros(min(n1, n2)))
            continue
        u, s, vh = np.linalg.svd(block, full_matrices=False)
        r = int(np.sum(s > rank_tol * s[0]))
        factors.append((u[:, :r], vh[:r].conj().T))
        sigmas.append(s)
    return TangentSpace(tuple(factors), z.block_shape), sigmas


def _project_block(u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    uhw = u.conj().T @ w
    wv = w @ v
    return u @ uhw + (wv - u @ (uhw @ v)) @ v.conj().T


def tangent_project(t: TangentSpace, w: BlockDiagonal) -> BlockDiagonal:
    """Orthogonal projection onto the tangent space, applied blockwise."""
    if w.d != t.d or w.block_shape != t.shape:
        raise ValueError("block-diagonal shape does not match the tangent space")
    out = np.empty_like(w.data)
    for i, (u, v) in enumerate(t.factors):
        out[i] = _project_block(u, v, w.block(i))
    return BlockDiagonal(out)


def tangent_complement(t: TangentSpace, w: BlockDiagonal) -> BlockDiagonal:
    """Projection onto the orthogonal complement of the tangent space."""
    return w - tangent_project(t, w)


def uv_product(t: TangentSpace) -> BlockDiagonal:
    """Block-diagonal matrix with blocks U_a V_a^H (the nuclear-norm subgradient core)."""
    n1, n2 = t.shape.n1, t.shape.n2
    data = np.zeros((t.d, n1, n2), dtype=complex)
    for i, (u, v) in enumerate(t.factors):
        data[i] = u @ v.conj().T
    return BlockDiagonal(data)


def _require_square(t: TangentSpace) -> None:
    if t.shape.n1 != t.shape.n2:
        raise ValueError(
            "incoherence is defined for square blocks only "
            f"(odd vector length); got shape ({t.shape.n1}, {t.shape.n2})"
        )


def _row_energies(t: TangentSpace) -> tuple[np.ndarray, np.ndarray]:
    """Stacked squared row norms of the factors: shapes (d, n1) and (d, n2)."""
    eu = np.stack([(np.abs(u) ** 2).sum(axis=1) for u, _ in t.factors])
    ev = np.stack([(np.abs(v) ** 2).sum(axis=1) for _, v in t.factors])
    return eu, ev


def average_row_energy(t: TangentSpace) -> tuple[float, float]:
    """max_i (1/d) sum_a ||e_i^T U_a||^2 and the V-side analog (raw, unscaled)."""
    _require_square(t)
    eu, ev = _row_energies(t)
    return float(eu.mean(axis=0).max()), float(ev.mean(axis=0).max())


def worst_row_energy(t: TangentSpace) -> tuple[float, float]:
    """max over (i, a) of ||e_i^T U_a||^2 and the V-side analog (raw, unscaled)."""
    _require_square(t)
    eu, ev = _row_energies(t)
    return float(eu.max()), float(ev.max())


def avg_incoherence(t: TangentSpace) -> tuple[float, float, float]:
    """Average-case incoherence (mu_U, mu_V, mu0): the row energies scaled by n/r.

    When blocks have unequal ranks the common rank r is taken as max_a r_a.
    """
    r = t.max_rank
    if r == 0:
        raise ValueError("all blocks have rank zero")
    raw_u, raw_v = average_row_energy(t)
    scale = t.shape.n / r
    mu_u, mu_v = scale * raw_u, scale * raw_v
    return mu_u, mu_v, max(mu_u, mu_v)


def worst_incoherence(t: TangentSpace) -> float:
    """Worst-case incoherence mu1 >= mu0: per-block row energies scaled by n/r."""
    r = t.max_rank
    if r == 0:
        raise ValueError("all blocks have rank zero")
    raw_u, raw_v = worst_row_energy(t)
    return t.shape.n / r * max(raw_u, raw_v)


@dataclass(frozen=True)
class IncoherenceConsequences:
    """Checks of the two inequalities implied by average-case incoherence.

    The first bounds the per-basis-element energy of the factors,
    max_k (1/d) sum_a ||G_k^H U_a||_F^2 <= mu0 r / n (and the V side); the
    second bounds the projected basis elements,
    max_{j,k} ||P_T ghat_lift(e_j e_k^T)||_F^2 <= 2 mu0 r / n.  Both are
    theorems in exact arithmetic, checked here with additive slack.
    """

    mu0: float
    rank: int
    n: int
    basis_energy_u: float
    basis_energy_v: float
    basis_energy_bound: float
    projected_basis_energy: float
    projected_basis_bound: float
    slack: float = 1e-10

    @property
    def basis_energy_holds(self) -> bool:
        bound = self.basis_energy_bound + self.slack
        return self.basis_energy_u <= bound and self.basis_energy_v <= bound

    @property
    def projected_basis_holds(self) -> bool:
        return self.projected_basis_energy <= self.projected_basis_bound + self.slack

    @property
    def basis_energy_margin(self) -> float:
        return self.basis_energy_bound - max(self.basis_energy_u, self.basis_energy_v)

    @property
    def projected_basis_margin(self) -> float:
        return self.projected_basis_bound - self.projected_basis_energy

    @property
    def holds(self) -> bool:
        return self.basis_energy_holds and self.projected_basis_holds


def check_incoherence_consequences(t: TangentSpace) -> IncoherenceConsequences:
    """Evaluate both incoherence-consequence inequalities for a tangent space."""
    _require_square(t)
    _, _, mu0 = avg_incoherence(t)
    r = t.max_rank
    n = t.shape.n
    d = t.d

    left_u = 0.0
    left_v = 0.0
    for k in range(n):
        e_k = np.zeros(n)
        e_k[k] = 1.0
        gk = g_lift(e_k, t.shape)
        acc_u = 0.0
        acc_v = 0.0
        for u, v in t.factors:
            acc_u += float(np.linalg.norm(gk.conj().T @ u) ** 2)
            acc_v += float(np.linalg.norm(gk @ v) ** 2)
        left_u = max(left_u, acc_u / d)
        left_v = max(left_v, acc_v / d)

    left_proj = 0.0
    for j in range(d):
        for k in range(n):
            basis = ghat_basis(j, k, d, t.shape)
            left_proj = max(left_proj, tangent_project(t, basis).norm() ** 2)

    return IncoherenceConsequences(
        mu0=mu0,
        rank=r,
        n=n,
        basis_energy_u=left_u,
        basis_energy_v=left_v,
        basis_energy_bound=mu0 * r / n,
        projected_basis_energy=left_proj,
        projected_basis_bound=2 * mu0 * r / n,
    )
