"""Bernoulli observation masks, golfing partitions, and the sampling projection.

All randomness flows through numpy's PCG64 generator seeded from explicit
integer tuples, so every mask is a pure function of its seed and masks derived
from a common seed (golfing partitions, per-cell experiment streams) are
reproducible independently of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SamplingMask",
    "GolfingPartition",
    "bernoulli_mask",
    "golfing_partition",
    "project",
    "derive_seed",
    "derive_rng",
]


def derive_rng(*parts: int) -> np.random.Generator:
    """Generator for the stream identified by an integer path such as (seed, i, k)."""
    return np.random.default_rng(np.random.SeedSequence(parts))


def derive_seed(*parts: int) -> int:
    """Collapse an integer path into a single reproducible 64-bit seed."""
    return int(np.random.SeedSequence(parts).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SamplingMask:
    """Set of observed indices of a matrix or 3-D array.

    ``observed`` is a boolean array over the full index grid; ``p`` is the
    nominal Bernoulli probability the mask was drawn with and ``seed`` the
    stream it came from (None for masks not produced by ``bernoulli_mask``).
    """

    observed: np.ndarray
    p: float
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.observed.dtype != np.bool_:
            raise ValueError("observed must be a boolean array")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {self.p}")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.observed.shape

    @property
    def count(self) -> int:
        return int(self.observed.sum())

    def indices(self) -> np.ndarray:
        """Observed index tuples, 0-based, in lexicographic order."""
        return np.argwhere(self.observed)

    @classmethod
    def full(cls, dims: tuple[int, ...]) -> "SamplingMask":
        return cls(np.ones(dims, dtype=bool), 1.0, None)

    @classmethod
    def empty(cls, dims: tuple[int, ...]) -> "SamplingMask":
        return cls(np.zeros(dims, dtype=bool), 0.0, None)


def bernoulli_mask(dims: tuple[int, ...], p: float, seed: int) -> SamplingMask:
    """Include each index independently with probability p; deterministic in seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    rng = derive_rng(seed)
    return SamplingMask(rng.random(dims) < p, p, seed)


@dataclass(frozen=True)
class GolfingPartition:
    """Independent Bernoulli(q) masks whose union is distributed Bernoulli(p)."""

    k0: int
    q: float
    masks: tuple[SamplingMask, ...]
    p: float
    seed: int | None = None

    def union(self) -> SamplingMask:
        observed = np.zeros(self.masks[0].dims, dtype=bool)
        for m in self.masks:
            observed |= m.observed
        return SamplingMask(observed, self.p, self.seed)


def golfing_partition(
    dims: tuple[int, ...], p: float, seed: int, log_base: float = math.e
) -> GolfingPartition:
    """Split a Bernoulli(p) sample into k0 = ceil(2 log(prod(dims))) pieces.

    Each piece is an independent Bernoulli(q) mask with q = 1 - (1-p)^(1/k0),
    so a fixed index lands in the union with probability exactly p.  The
    logarithm defaults to natural log; pass ``log_base`` to change it.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"probability must lie in (0, 1], got {p}")
    total = math.prod(dims)
    k0 = math.ceil(2 * math.log(total, log_base))
    k0 = max(k0, 1)
    q = 1.0 - (1.0 - p) ** (1.0 / k0)
    masks = tuple(
        bernoulli_mask(dims, q, derive_seed(seed, k)) for k in range(k0)
    )
    return GolfingPartition(k0=k0, q=q, masks=masks, p=p, seed=seed)


def project(x: np.ndarray, mask: SamplingMask) -> np.ndarray:
    """Keep the observed entries of x and zero the rest (idempotent)."""
    x = np.asarray(x)
    if x.shape != mask.dims:
        raise ValueError(f"array shape {x.shape} does not match mask dims {mask.dims}")
    return np.where(mask.observed, x, 0)
