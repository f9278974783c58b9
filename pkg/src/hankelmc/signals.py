"""Ground-truth generators: spectrally sparse 2-D/3-D data and adversarial rows.

Every generated instance is shipped with a numerical-rank certificate: the
(two-level) Hankel lift of each row/slice must satisfy
sigma_{r+1} / sigma_1 <= 1e-8 before the instance is used.  Draws that fail
the certificate (or land frequencies closer than the distinctness gap) are
retried on a fresh stream that is a pure function of (seed, index, attempt),
so generation stays deterministic; retries are logged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .hankel import HankelShape, TwoLevelShape, hankel_lift, two_level_lift
from .lifts import inverse_tube_dft, unitary_dft
from .sampling import derive_rng, derive_seed

__all__ = [
    "SpectralSpec",
    "gen_spectral_matrix",
    "gen_spectral_fourier",
    "gen_special",
    "gen_adversarial_row",
    "replace_rows",
    "gen_spectral_3d",
]

log = logging.getLogger(__name__)

MIN_FREQ_GAP = 1e-6
RANK_RATIO_TOL = 1e-8
MAX_ATTEMPTS = 200


@dataclass(frozen=True)
class SpectralSpec:
    """Frequencies, phases, and magnitude draws of one spectrally sparse signal.

    ``frequencies`` has shape (r,) for 1-D rows or (r, 2) for slice generators;
    the complex amplitudes are (1 + 10^(0.5 c)) e^(i psi), so their moduli lie
    in [2, 1 + sqrt(10)].
    """

    frequencies: np.ndarray
    phases: np.ndarray
    magnitudes: np.ndarray

    @property
    def r(self) -> int:
        return self.frequencies.shape[0]

    @property
    def amplitudes(self) -> np.ndarray:
        return (1.0 + 10.0 ** (0.5 * self.magnitudes)) * np.exp(1j * self.phases)


def _rank_ratio(sigma: np.ndarray, r: int) -> float:
    if r >= sigma.size:
        return 0.0
    return float(sigma[r] / sigma[0])


def _draw_spec(rng: np.random.Generator, r: int, pairs: bool) -> SpectralSpec | None:
    """One attempt at a frequency draw; None when the distinctness gap fails."""
    if pairs:
        f = rng.uniform(0.0, 1.0, size=(r, 2))
        if r > 1:
            diff = np.abs(f[:, None, :] - f[None, :, :]).max(axis=2)
            diff[np.diag_indices(r)] = np.inf
            if diff.min() < MIN_FREQ_GAP:
                return None
    else:
        f = rng.uniform(0.0, 1.0, size=r)
        if r > 1 and np.diff(np.sort(f)).min() < MIN_FREQ_GAP:
            return None
    psi = rng.uniform(0.0, 2.0 * np.pi, size=r)
    c = rng.uniform(0.0, 1.0, size=r)
    return SpectralSpec(f, psi, c)


def _spectral_row(
    n: int, r: int, shape: HankelShape, seed: int, index: int
) -> tuple[np.ndarray, SpectralSpec]:
    t = np.arange(n)
    for attempt in range(MAX_ATTEMPTS):
        rng = derive_rng(seed, index, attempt)
        spec = _draw_spec(rng, r, pairs=False)
        if spec is None:
            log.debug("row %d attempt %d: frequency collision, resampling", index, attempt)
            continue
        row = spec.amplitudes @ np.exp(2j * np.pi * np.outer(spec.frequencies, t))
        sigma = np.linalg.svd(hankel_lift(row, shape), compute_uv=False)
        if _rank_ratio(sigma, r) <= RANK_RATIO_TOL:
            return row, spec
        log.info("row %d attempt %d failed the rank certificate, retrying", index, attempt)
    raise RuntimeError(f"no rank-{r} row found after {MAX_ATTEMPTS} attempts")


def gen_spectral_fourier(
    d: int, n: int, r: int, seed: int
) -> tuple[np.ndarray, list[SpectralSpec]]:
    """Fourier-domain matrix whose rows are independent r-sparse exponential sums.

    Row i is x(t) = sum_k a_k exp(2 pi i f_k t) for t = 0..n-1; every row's
    Hankel lift is certified to have numerical rank r.
    """
    if d < 1 or n < 2 or r < 1:
        raise ValueError(f"invalid dimensions d={d}, n={n}, r={r}")
    shape = HankelShape.square(n)
    xhat = np.zeros((d, n), dtype=complex)
    specs = []
    for i in range(d):
        xhat[i], spec = _spectral_row(n, r, shape, seed, i)
        specs.append(spec)
    return xhat, specs


def gen_spectral_matrix(
    d: int, n: int, r: int, seed: int
) -> tuple[np.ndarray, list[SpectralSpec]]:
    """Spectrally sparse test matrix: inverse DFT (per column) of ``gen_spectral_fourier``."""
    xhat, specs = gen_spectral_fourier(d, n, r, seed)
    x = unitary_dft(d).conj().T @ xhat
    return x, specs


def gen_special(d: int, n: int) -> np.ndarray:
    """Rank-1 matrix with an all-ones first column and zeros elsewhere."""
    if d < 1 or n < 1:
        raise ValueError(f"invalid dimensions d={d}, n={n}")
    x = np.zeros((d, n), dtype=complex)
    x[:, 0] = 1.0
    return x


def gen_adversarial_row(r: int, seed: int, n: int = 47) -> np.ndarray:
    """Two-spike row whose Hankel lift has rank exactly r but is aligned with
    the lift basis, so only average-case incoherence can hold.

    Using 1-based positions: one spike at k drawn from {r, n-r+1}; the other
    at j drawn from {1..r-1} when k = r and from {n-r+2..n} otherwise.  Both
    entries are 1.  Requires 2 <= r <= (n-1)/2 so the position sets are
    nonempty.
    """
    if n < 5 or n % 2 == 0:
        raise ValueError(f"row length must be odd and at least 5, got {n}")
    if not 2 <= r <= (n - 1) // 2:
        raise ValueError(f"rank must lie in [2, {(n - 1) // 2}], got {r}")
    shape = HankelShape.square(n)
    for attempt in range(MAX_ATTEMPTS):
        rng = derive_rng(seed, attempt)
        k = r if rng.random() < 0.5 else n - r + 1
        if k == r:
            j = int(rng.integers(1, r))
        else:
            j = int(rng.integers(n - r + 2, n + 1))
        x = np.zeros(n)
        x[j - 1] = 1.0
        x[k - 1] = 1.0
        sigma = np.linalg.svd(hankel_lift(x, shape), compute_uv=False)
        if _rank_ratio(sigma, r) <= RANK_RATIO_TOL and sigma[r - 1] / sigma[0] > RANK_RATIO_TOL:
            return x
        log.info("adversarial row attempt %d failed the rank certificate", attempt)
    raise RuntimeError(f"no rank-{r} adversarial row found after {MAX_ATTEMPTS} attempts")


def replace_rows(xhat: np.ndarray, r: int, seed: int, count: int = 2) -> np.ndarray:
    """Replace ``count`` random rows of a Fourier-domain matrix with adversarial
    rows and return the inverse DFT (the spatial-domain test matrix)."""
    xhat = np.asarray(xhat, dtype=complex)
    d, n = xhat.shape
    if count > d:
        raise ValueError(f"cannot replace {count} of {d} rows")
    rng = derive_rng(seed, 0)
    rows = rng.choice(d, size=count, replace=False)
    out = xhat.copy()
    for i, row in enumerate(sorted(int(v) for v in rows)):
        out[row] = gen_adversarial_row(r, derive_seed(seed, 1 + i), n)
    return unitary_dft(d).conj().T @ out


def _spectral_slice(
    n: int, s: int, r: int, shape: TwoLevelShape, seed: int, index: int
) -> tuple[np.ndarray, SpectralSpec]:
    jj = np.arange(1, n + 1)
    kk = np.arange(1, s + 1)
    for attempt in range(MAX_ATTEMPTS):
        rng = derive_rng(seed, index, attempt)
        spec = _draw_spec(rng, r, pairs=True)
        if spec is None:
            log.debug("slice %d attempt %d: frequency collision, resampling", index, attempt)
            continue
        w = np.exp(2j * np.pi * spec.frequencies[:, 0])
        z = np.exp(2j * np.pi * spec.frequencies[:, 1])
        slc = np.einsum(
            "q,qj,qk->jk", spec.amplitudes, w[:, None] ** jj, z[:, None] ** kk
        )
        sigma = np.linalg.svd(two_level_lift(slc, shape), compute_uv=False)
        if _rank_ratio(sigma, r) <= RANK_RATIO_TOL:
            return slc, spec
        log.info("slice %d attempt %d failed the rank certificate, retrying", index, attempt)
    raise RuntimeError(f"no rank-{r} slice found after {MAX_ATTEMPTS} attempts")


def gen_spectral_3d(
    r: int,
    seed: int,
    n: int = 9,
    s: int = 9,
    d: int = 16,
    shape: TwoLevelShape | None = None,
) -> tuple[np.ndarray, list[SpectralSpec]]:
    """3-D test array whose tube-DFT frontal slices are 2-D exponential sums.

    Slice ell has entries sum_q a_q w_q^j z_q^k with w, z on the unit circle;
    each slice's two-level Hankel lift is certified to have numerical rank r.
    The returned array is the inverse tube-DFT of the stack.
    """
    if min(n, s, d) < 1 or r < 1:
        raise ValueError(f"invalid dimensions n={n}, s={s}, d={d}, r={r}")
    shape = shape or TwoLevelShape.square(n, s)
    if (shape.n, shape.s) != (n, s):
        raise ValueError("two-level shape does not match the slice dimensions")
    xhat = np.zeros((n, s, d), dtype=complex)
    specs = []
    for i in range(d):
        xhat[:, :, i], spec = _spectral_slice(n, s, r, shape, seed, i)
        specs.append(spec)
    return inverse_tube_dft(xhat), specs
