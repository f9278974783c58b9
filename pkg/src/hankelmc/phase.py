"""Monte-Carlo phase-transition experiments over a (p, r) grid.

Each (rank, probability, trial) cell draws its instance and mask from a
stream hashed out of (master seed, r index, p index, trial), so grids are
pure functions of their configuration and independent of execution order,
including when cells run in a process pool.  A trial succeeds when the solver
converges and the relative reconstruction error is below the configured
threshold; non-convergent trials count as failures and are logged.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fileio import ValidationError
from .hankel import HankelShape, TwoLevelShape
from .sampling import bernoulli_mask, derive_seed, project
from .signals import gen_special, gen_spectral_3d, gen_spectral_fourier, replace_rows
from .solver import SolverConfig, admm_complete, admm_complete_3d
from .lifts import unitary_dft

__all__ = [
    "RunConfig",
    "PhaseGrid",
    "DEFAULT_P_GRID",
    "DEFAULT_R_GRID_2D",
    "DEFAULT_R_GRID_3D",
    "phase_transition_run",
    "emit_grid_csv",
    "read_grid_csv",
    "emit_heatmap_pgm",
]

log = logging.getLogger(__name__)

DEFAULT_P_GRID = tuple(np.linspace(0.1, 0.95, 18))
DEFAULT_R_GRID_2D = tuple(range(1, 25))
DEFAULT_R_GRID_3D = tuple(range(1, 13))

MODES = ("special", "2d", "3d")


@dataclass(frozen=True)
class RunConfig:
    """Full description of one phase-transition experiment."""

    mode: str
    d: int = 16
    n: int = 47
    s: int = 9
    p_values: tuple[float, ...] = DEFAULT_P_GRID
    r_values: tuple[int, ...] = ()
    trials: int = 50
    seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    adversarial: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials < 0:
            raise ValidationError(f"trials must be nonnegative, got {self.trials}")
        if self.mode == "3d" and self.adversarial:
            raise ValidationError("adversarial row replacement is a 2-D construction")
        if self.mode == "special" and self.adversarial:
            raise ValidationError("the special matrix has no adversarial variant")
        if not self.r_values:
            if self.mode == "special":
                object.__setattr__(self, "r_values", (1,))
            elif self.mode == "2d":
                object.__setattr__(self, "r_values", DEFAULT_R_GRID_2D)
            else:
                object.__setattr__(self, "r_values", DEFAULT_R_GRID_3D)
        if any(not 0.0 <= p <= 1.0 for p in self.p_values):
            raise ValidationError("all sampling probabilities must lie in [0, 1]")
        if any(r < 1 for r in self.r_values):
            raise ValidationError("all ranks must be positive")

    @property
    def dims(self) -> tuple[int, ...]:
        if self.mode == "3d":
            return (self.n, self.s, self.d)
        return (self.d, self.n)

    def shape2d(self) -> HankelShape:
        return HankelShape.square(self.n)

    def shape3d(self) -> TwoLevelShape:
        return TwoLevelShape.square(self.n, self.s)


@dataclass
class PhaseGrid:
    """Success counts over the (r, p) grid; rates() gives fractions in [0, 1]."""

    p_values: tuple[float, ...]
    r_values: tuple[int, ...]
    trials: int
    successes: np.ndarray
    seed: int
    config: dict

    def rates(self) -> np.ndarray:
        return self.successes / max(self.trials, 1)


def _instance(cfg: RunConfig, r: int, instance_seed: int) -> np.ndarray:
    if cfg.mode == "special":
        return gen_special(cfg.d, cfg.n)
    if cfg.mode == "2d":
        xhat, _ = gen_spectral_fourier(cfg.d, cfg.n, r, instance_seed)
        if cfg.adversarial:
            return replace_rows(xhat, r, derive_seed(instance_seed, 2))
        return unitary_dft(cfg.d).conj().T @ xhat
    x, _ = gen_spectral_3d(r, instance_seed, n=cfg.n, s=cfg.s, d=cfg.d)
    return x


def _run_cell(cfg: RunConfig, ri: int, pi: int) -> int:
    r = cfg.r_values[ri]
    p = cfg.p_values[pi]
    successes = 0
    for trial in range(cfg.trials):
        instance_seed = derive_seed(cfg.seed, ri, pi, trial, 0)
        mask_seed = derive_seed(cfg.seed, ri, pi, trial, 1)
        truth = _instance(cfg, r, instance_seed)
        mask = bernoulli_mask(cfg.dims, p, mask_seed)
        observed = project(truth, mask)
        if cfg.mode == "3d":
            res = admm_complete_3d(observed, mask, cfg.shape3d(), cfg.solver, truth)
        else:
            res = admm_complete(observed, mask, cfg.shape2d(), cfg.solver, truth)
        if not res.converged:
            log.warning(
                "trial (r=%d, p=%.3f, trial=%d) did not converge; counted as failure",
                r, p, trial,
            )
            continue
        if res.relative_error < cfg.solver.success_threshold:
            successes += 1
    return successes


def phase_transition_run(cfg: RunConfig) -> PhaseGrid:
    """Run the full grid and return per-cell success counts."""
    cells = [(ri, pi) for ri in range(len(cfg.r_values)) for pi in range(len(cfg.p_values))]
    successes = np.zeros((len(cfg.r_values), len(cfg.p_values)), dtype=int)
    if cfg.workers > 1 and cfg.trials > 0:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = pool.map(_run_cell, *zip(*((cfg, ri, pi) for ri, pi in cells)))
            for (ri, pi), count in zip(cells, results):
                successes[ri, pi] = count
    else:
        for ri, pi in cells:
            successes[ri, pi] = _run_cell(cfg, ri, pi)
            log.info(
                "cell r=%d p=%.3f: %d/%d recovered",
                cfg.r_values[ri], cfg.p_values[pi], successes[ri, pi], cfg.trials,
            )
    snapshot = dataclasses.asdict(cfg)
    return PhaseGrid(
        p_values=tuple(cfg.p_values),
        r_values=tuple(cfg.r_values),
        trials=cfg.trials,
        successes=successes,
        seed=cfg.seed,
        config=snapshot,
    )


def emit_grid_csv(grid: PhaseGrid, path: str | Path) -> None:
    """First row: p values; first column: r values; cells: rate to 6 decimals."""
    rates = grid.rates()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("," + ",".join(f"{p:.17g}" for p in grid.p_values) + "\n")
        for i, r in enumerate(grid.r_values):
            fh.write(f"{r}," + ",".join(f"{v:.6f}" for v in rates[i]) + "\n")


def read_grid_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of ``emit_grid_csv``: (p_values, r_values, rates)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty file")
    header = lines[0].split(",")
    if header[0] != "":
        raise ValidationError(f"{path}: line 1: expected an empty corner cell")
    try:
        p_values = np.array([float(tok) for tok in header[1:]])
    except ValueError:
        raise ValidationError(f"{path}: line 1: bad probability value") from None
    r_values = []
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        tokens = line.split(",")
        if len(tokens) != len(p_values) + 1:
            raise ValidationError(
                f"{path}: line {line_no}: expected {len(p_values) + 1} fields"
            )
        try:
            r_values.append(int(tokens[0]))
            rows.append([float(tok) for tok in tokens[1:]])
        except ValueError:
            raise ValidationError(f"{path}: line {line_no}: bad numeric field") from None
    return p_values, np.array(r_values), np.array(rows)


def emit_heatmap_pgm(grid: PhaseGrid, path: str | Path) -> None:
    """Plain-text PGM heatmap: one pixel per cell, gray = round(255 * rate),
    rank increasing downward and probability increasing rightward."""
    rates = grid.rates()
    pixels = np.round(255 * rates).astype(int)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("P2\n")
        fh.write(f"{len(grid.p_values)} {len(grid.r_values)}\n")
        fh.write("255\n")
        for row in pixels:
            fh.write(" ".join(str(v) for v in row) + "\n")
