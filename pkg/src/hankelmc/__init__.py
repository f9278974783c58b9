"""Completion of matrices and 3-D arrays with low-rank Hankel structure in the
Fourier domain: operator algebra, an ADMM solver, incoherence and
dual-certificate diagnostics, and a Monte-Carlo experiment harness."""

from .hankel import (
    HankelShape,
    TwoLevelShape,
    antidiag_weights,
    g_adjoint,
    g_lift,
    hankel_adjoint,
    hankel_lift,
    two_level_adjoint,
    two_level_lift,
    two_level_weights,
)
from .lifts import (
    BlockDiagonal,
    ghat_adjoint,
    ghat_basis,
    ghat_lift,
    hankel_blockdiag,
    hankel_blockdiag_adjoint,
    inverse_tube_dft,
    tube_dft,
    unitary_dft,
)
from .sampling import (
    GolfingPartition,
    SamplingMask,
    bernoulli_mask,
    derive_rng,
    derive_seed,
    golfing_partition,
    project,
)
from .solver import (
    SolveResult,
    SolverConfig,
    admm_complete,
    admm_complete_3d,
    nuclear_objective,
    nuclear_objective_3d,
    relative_error,
    svt,
)
from .geometry import (
    TangentSpace,
    avg_incoherence,
    block_svd,
    check_incoherence_consequences,
    tangent_complement,
    tangent_project,
    uv_product,
    worst_incoherence,
)
from .certificate import (
    CertificateReport,
    GolfingResult,
    RipEstimate,
    gf_norm,
    ginf_norm,
    golfing_certificate,
    rip_deviation,
    special_dual_certificate,
    verify_certificate,
)
from .signals import (
    SpectralSpec,
    gen_adversarial_row,
    gen_special,
    gen_spectral_3d,
    gen_spectral_fourier,
    gen_spectral_matrix,
    replace_rows,
)
from .phase import (
    PhaseGrid,
    RunConfig,
    emit_grid_csv,
    emit_heatmap_pgm,
    phase_transition_run,
    read_grid_csv,
)
from .fileio import ValidationError

__version__ = "0.1.0"
