"""Command-line interface: gen | complete | phase | certify | incoherence.

Exit codes: 0 on success, 1 on validation errors (bad arguments or malformed
files), 2 on I/O errors.  All indices on the command line and in files are
1-based; see the package docs for the file formats.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

import numpy as np

from . import fileio
from .certificate import (
    golfing_certificate,
    special_dual_certificate,
    verify_certificate,
)
from .fileio import ValidationError
from .geometry import (
    avg_incoherence,
    average_row_energy,
    block_svd,
    check_incoherence_consequences,
    uv_product,
    worst_incoherence,
    worst_row_energy,
)
from .hankel import HankelShape, TwoLevelShape
from .lifts import hankel_blockdiag
from .phase import RunConfig, emit_grid_csv, emit_heatmap_pgm, phase_transition_run
from .sampling import bernoulli_mask, golfing_partition, project
from .signals import gen_special, gen_spectral_3d, gen_spectral_fourier, replace_rows
from .solver import SolverConfig, admm_complete, admm_complete_3d
from .lifts import unitary_dft

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # route argparse failures to exit code 1
        raise ValidationError(message)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise ValidationError(f"expected a comma-separated number list, got {text!r}")


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rho", type=float, default=0.05, help="ADMM penalty parameter")
    p.add_argument("--tol-primal", type=float, default=1e-7)
    p.add_argument("--tol-dual", type=float, default=1e-7)
    p.add_argument("--max-iter", type=int, default=3000)
    p.add_argument("--success-threshold", type=float, default=1e-3)


def _solver_config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        rho=args.rho,
        tol_primal=args.tol_primal,
        tol_dual=args.tol_dual,
        max_iter=args.max_iter,
        success_threshold=args.success_threshold,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hankelmc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a test instance (and optionally a mask)")
    p_gen.add_argument("--mode", choices=("special", "2d", "3d"), required=True)
    p_gen.add_argument("--out", required=True, help="output instance file")
    p_gen.add_argument("--d", type=int, default=16)
    p_gen.add_argument("--n", type=int, default=47)
    p_gen.add_argument("--s", type=int, default=9)
    p_gen.add_argument("--r", type=int, default=1)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--adversarial", action="store_true",
                       help="replace two Fourier-domain rows (2d mode only)")
    p_gen.add_argument("--p", type=float, help="also draw a Bernoulli mask")
    p_gen.add_argument("--mask-out", help="mask output file (requires --p)")

    p_cmp = sub.add_parser("complete", help="complete a matrix or 3-D array from a mask")
    p_cmp.add_argument("--input", required=True)
    p_cmp.add_argument("--mask", required=True)
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--report", help="JSON solve report")
    p_cmp.add_argument("--reference", help="ground truth for the relative error")
    p_cmp.add_argument("--shape", type=_int_list,
                       help="n1,n2 for matrices or L1,K1,L2,K2 for arrays")
    _add_solver_args(p_cmp)

    p_ph = sub.add_parser("phase", help="Monte-Carlo phase-transition grid")
    p_ph.add_argument("--mode", choices=("special", "2d", "3d"), required=True)
    p_ph.add_argument("--out-csv", required=True)
    p_ph.add_argument("--out-pgm")
    p_ph.add_argument("--d", type=int, default=16)
    p_ph.add_argument("--n", type=int, default=47)
    p_ph.add_argument("--s", type=int, default=9)
    p_ph.add_argument("--p-grid", type=_float_list, help="default: 18 values 0.1..0.95")
    p_ph.add_argument("--r-grid", type=_int_list)
    p_ph.add_argument("--trials", type=int, default=50)
    p_ph.add_argument("--seed", type=int, default=0)
    p_ph.add_argument("--adversarial", action="store_true")
    p_ph.add_argument("--workers", type=int, default=1)
    _add_solver_args(p_ph)

    p_ct = sub.add_parser("certify", help="dual-certificate construction and checks")
    p_ct.add_argument("--special", action="store_true",
                      help="closed-form certificate for the special matrix")
    p_ct.add_argument("--omega", type=_int_list,
                      help="1-based observed row indices (special mode)")
    p_ct.add_argument("--d", type=int, default=16)
    p_ct.add_argument("--n", type=int, default=47)
    p_ct.add_argument("--r", type=int, default=1)
    p_ct.add_argument("--p", type=float, default=0.8)
    p_ct.add_argument("--seed", type=int, default=0)
    p_ct.add_argument("--out", help="JSON output path (default: stdout)")

    p_inc = sub.add_parser("incoherence", help="incoherence parameters of an instance")
    p_inc.add_argument("--special", action="store_true")
    p_inc.add_argument("--d", type=int, default=16)
    p_inc.add_argument("--n", type=int, default=47)
    p_inc.add_argument("--r", type=int, default=1)
    p_inc.add_argument("--seed", type=int, default=0)
    p_inc.add_argument("--out", help="JSON output path (default: stdout)")

    return parser


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.mask_out and args.p is None:
        raise ValidationError("--mask-out requires --p")
    if args.mode == "special":
        if args.adversarial:
            raise ValidationError("the special matrix has no adversarial variant")
        x = gen_special(args.d, args.n)
        fileio.write_matrix(args.out, x)
        dims: tuple[int, ...] = (args.d, args.n)
    elif args.mode == "2d":
        xhat, _ = gen_spectral_fourier(args.d, args.n, args.r, args.seed)
        if args.adversarial:
            x = replace_rows(xhat, args.r, args.seed)
        else:
            x = unitary_dft(args.d).conj().T @ xhat
        fileio.write_matrix(args.out, x)
        dims = (args.d, args.n)
    else:
        if args.adversarial:
            raise ValidationError("adversarial row replacement is a 2-D construction")
        x, _ = gen_spectral_3d(args.r, args.seed, n=args.n, s=args.s, d=args.d)
        fileio.write_array3(args.out, x)
        dims = (args.n, args.s, args.d)
    if args.p is not None and args.mask_out:
        fileio.write_mask(args.mask_out, bernoulli_mask(dims, args.p, args.seed))
    return 0


def _cmd_complete(args: argparse.Namespace) -> int:
    x = fileio.read_complex_file(args.input)
    mask = fileio.read_mask(args.mask)
    if mask.dims != x.shape:
        raise ValidationError(f"mask dims {mask.dims} do not match input {x.shape}")
    cfg = _solver_config(args)
    reference = None
    if args.reference:
        reference = fileio.read_complex_file(args.reference)
        if reference.shape != x.shape:
            raise ValidationError("reference dims do not match the input")
    observed = project(x, mask)
    if x.ndim == 2:
        if args.shape and len(args.shape) != 2:
            raise ValidationError("matrix completion takes --shape n1,n2")
        shape = HankelShape(*args.shape) if args.shape else HankelShape.square(x.shape[1])
        res = admm_complete(observed, mask, shape, cfg, reference)
        fileio.write_matrix(args.out, res.x)
    else:
        if args.shape and len(args.shape) != 4:
            raise ValidationError("array completion takes --shape L1,K1,L2,K2")
        shape3 = (
            TwoLevelShape(*args.shape)
            if args.shape
            else TwoLevelShape.square(x.shape[0], x.shape[1])
        )
        res = admm_complete_3d(observed, mask, shape3, cfg, reference)
        fileio.write_array3(args.out, res.x)
    if args.report:
        fileio.write_json(args.report, {
            "iterations": res.iterations,
            "primal_residual": res.primal_residual,
            "dual_residual": res.dual_residual,
            "converged": res.converged,
            "relative_error": res.relative_error,
        })
    return 0


def _cmd_phase(args: argparse.Namespace) -> int:
    cfg = RunConfig(
        mode=args.mode,
        d=args.d,
        n=args.n,
        s=args.s,
        p_values=args.p_grid or RunConfig.__dataclass_fields__["p_values"].default,
        r_values=args.r_grid or (),
        trials=args.trials,
        seed=args.seed,
        solver=_solver_config(args),
        adversarial=args.adversarial,
        workers=args.workers,
    )
    grid = phase_transition_run(cfg)
    emit_grid_csv(grid, args.out_csv)
    if args.out_pgm:
        emit_heatmap_pgm(grid, args.out_pgm)
    return 0


def _instance_tangent(args: argparse.Namespace):
    if args.special:
        x = gen_special(args.d, args.n)
    else:
        xhat, _ = gen_spectral_fourier(args.d, args.n, args.r, args.seed)
        x = unitary_dft(args.d).conj().T @ xhat
    shape = HankelShape.square(args.n)
    if shape.n1 != shape.n2:
        raise ValidationError("certificate and incoherence runs need an odd n")
    lifted = hankel_blockdiag(x, shape)
    tangent, _ = block_svd(lifted)
    return x, tangent


def _cmd_certify(args: argparse.Namespace) -> int:
    if args.special:
        if not args.omega:
            raise ValidationError("--special requires --omega i,j,... (1-based rows)")
        idx = [i - 1 for i in args.omega]
        lam, report = special_dual_certificate(idx, args.d)
        payload = dataclasses.asdict(report)
        payload["observed_rows"] = list(args.omega)
    else:
        _, tangent = _instance_tangent(args)
        partition = golfing_partition((args.d, args.n), args.p, args.seed)
        result = golfing_certificate(tangent, uv_product(tangent), partition)
        report = verify_certificate(result.certificate, tangent, partition.union(), args.p)
        payload = dataclasses.asdict(report)
        payload["golfing_residuals"] = list(result.residuals)
        payload["k0"] = partition.k0
        payload["q"] = partition.q
    text = fileio.write_json(args.out, payload)
    if not args.out:
        print(text)
    return 0


def _cmd_incoherence(args: argparse.Namespace) -> int:
    _, tangent = _instance_tangent(args)
    mu_u, mu_v, mu0 = avg_incoherence(tangent)
    raw_avg = average_row_energy(tangent)
    raw_worst = worst_row_energy(tangent)
    consequences = check_incoherence_consequences(tangent)
    payload = {
        "mu0": mu0,
        "mu1": worst_incoherence(tangent),
        "mu_avg_left": mu_u,
        "mu_avg_right": mu_v,
        "raw_avg": max(raw_avg),
        "raw_worst": max(raw_worst),
        "rank": tangent.max_rank,
        "consequences": consequences,
    }
    text = fileio.write_json(args.out, payload)
    if not args.out:
        print(text)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "complete": _cmd_complete,
    "phase": _cmd_phase,
    "certify": _cmd_certify,
    "incoherence": _cmd_incoherence,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
