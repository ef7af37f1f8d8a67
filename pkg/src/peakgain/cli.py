"""Command line front end.

Subcommands: ``analyze`` (per-N structural report of the batch response),
``sweep`` (gain estimates over a doubling batch-length schedule), ``estimate``
(run the reset-free power iteration on the simulated plant) and ``oracle``
(frequency-grid worst-case gain). Everything numeric is written as CSV with
shortest round-trip float formatting, so identical configurations produce
byte-identical outputs.

Exit codes: 0 success, 1 validation error, 2 non-convergence.
"""

import argparse
import os
import sys

import numpy as np

from .estimator import (
    PowerIterationConfig,
    iterate_reset_free,
    select_shift,
    write_trace_csv,
    write_update_snapshots,
)
from .lifting import circulant_coefficients, lift, periodic_response_matrix
from .lti import (
    RationalTransferFunction,
    SystemSpecError,
    hinf_peak,
    parse_system_file,
    tf_to_ss,
)
from .plant import RESET_FREE, SteadyStatePlant, new_session
from .spectral import (
    circulant_eigenvalues,
    diagonalization_residual,
    max_gain_reset_based,
    reversed_spectrum,
)

__all__ = ["main"]


def _fmt(value):
    return repr(float(value))


def _write_csv(path, header, rows):
    lines = [header]
    lines.extend(",".join(str(cell) for cell in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _load(args):
    sys_obj = parse_system_file(args.system)
    if isinstance(sys_obj, RationalTransferFunction):
        return sys_obj, tf_to_ss(sys_obj)
    return sys_obj, sys_obj


def _outdir(args):
    os.makedirs(args.out, exist_ok=True)
    return args.out


def cmd_analyze(args):
    _, ss = _load(args)
    N = args.n
    out = _outdir(args)
    spec = circulant_coefficients(ss, N)
    lam = circulant_eigenvalues(spec)
    rev = reversed_spectrum(lam)
    lifted = lift(ss, N)
    M = periodic_response_matrix(lifted)
    residual, _ = diagonalization_residual(M)
    j_is_zero = bool(np.all(lifted.J == 0.0))
    gain_reset_free = float(np.abs(lam).max())
    rev_top = float(rev.max())
    gain_reset_based = max_gain_reset_based(lifted.J)

    _write_csv(
        os.path.join(out, "coefficients.csv"),
        "k,a",
        [(k, _fmt(spec.a[k])) for k in range(N)],
    )
    _write_csv(
        os.path.join(out, "spectrum.csv"),
        "m,omega,lambdaRe,lambdaIm,lambdaAbs,lambdaReversed",
        [
            (
                m,
                _fmt(2.0 * np.pi * m / N),
                _fmt(lam[m].real),
                _fmt(lam[m].imag),
                _fmt(abs(lam[m])),
                _fmt(rev[m]),
            )
            for m in range(N)
        ],
    )
    summary = [
        ("N", N),
        ("jIsZero", "true" if j_is_zero else "false"),
        ("diagResidualMax", _fmt(residual)),
        ("lambdaMaxResetFree", _fmt(gain_reset_free)),
        ("lambdaReversedTop", _fmt(rev_top)),
        ("lambdaMaxResetBased", _fmt(gain_reset_based)),
    ]
    _write_csv(os.path.join(out, "summary.csv"), "key,value", summary)
    for key, value in summary:
        print(f"{key} = {value}")
    if j_is_zero:
        print("note: the single-batch response is identically zero at this N; "
              "a reset-based experiment cannot see this plant")
    return 0


def cmd_sweep(args):
    sys_obj, ss = _load(args)
    if args.n_start < 1:
        raise SystemSpecError(f"--n-start must be at least 1, got {args.n_start}")
    if args.n_doublings < 0:
        raise SystemSpecError(f"--n-doublings must be nonnegative, got {args.n_doublings}")
    out = _outdir(args)
    oracle, _ = hinf_peak(sys_obj, args.grid)
    schedule = [args.n_start * 2**k for k in range(args.n_doublings + 1)]
    rows = []
    free_errors = []
    based_errors = []
    for N in schedule:
        lam = circulant_eigenvalues(circulant_coefficients(ss, N))
        gain_free = float(np.abs(lam).max())
        gain_based = max_gain_reset_based(lift(ss, N).J)
        err_free = abs(gain_free - oracle) / oracle
        err_based = abs(gain_based - oracle) / oracle
        free_errors.append(err_free)
        based_errors.append(err_based)
        rows.append(
            (
                N,
                _fmt(gain_free),
                _fmt(gain_based),
                _fmt(oracle),
                _fmt(err_free),
                _fmt(err_based),
            )
        )
    _write_csv(
        os.path.join(out, "sweep.csv"),
        "N,resetFree,resetBased,oracle,resetFreeRelError,resetBasedRelError",
        rows,
    )
    print(f"oracle gain: {_fmt(oracle)}")
    print("N, reset-free rel. error, reset-based rel. error, error ratio to previous N")
    for i, N in enumerate(schedule):
        ratio = "" if i == 0 or free_errors[i - 1] == 0 else f"{free_errors[i] / free_errors[i - 1]:.3g}"
        print(f"{N}: {free_errors[i]:.3e}, {based_errors[i]:.3e}, {ratio}")
    return 0


def cmd_estimate(args):
    _, ss = _load(args)
    out = _outdir(args)
    if args.ideal_plant:
        plant = SteadyStatePlant(ss, args.n)
        default_tol = 1e-8
    else:
        plant = new_session(ss, args.n, RESET_FREE)
        default_tol = 1e-4
    tol = args.tol if args.tol is not None else default_tol
    shift = args.shift
    if shift is None:
        shift = select_shift(plant, args.n, args.seed)
    config = PowerIterationConfig(
        n=args.n,
        n_update=args.n_update,
        shift=shift,
        max_updates=args.max_updates,
        convergence_tol=tol,
        rng_seed=args.seed,
    )
    trace = iterate_reset_free(plant, config)
    write_trace_csv(trace, os.path.join(out, "trace.csv"))
    snapshots = write_update_snapshots(trace, out)
    updates = len(trace.beta_updates)
    print(f"shift = {_fmt(config.shift)}")
    print(f"updates = {updates}")
    print(f"batches = {plant.batch_counter}")
    print(f"beta = {_fmt(trace.estimate)}")
    print(f"converged = {'true' if trace.converged else 'false'}")
    print(f"snapshots: {', '.join(snapshots)}")
    return 0 if trace.converged else 2


def cmd_oracle(args):
    sys_obj, _ = _load(args)
    out = _outdir(args)
    gain, omega = hinf_peak(sys_obj, args.grid)
    rows = [
        ("hinfNorm", _fmt(gain)),
        ("peakOmega", _fmt(omega)),
        ("gridSize", args.grid),
    ]
    print(f"worst-case gain = {_fmt(gain)}")
    print(f"peak frequency = {_fmt(omega)} rad/sample")
    if isinstance(sys_obj, RationalTransferFunction) and len(sys_obj.den) > 1:
        poles = np.roots(sys_obj.den)
        dominant = poles[int(np.argmax(np.abs(poles)))]
        rows.append(("dominantPoleMagnitude", _fmt(abs(dominant))))
        rows.append(("dominantPoleAngle", _fmt(abs(np.angle(dominant)))))
        print(
            f"dominant pole: magnitude {_fmt(abs(dominant))}, "
            f"resonance near {_fmt(abs(np.angle(dominant)))} rad/sample"
        )
    _write_csv(os.path.join(out, "oracle.csv"), "key,value", rows)
    return 0


class _Parser(argparse.ArgumentParser):
    # validation failures (including usage errors) exit with code 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser():
    parser = _Parser(
        prog="peakgain",
        description="Worst-case gain estimation for discrete-time LTI systems "
        "from batch experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze", help="per-N structural report of the batch response"
    )
    analyze.add_argument("--system", required=True, help="system file path")
    analyze.add_argument("--n", type=int, required=True, help="batch length")
    analyze.add_argument("--out", default="out", help="output directory")
    analyze.set_defaults(func=cmd_analyze)

    sweep = sub.add_parser(
        "sweep", help="gain estimates over a doubling batch-length schedule"
    )
    sweep.add_argument("--system", required=True)
    sweep.add_argument("--n-start", type=int, default=8, help="first batch length")
    sweep.add_argument(
        "--n-doublings", type=int, default=8, help="number of times N is doubled"
    )
    sweep.add_argument("--grid", type=int, default=100001, help="oracle grid size")
    sweep.add_argument("--out", default="out")
    sweep.set_defaults(func=cmd_sweep)

    estimate = sub.add_parser(
        "estimate", help="run the reset-free power iteration on the plant"
    )
    estimate.add_argument("--system", required=True)
    estimate.add_argument("--n", type=int, default=50, help="batch length")
    estimate.add_argument(
        "--n-update", type=int, default=10, help="batches to hold each input"
    )
    estimate.add_argument("--seed", type=int, default=0)
    estimate.add_argument(
        "--shift", type=float, default=None, help="override the probed shift"
    )
    estimate.add_argument(
        "--ideal-plant",
        action="store_true",
        help="use the exact steady-state plant instead of the transient simulation",
    )
    estimate.add_argument("--max-updates", type=int, default=1000)
    estimate.add_argument(
        "--tol",
        type=float,
        default=None,
        help="convergence tolerance on beta (default 1e-4, or 1e-8 with --ideal-plant)",
    )
    estimate.add_argument("--out", default="out")
    estimate.set_defaults(func=cmd_estimate)

    oracle = sub.add_parser("oracle", help="frequency-grid worst-case gain")
    oracle.add_argument("--system", required=True)
    oracle.add_argument("--grid", type=int, default=100001, help="grid size")
    oracle.add_argument("--out", default="out")
    oracle.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SystemSpecError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
