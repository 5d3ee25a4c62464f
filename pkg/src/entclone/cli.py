"""Command-line entry point: constants, tradeoff curves, verification and searches.

Usage::

    entclone constants
    entclone fig1 --points 200 --out fig1.csv
    entclone fig2 --points 200
    entclone verify --seed 42 --trials 1000
    entclone optimize --mode isometry:fidelity --restarts 20

Exit codes: 0 success, 1 verification failure (or optimize MISMATCH), 2 usage error.
"""
import argparse
import contextlib
import sys

import numpy as np

from . import channels, optimize
from .cloner import (
    F_OPTIMAL,
    clone_pair,
    fidelities_closed_form,
    local_clone_pair,
    optimal_symmetric_coeffs,
    random_coeffs,
    reprepare_branch_concurrence,
    tensor_from_coeffs,
)
from .states import concurrence_mixed, eof_from_concurrence, random_me_state, to_magic

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DIGITS = 9

COVARIANCE_TOL = 1e-10
PPT_GAP_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
SEPARABLE_TOL = 1e-9
FIDELITY_TOL = 1e-10

# isometry results must land in [target - BELOW, target + ABOVE]
SEARCH_BELOW = 1e-4
SEARCH_ABOVE = 1e-5


def fmt(x) -> str:
    return f"{float(x):.{DIGITS}f}"


def constants_rows():
    co = optimal_symmetric_coeffs()
    f_opt = fidelities_closed_form(co)[0]
    c_clone = 2 * f_opt - 1
    local = local_clone_pair(random_me_state(0))
    c_local = concurrence_mixed(local.rho_a)
    return [
        ("F_opt", f_opt),
        ("A_opt", co.a),
        ("C_opt", co.c),
        ("E_clone", eof_from_concurrence(c_clone)),
        ("C_clone", c_clone),
        ("F_local", local.f_a),
        ("C_local", c_local),
        ("E_local", eof_from_concurrence(c_local)),
        ("F_b_at_Ea_zero", optimize.find_fb_where_ea_vanishes()),
        ("E_in_critical", optimize.find_critical_input_entanglement()),
    ]


def cmd_constants(args, out):
    for name, value in constants_rows():
        print(f"{name},{fmt(np.real(value))}", file=out)
    return EXIT_OK


def cmd_fig1(args, out):
    print("F_b,F_a,E_a,E_b,E_sum", file=out)
    for pt in optimize.sweep_fig1(args.points):
        print(",".join(fmt(x) for x in (pt.f_b, pt.f_a, pt.e_a, pt.e_b, pt.e_sum)), file=out)
    return EXIT_OK


def cmd_fig2(args, out):
    print("E_in,E_out", file=out)
    for e_in, e_out in optimize.sweep_fig2(args.points):
        print(f"{fmt(e_in)},{fmt(e_out)}", file=out)
    return EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def _check_covariance(args):
    co = optimal_symmetric_coeffs()
    if args.inject_perturbation:
        t = channels.perturbed_tensor(co, size=0.1, single_entry=True)
    else:
        t = tensor_from_coeffs(co)
    dev = channels.covariance_check(t, trials=50, seed=args.seed)
    return dev < COVARIANCE_TOL, f"max deviation {dev:.3e} over 50 rotations"


def _cloning_choi(args):
    if args.choi:
        return channels.load_choi_csv(args.choi)
    return channels.choi_from_coeffs(optimal_symmetric_coeffs())


def _check_channel(args):
    s = _cloning_choi(args)
    lam = channels.choi_min_eigenvalue(s)
    gap = channels.trace_preservation_gap(s)
    return lam >= -PSD_TOL and gap <= TRACE_TOL, f"min eigenvalue {lam:.3e}, trace gap {gap:.3e}"


def _check_ppt(args):
    s = _cloning_choi(args)
    reports = [channels.ppt_check(channels.reduced_choi(s, w)) for w in ("a", "b")]
    lam = min(r.min_eigenvalue for r in reports)
    gap = max(r.self_transpose_gap for r in reports)
    ok = all(r.is_ppt for r in reports) and gap <= PPT_GAP_TOL
    return ok, f"min eigenvalue {lam:.3e}, self-transpose gap {gap:.3e}"


def _check_separability(args):
    worst = channels.separability_scan(optimal_symmetric_coeffs(), trials=args.trials, seed=args.seed)
    return worst < SEPARABLE_TOL, f"max clone concurrence {worst:.3e} over {args.trials} product inputs"


def _check_fidelity(args):
    worst = 0.0
    for child in np.random.SeedSequence(args.seed).spawn(args.trials):
        g1, g2 = child.spawn(2)
        co = random_coeffs(g1)
        pair = clone_pair(random_me_state(g2), co)
        fa, fb = fidelities_closed_form(co)
        worst = max(worst, abs(pair.f_a - fa), abs(pair.f_b - fb))
    return worst < FIDELITY_TOL, f"max |closed form - simulation| {worst:.3e} over {args.trials} triples"


def _check_no_cloning(args):
    n00 = to_magic(np.array([1, 0, 0, 0], dtype=complex))
    c = reprepare_branch_concurrence(n00)
    return abs(c - 1) < 1e-9, f"measure-and-reprepare clone concurrence {c:.9f} on |00>"


VERIFY_CHECKS = [
    ("covariance", _check_covariance),
    ("channel", _check_channel),
    ("ppt", _check_ppt),
    ("separability", _check_separability),
    ("fidelity", _check_fidelity),
    ("no-cloning", _check_no_cloning),
]


def cmd_verify(args, out):
    if args.export_choi:
        channels.save_choi_csv(channels.choi_from_coeffs(optimal_symmetric_coeffs()), args.export_choi)
    failed = []
    for name, check in VERIFY_CHECKS:
        ok, detail = check(args)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=out)
        if not ok:
            failed.append(name)
    if failed:
        print(f"verify FAILED: {', '.join(failed)}", file=out)
        return EXIT_FAIL
    print("verify passed", file=out)
    return EXIT_OK


# --------------------------------------------------------------------------
# optimize
# --------------------------------------------------------------------------

def parse_mode(mode: str):
    """``symmetric``, ``weighted:<p>``, ``isometry:fidelity`` or ``isometry:concurrence``."""
    if mode == "symmetric":
        return "symmetric", None
    if mode.startswith("weighted:"):
        try:
            p = float(mode.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad weight in mode {mode!r}") from None
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"weight {p} outside [0, 1]")
        return "weighted", p
    if mode in ("isometry:fidelity", "isometry:concurrence"):
        return "isometry", mode.split(":")[1]
    raise ValueError(f"unknown mode {mode!r}")


def cmd_optimize(args, out):
    kind, arg = parse_mode(args.mode)
    rows = [("mode", args.mode)]
    if kind == "symmetric":
        co = optimize.optimize_symmetric()
        value = fidelities_closed_form(co)[0]
        target = F_OPTIMAL
        rows += [("objective_value", fmt(value)), ("A", fmt(co.a)), ("C", fmt(co.c)),
                 ("restarts_used", 1), ("converged", True)]
        ok = abs(value - target) < 1e-8
    elif kind == "weighted":
        res = optimize.optimize_weighted(arg, seed=args.seed)
        target = optimize.weighted_optimum(arg)
        a, b, c = res.parameters
        rows += [("objective_value", fmt(res.objective_value)), ("F_a", fmt(res.extras["f_a"])),
                 ("F_b", fmt(res.extras["f_b"])), ("A", fmt(a)), ("B", fmt(b)), ("C", fmt(c)),
                 ("restarts_used", res.restarts_used), ("converged", res.converged)]
        ok = abs(res.objective_value - target) < 1e-7
    else:
        res = optimize.optimize_isometry(arg, restarts=args.restarts, seed=args.seed)
        target = F_OPTIMAL if arg == "fidelity" else optimize.C_OPTIMAL
        ex = res.extras
        rows += [("objective_value", fmt(res.objective_value)), ("restarts_used", res.restarts_used),
                 ("converged", res.converged), ("best_restart", ex["best_restart"]),
                 ("iterations", ex["iterations"]), ("gradient_norm", f"{ex['gradient_norm']:.3e}"),
                 ("avg_fidelity", fmt(ex["avg_fidelity"]))]
        if arg == "concurrence":
            rows += [("min_clone_concurrence", fmt(ex["min_clone_concurrence"])),
                     ("noise_mix", f"{ex['noise_mix']:.3e}"),
                     ("heldout_min", fmt(ex["heldout_min"]))]
        v = res.objective_value
        ok = target - SEARCH_BELOW <= v <= target + SEARCH_ABOVE
    rows += [("target", fmt(target)), ("verdict", "MATCH" if ok else "MISMATCH")]
    for name, value in rows:
        print(f"{name},{value}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "constants": cmd_constants,
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "verify": cmd_verify,
    "optimize": cmd_optimize,
}


def _positive(kind, minimum):
    def conv(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{kind} must be an integer, got {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{kind} must be at least {minimum}, got {value}")
        return value
    return conv


def build_parser():
    ap = argparse.ArgumentParser(prog="entclone", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--points", type=_positive("points", 2), default=200, help="sweep grid size")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--trials", type=_positive("trials", 1), default=1000, help="random trials for verify")
    ap.add_argument("--out", default=None, help="output file (default: stdout)")
    ap.add_argument("--mode", default="symmetric",
                    help="symmetric | weighted:<p> | isometry:fidelity | isometry:concurrence")
    ap.add_argument("--restarts", type=_positive("restarts", 1), default=20)
    # test hooks
    ap.add_argument("--inject-perturbation", action="store_true", help=argparse.SUPPRESS)
    ap.add_argument("--choi", default=None, help=argparse.SUPPRESS)
    ap.add_argument("--export-choi", default=None, help=argparse.SUPPRESS)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "optimize":
        try:
            parse_mode(args.mode)
        except ValueError as err:
            ap.error(str(err))
    try:
        with contextlib.ExitStack() as stack:
            out = sys.stdout
            if args.out:
                out = stack.enter_context(open(args.out, "w", encoding="utf-8", newline="\n"))
            return COMMANDS[args.command](args, out)
    except OSError as err:
        print(f"entclone: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
