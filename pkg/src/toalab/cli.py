"""Command-line surface.

Subcommands:
  verify <group>   run the named verification group and emit a report
  flow             integrate one dual flow and print the trajectory summary
  fock build       construct a mode set, print it and the spectrum
  fock compare     quadratic-form vs occupation-form total arrival time
  fock stats       mean/variance of the total arrival time in simple states
  report           run the full default suite

Exit codes: 0 all requested checks pass, 1 at least one failed, 2 usage.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import checks, flow as flow_mod, fock, report as report_mod
from ._kernels import USING_NUMBA


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=checks.DEFAULT_SEED,
                   help="seed recorded in the report; fixes randomized sweeps")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--tolerance-profile", choices=("default", "strict"),
                   default="default")
    p.add_argument("--no-runtime", action="store_true",
                   help="omit runtime_ms from JSON output (reproducible bytes)")
    p.add_argument("--explain", action="store_true",
                   help="describe the checks instead of running them")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="toalab",
        description="numerical verification lab for the arrival-time formalism")
    sub = ap.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run one verification group")
    pv.add_argument("group", choices=sorted(checks.GROUPS + ["all"]))
    pv.add_argument("--m", type=float, default=None, help="override mass")
    pv.add_argument("--x", type=float, default=None, help="override arrival position")
    pv.add_argument("--tau", type=float, default=None, help="override proper time")
    pv.add_argument("--spin", choices=("up", "down", "both"), default="both")
    pv.add_argument("--p-min", type=float, default=None)
    pv.add_argument("--p-max", type=float, default=None)
    pv.add_argument("--grid", type=int, default=None, help="override grid size")
    pv.add_argument("--refinements", type=int, default=None,
                    help="number of grid refinements for order studies")
    _add_common(pv)

    pf = sub.add_parser("flow", help="integrate a dual flow")
    pf.add_argument("--time-function", choices=("arrival", "bilinear"),
                    default="arrival")
    pf.add_argument("--m", type=float, default=1.0)
    pf.add_argument("--q0", type=float, default=1.0)
    pf.add_argument("--k0", type=float, default=1.0)
    pf.add_argument("--eps-span", type=float, default=10.0)
    pf.add_argument("--step", type=float, default=1e-3)
    pf.add_argument("--fd-gradients", action="store_true")
    pf.add_argument("--samples", type=int, default=11,
                    help="number of trajectory records to print")
    _add_common(pf)

    pk = sub.add_parser("fock", help="event-mode Fock space tools")
    ksub = pk.add_subparsers(dest="fock_command", required=True)
    for name, helptext in (("build", "construct modes and print the spectrum"),
                           ("compare", "quadratic form vs occupation form"),
                           ("stats", "arrival-time statistics of simple states")):
        kp = ksub.add_parser(name, help=helptext)
        kp.add_argument("--lattice-k", default="1,2",
                        help="comma-separated conjugate-lattice indices (nonzero)")
        kp.add_argument("--grid", type=int, default=2, help="momentum lattice size")
        kp.add_argument("--spacing", type=float, default=0.4)
        kp.add_argument("--tau", type=float, default=0.6)
        kp.add_argument("--spins", choices=("up", "down", "both"), default="both")
        kp.add_argument("--species", choices=("electron", "positron", "both"),
                        default="both")
        if name == "stats":
            kp.add_argument("--state", default="vacuum",
                            help="'vacuum', 'full', or comma-separated mode indices")
        _add_common(kp)

    pr = sub.add_parser("report", help="run the full default suite")
    _add_common(pr)
    return ap


def _spins_arg(value: str):
    return {"up": (0.5,), "down": (-0.5,), "both": (0.5, -0.5)}[value]


def _species_arg(value: str):
    return {"electron": (fock.ELECTRON,), "positron": (fock.POSITRON,),
            "both": (fock.ELECTRON, fock.POSITRON)}[value]


def _emit(reports, args) -> int:
    if args.format == "json":
        print(report_mod.emit_json(reports, seed=args.seed,
                                   profile=args.tolerance_profile,
                                   include_runtime=not args.no_runtime))
    else:
        print(report_mod.emit_table(reports))
    return 0 if all(r.passed for r in reports) else 1


def _explain(group) -> int:
    for d in checks.REGISTRY.values():
        if group not in (None, "all", d.group):
            continue
        print(f"{d.check_id}")
        print(f"    group:  {d.group}")
        print(f"    checks: {d.description}")
        print(f"    anchor: {d.anchor}")
    return 0


def _cmd_verify(args) -> int:
    if args.explain:
        return _explain(args.group)
    overrides = {}
    if args.m is not None:
        overrides["m"] = args.m
    if args.x is not None:
        overrides["x"] = args.x
    if args.tau is not None:
        overrides["tau"] = args.tau
    if args.p_min is not None:
        overrides["p_min"] = args.p_min
    if args.p_max is not None:
        overrides["p_max"] = args.p_max
    if args.grid is not None:
        overrides["n"] = args.grid
    group = None if args.group == "all" else args.group
    specs = checks.specs_for(group, profile=args.tolerance_profile,
                             overrides=overrides)
    reports, _ = checks.run_suite(specs, seed=args.seed)
    return _emit(reports, args)


def _cmd_flow(args) -> int:
    if args.time_function == "arrival":
        t = flow_mod.arrival_time_function(args.m)
    else:
        t = flow_mod.bilinear_time_function()
    state = flow_mod.DualFlowState(0.0, np.array([args.q0]), np.array([args.k0]))
    try:
        result = flow_mod.integrate_flow(state, t, args.eps_span, args.step,
                                         use_fd_gradients=args.fd_gradients)
    except flow_mod.FlowDomainError as exc:
        print(f"flow aborted: {exc}", file=sys.stderr)
        return 1
    n = len(result.eps)
    stride = max(1, (n - 1) // max(1, args.samples - 1))
    print(f"{'eps':>12} {'q':>18} {'k':>18} {'T':>18}")
    for i in range(0, n, stride):
        print(f"{result.eps[i]:12.6f} {result.q[i, 0]:18.12f} "
              f"{result.k[i, 0]:18.12f} {result.values[i]:18.12f}")
    print(f"initial value : {result.initial_value:+.15g}")
    print(f"max drift     : {result.max_drift:.6e} "
          f"(relative {result.relative_drift:.6e})")
    print(f"kernel path   : {'numba' if USING_NUMBA else 'numpy fallback'}")
    return 0


def _make_modes(args) -> fock.ModeSet:
    lattice = [int(k) for k in str(args.lattice_k).split(",") if k.strip()]
    return fock.event_mode_set(
        lattice_k=lattice, n_grid=args.grid, spacing=args.spacing,
        tau=args.tau, spins=_spins_arg(args.spins),
        species=_species_arg(args.species))


def _cmd_fock(args) -> int:
    modes = _make_modes(args)
    if args.fock_command == "build":
        print(f"{len(modes.labels)} modes, Fock dimension {modes.dim}")
        for i, l in enumerate(modes.labels):
            print(f"  [{i:2d}] {l.species:14} x={l.x:10.6f} s={l.s:+.1f} "
                  f"T={l.arrival:.6f}")
        t35 = fock.number_form_arrival_time(modes)
        spectrum = fock.sorted_spectrum(t35)
        print("spectrum (sorted):")
        print("  " + ", ".join(f"{v:.6f}" for v in spectrum))
        return 0
    if args.fock_command == "compare":
        r = fock.quadratic_form_arrival_time(modes)
        print(f"sigma     : {r.sigma:+d}")
        print(f"residual  : {r.residual:.6e}")
        ok = r.residual <= 1e-10
        print(f"status    : {'PASS' if ok else 'FAIL'} (tolerance 1e-10)")
        return 0 if ok else 1
    if args.fock_command == "stats":
        t35 = fock.number_form_arrival_time(modes)
        if args.state == "vacuum":
            state = fock.vacuum_state(modes)
        elif args.state == "full":
            state = fock.basis_state(modes, range(modes.n_modes))
        else:
            occupied = [int(i) for i in args.state.split(",") if i.strip()]
            state = fock.basis_state(modes, occupied)
        mean, var = fock.event_statistics(state, t35)
        print(f"state    : {args.state}")
        print(f"mean     : {mean:+.12g}")
        print(f"variance : {var:.12g}")
        return 0
    raise AssertionError("unreachable")


def _cmd_report(args) -> int:
    if args.explain:
        return _explain(None)
    specs = checks.specs_for(None, profile=args.tolerance_profile)
    reports, _ = checks.run_suite(specs, seed=args.seed)
    return _emit(reports, args)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "verify": _cmd_verify,
        "flow": _cmd_flow,
        "fock": _cmd_fock,
        "report": _cmd_report,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
