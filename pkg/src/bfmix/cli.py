"""Command-line front end: analysis runs, verification checks, series dumps.

Exit codes: 0 completed analysis (whatever the verdict), 2 usage errors,
3 internal verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import __version__, elliptic, heun, lame, melnikov, model, variational
from . import verdict as verdict_mod

Q = Fraction

SCHEMA_VERSION = 1


class VerificationFailure(Exception):
    """An internal cross-check (dual-route or tolerance gate) failed."""


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def parse_rational_list(text: str) -> List[Fraction]:
    return [parse_rational(part) for part in text.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bfmix",
        description="Integrability analysis of the coupled condensate "
                    "oscillator chain: obstruction witnesses from exact "
                    "variational-equation residues, Heun-form reduction and "
                    "separatrix-splitting integrals.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH",
                        help="write the JSON report here")
    common.add_argument("--csv", metavar="PATH", help="write CSV output here")
    sub = ap.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="classify a parameter set")
    an_sub = an.add_subparsers(dest="case", required=True)

    c1 = an_sub.add_parser("case1", parents=[common],
                           help="C0 = 0, all C_j nonzero, equal "
                                "frequencies w_j = omega^2/2")
    c1.add_argument("--omega0", type=parse_rational, required=True)
    c1.add_argument("--omega", type=parse_rational, required=True)
    c1.add_argument("--gbf", type=parse_rational, required=True)
    c1.add_argument("--csum", type=parse_rational, required=True)

    c2 = an_sub.add_parser("case2", parents=[common],
                           help="C0 != 0, all C_j = 0")
    c2.add_argument("--gbf", type=parse_rational, required=True)
    c2.add_argument("--omega0", type=parse_rational, required=True)
    c2.add_argument("--omegaj", type=parse_rational_list, required=True,
                    metavar="R[,R...]")
    c2.add_argument("--c0sq", type=parse_rational, required=True)
    c2.add_argument("--h", type=parse_rational, required=True)
    c2.add_argument("--order", type=int, default=30)
    c2.add_argument("--no-scan", action="store_true",
                    help="only use the standard solution choice")

    c3 = an_sub.add_parser("case3", parents=[common],
                           help="C0 != 0, C1 != 0, one transverse mode")
    c3.add_argument("--omega0", type=parse_rational, required=True)
    c3.add_argument("--omega1", type=parse_rational, required=True)
    c3.add_argument("--c0sq", type=parse_rational, required=True)
    c3.add_argument("--c1sq", type=parse_rational, required=True)
    c3.add_argument("--action", type=float, required=True)
    c3.add_argument("--t0-min", type=float, default=0.01)
    c3.add_argument("--t0-max", type=float, default=None)
    c3.add_argument("--t0-samples", type=int, default=200)

    ve = sub.add_parser("verify", parents=[common],
                        help="closed-form solution residual checks")
    ve.add_argument("--which", choices=["prop1", "prop2", "separatrix"],
                    required=True)
    ve.add_argument("--omega0", type=parse_rational, default=Q(1))
    ve.add_argument("--omegaj", type=parse_rational_list, default=[Q(2)])
    ve.add_argument("--cj", type=parse_rational_list, default=[Q(1)])
    ve.add_argument("--hj", type=parse_rational_list, default=[Q(0)])
    ve.add_argument("--c0sq", type=parse_rational, default=Q(1))
    ve.add_argument("--h", type=parse_rational, default=Q(0))
    ve.add_argument("--gbf", type=parse_rational, default=Q(1))
    ve.add_argument("--samples", type=int, default=10)
    ve.add_argument("--tol", type=float, default=1e-9)

    se = sub.add_parser("series", parents=[common],
                        help="dump exact local series as CSV")
    se.add_argument("--what", choices=["wp", "qbar", "ve1", "mu2", "mu3"],
                    required=True)
    se.add_argument("--gbf", type=parse_rational, default=Q(1))
    se.add_argument("--omega0", type=parse_rational, default=Q(1))
    se.add_argument("--omegaj", type=parse_rational_list, default=[Q(1)])
    se.add_argument("--c0sq", type=parse_rational, default=Q(1))
    se.add_argument("--h", type=parse_rational, default=Q(0))
    se.add_argument("--order", type=int, default=16)
    se.add_argument("--pick-xi0", choices=["first", "second"], default=None)
    se.add_argument("--pick-xij", choices=["first", "second"], default=None)

    sw = sub.add_parser("sweep", parents=[common],
                        help="tabulate the splitting function d(t0)")
    sw.add_argument("--omega0", type=parse_rational, required=True)
    sw.add_argument("--omega1", type=parse_rational, required=True)
    sw.add_argument("--c0sq", type=parse_rational, required=True)
    sw.add_argument("--c1sq", type=parse_rational, required=True)
    sw.add_argument("--action", type=float, required=True)
    sw.add_argument("--t0-min", type=float, default=0.0)
    sw.add_argument("--t0-max", type=float, default=3.2)
    sw.add_argument("--t0-samples", type=int, default=65)
    return ap


def _verdict_report(v: verdict_mod.IntegrabilityVerdict, command: str,
                    elapsed: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "bfmix", "version": __version__},
        "command": command,
        "verdict": {
            "case_id": v.case_id,
            "outcome": v.outcome,
            "witness": {"kind": v.witness.kind, "data": v.witness.data},
        },
        "params": v.params,
        "details": v.details,
        "timing_seconds": round(elapsed, 6),
    }


def verdict_from_report(report: dict) -> verdict_mod.IntegrabilityVerdict:
    """Rebuild the verdict record from a parsed JSON report."""
    v = report["verdict"]
    return verdict_mod.IntegrabilityVerdict(
        case_id=v["case_id"], outcome=v["outcome"],
        witness=verdict_mod.Witness(v["witness"]["kind"],
                                    v["witness"]["data"]),
        params=report["params"], details=report["details"])


def _emit(report: dict, json_path: Optional[str]):
    text = json.dumps(report, sort_keys=True, indent=2)
    if json_path:
        with open(json_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_csv(rows, csv_path: Optional[str]):
    if csv_path:
        with open(csv_path, "w") as fh:
            for row in rows:
                fh.write(row + "\n")
    else:
        for row in rows:
            print(row)


def _run_analyze(args) -> dict:
    t0 = time.time()
    if args.case == "case1":
        v = verdict_mod.analyze_case1_direct(args.omega0, args.omega,
                                             args.gbf, args.csum)
    elif args.case == "case2":
        p = model.make_params_c0sq(args.omega0, args.omegaj, args.c0sq,
                                   [Q(0)] * len(args.omegaj), args.gbf)
        v = verdict_mod.analyze_case2(p, args.h, order=args.order,
                                      scan=not args.no_scan)
    else:
        # C1 enters only through C1^2; run the splitting analysis directly
        s = melnikov.setup(args.omega0, args.omega1, args.c0sq, args.c1sq,
                           args.action)
        A, resid = melnikov.fitted_amplitude(s)
        import math as _math
        tmax = args.t0_max
        if tmax is None:
            tmax = args.t0_min + 1.05 * _math.pi / _math.sqrt(2 * s.omega1)
        zeros = melnikov.find_simple_zeros(s, args.t0_min, tmax,
                                           samples=args.t0_samples)
        snapshot = {"omega0": str(args.omega0), "omega1": str(args.omega1),
                    "C0_sq": str(args.c0sq), "C1_sq": str(args.c1sq),
                    "action_I": repr(args.action)}
        details = {
            "h_star": repr(s.h_star), "a": repr(s.a),
            "fitted_amplitude": [A.real, A.imag],
            "fit_residual": repr(resid),
            "predicted_amplitude_im": repr(melnikov.predicted_amplitude(s).imag),
            "quoted_amplitude_im": repr(12 * _math.pi * s.a
                                        * _math.sqrt(2 * s.omega1)
                                        * s.amplitude),
        }
        if zeros:
            v = verdict_mod.IntegrabilityVerdict(
                case_id="case3", outcome="NonIntegrable",
                witness=verdict_mod.Witness(
                    "melnikov", {"fitted_amplitude": [A.real, A.imag],
                                 "zeros": [[z, d] for z, d in zeros]}),
                params=snapshot, details=details)
        else:
            v = verdict_mod.IntegrabilityVerdict(
                case_id="case3", outcome="NecessaryConditionsSurvived",
                witness=verdict_mod.Witness("none"), params=snapshot,
                details=details)
    return _verdict_report(v, "analyze", time.time() - t0)


def _run_verify(args) -> dict:
    rng = np.random.default_rng(20240811)
    worst = 0.0
    pts = []
    if args.which == "prop1":
        p = model.make_params(args.omega0, args.omegaj,
                              0, args.cj, args.gbf)
        for _ in range(args.samples):
            t = complex(0.2 + 0.8 * rng.random(), 0.4 * rng.random() - 0.2)
            worst = max(worst, model.case1_residual(p, args.hj, 0.0, t))
            pts.append([t.real, t.imag])
    elif args.which == "prop2":
        p = model.make_params_c0sq(args.omega0, args.omegaj, args.c0sq,
                                   [Q(0)] * len(args.omegaj), args.gbf)
        e = elliptic.invariants_from_energy(args.omega0, args.c0sq, args.h)
        for _ in range(args.samples):
            t = complex(0.25 + 0.7 * rng.random(), 0.3 * rng.random())
            worst = max(worst, model.case2_residual(p, e, t))
            pts.append([t.real, t.imag])
    else:
        for _ in range(args.samples):
            t = complex(0.3 + 1.2 * rng.random(), 0.3 * rng.random())
            worst = max(worst, model.separatrix_residual(args.omega0,
                                                         args.c0sq, t))
            pts.append([t.real, t.imag])
    ok = worst < args.tol
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "bfmix", "version": __version__},
        "command": "verify",
        "which": args.which,
        "max_residual": repr(worst),
        "tolerance": repr(args.tol),
        "sample_points": pts,
        "pass": ok,
    }
    if not ok:
        raise VerificationFailure(
            f"{args.which}: residual {worst} above {args.tol}", report)
    return report


def _series_rows(args):
    e = elliptic.invariants_from_energy(args.omega0, args.c0sq, args.h)
    order = Q(args.order)
    if args.what == "wp":
        yield from elliptic.wp_laurent(e, order).to_csv_rows()
        return
    if args.what == "qbar":
        yield from variational.qbar0_series(e, order).to_csv_rows()
        return
    p = model.make_params_c0sq(args.omega0, args.omegaj, args.c0sq,
                               [Q(0)] * len(args.omegaj), args.gbf)
    if args.what == "ve1":
        ve1 = variational.build_ve1(p, e, order=order)
        yield "# tangential"
        yield from ve1.tangential.to_csv_rows()
        for j, nj in enumerate(ve1.normal):
            yield f"# normal_{j + 1}"
            yield from nj.to_csv_rows()
        return
    n = lame.lame_index(p.g_bf)
    choice = variational.STANDARD_CHOICES.get(
        n, variational.HigherVEChoice()) if n is not None \
        else variational.HigherVEChoice()
    if args.pick_xi0 or args.pick_xij:
        choice = variational.HigherVEChoice(
            args.pick_xi0 or choice.pick_xi0,
            args.pick_xij or choice.pick_xij,
            choice.pick_xi0_2, choice.pick_xij_2, choice.residue_row)
    ve1 = variational.build_ve1(p, e, order=order)
    tb = variational.frobenius(ve1.tangential)
    nbs = [variational.frobenius(nj) for nj in ve1.normal]
    xi0_1 = tb.sol1 if choice.pick_xi0 == "first" else tb.sol2
    xij_1 = [b.sol1 if choice.pick_xij == "first" else b.sol2 for b in nbs]
    k0_2, kj_2 = variational.forcing_k2(ve1.qbar0, e.C0_sq, p.g_bf,
                                        xi0_1, xij_1)
    if args.what == "mu2":
        v0 = variational.variation_of_constants(tb, k0_2)
        yield "# tangential row_first"
        yield from v0.mu_first.to_csv_rows()
        yield "# tangential row_second"
        yield from v0.mu_second.to_csv_rows()
        for j, (b, k) in enumerate(zip(nbs, kj_2)):
            v = variational.variation_of_constants(b, k)
            yield f"# normal_{j + 1} row_first"
            yield from v.mu_first.to_csv_rows()
            yield f"# normal_{j + 1} row_second"
            yield from v.mu_second.to_csv_rows()
        return
    # mu3
    voc0 = variational.variation_of_constants(tb, k0_2)
    vocj = [variational.variation_of_constants(b, k)
            for b, k in zip(nbs, kj_2)]
    if voc0.has_log or any(v.has_log for v in vocj):
        raise VerificationFailure("second order already carries a logarithm; "
                                  "third-order rows undefined")
    xi0_2 = voc0.particular + (tb.sol1 if choice.pick_xi0_2 == "first"
                               else tb.sol2)
    xij_2 = [v.particular + (b.sol1 if choice.pick_xij_2 == "first"
                             else b.sol2) for v, b in zip(vocj, nbs)]
    k0_3, kj_3 = variational.forcing_k3(ve1.qbar0, e.C0_sq, p.g_bf,
                                        xi0_1, xij_1, xi0_2, xij_2)
    yield "# tangential row_first"
    yield from (-(tb.sol2 * k0_3)).to_csv_rows()
    yield "# tangential row_second"
    yield from (tb.sol1 * k0_3).to_csv_rows()
    for j, (b, k) in enumerate(zip(nbs, kj_3)):
        yield f"# normal_{j + 1} row_first"
        yield from (-(b.sol2 * k)).to_csv_rows()
        yield f"# normal_{j + 1} row_second"
        yield from (b.sol1 * k).to_csv_rows()


def _run_sweep(args):
    s = melnikov.setup(args.omega0, args.omega1, args.c0sq, args.c1sq,
                       args.action)
    t0s = np.linspace(args.t0_min, args.t0_max, args.t0_samples)
    header = ["t0,d_num_re,d_num_im,d_closed_re,d_closed_im"]
    return header + list(melnikov.sweep_csv_rows(s, t0s))


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "analyze":
            report = _run_analyze(args)
            _emit(report, args.json)
            return 0
        if args.command == "verify":
            try:
                report = _run_verify(args)
            except VerificationFailure as vf:
                if len(vf.args) > 1:
                    _emit(vf.args[1], args.json)
                print(f"verification failed: {vf.args[0]}", file=sys.stderr)
                return 3
            _emit(report, args.json)
            return 0
        if args.command == "series":
            _write_csv(_series_rows(args), args.csv)
            return 0
        if args.command == "sweep":
            _write_csv(_run_sweep(args), args.csv)
            return 0
        ap.error(f"unknown command {args.command}")
        return 2
    except (melnikov.ContourUnreliableError, VerificationFailure) as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return 3
    except (verdict_mod.OutOfScopeError, ValueError,
            model.InvalidParameterError, elliptic.DegenerateInvariantsError,
            heun.UnequalFrequenciesError, heun.AssumptionViolatedError,
            melnikov.InvalidActionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
