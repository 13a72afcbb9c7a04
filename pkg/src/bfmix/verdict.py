"""Unified classification: dispatch a parameter set to the case analysis it
fits and return a machine-checkable verdict with an explicit witness.

Outcomes: NonIntegrable always carries a nonzero exact witness (rational
constant, failed condition residual, logarithm coefficient, or certified
simple zeros); Separable occurs exactly for g_bf = 0; analyses that exhaust
their implemented obstruction tests without finding one return
NecessaryConditionsSurvived, never a claim of integrability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import elliptic, heun, lame, melnikov, variational
from .model import ModelParams

Q = Fraction


class OutOfScopeError(Exception):
    """Parameter pattern the analysis does not cover (mixed centrifugal
    constants with several transverse modes: the variational system does not
    split)."""


@dataclass(frozen=True)
class Witness:
    kind: str          # heun_B | lame_monodromy | theorem5_failure |
                       # ve_log | ve_residue | melnikov | none
    data: dict = field(default_factory=dict)


@dataclass(frozen=True)
class IntegrabilityVerdict:
    case_id: str       # case1 | case2 | case3
    outcome: str       # NonIntegrable | Separable | NecessaryConditionsSurvived
                       # | Unsupported
    witness: Witness
    params: dict       # exact-string snapshot of the inputs
    details: dict = field(default_factory=dict)


@dataclass
class AnalyzeOptions:
    h: Fraction = Q(0)
    order: int = 30
    action_I: Optional[float] = None
    t0_min: float = 0.01
    t0_max: Optional[float] = None
    t0_samples: int = 200
    choice: Optional[variational.HigherVEChoice] = None
    scan: bool = True


def params_snapshot(p: ModelParams) -> dict:
    return {
        "omega0": str(p.omega0),
        "omegas": [str(w) for w in p.omegas],
        "C0": str(p.C0),
        "C0_sq": str(p.C0_sq),
        "Cs": [str(c) for c in p.Cs],
        "g_bf": str(p.g_bf),
        "n_f": p.n_f,
    }


def _case_of(p: ModelParams) -> str:
    c0 = p.C0_sq != 0
    cs = [c != 0 for c in p.Cs]
    if not c0 and all(cs) and p.n_f >= 1:
        return "case1"
    if c0 and not any(cs):
        return "case2"
    if c0 and p.n_f == 1 and cs[0]:
        return "case3"
    raise OutOfScopeError(
        "mixed case (C0 != 0 with several nonzero C_j): the variational "
        "system does not split into closed blocks; not analyzed")


def classify(p: ModelParams, options: Optional[AnalyzeOptions] = None
             ) -> IntegrabilityVerdict:
    opts = options or AnalyzeOptions()
    case = _case_of(p)
    if p.g_bf == 0:
        return IntegrabilityVerdict(
            case_id=case, outcome="Separable", witness=Witness("none"),
            params=params_snapshot(p),
            details={"reason": "g_bf = 0 decouples the system"})
    if case == "case1":
        return analyze_case1(p)
    if case == "case2":
        return analyze_case2(p, opts.h, order=opts.order,
                             choice=opts.choice, scan=opts.scan)
    return analyze_case3(p, opts)


def analyze_case1(p: ModelParams) -> IntegrabilityVerdict:
    red = heun.reduce_from_params(p)
    return _case1_verdict(red, params_snapshot(p))


def _case1_verdict(red: heun.HeunReduction, snapshot: dict) -> IntegrabilityVerdict:
    details = {
        "A1": str(red.A1), "B1": str(red.B1),
        "A": str(red.A), "B": str(red.B),
        "omega": str(red.omega), "c_sum": str(red.c_sum),
    }
    if red.B != 0:
        return IntegrabilityVerdict(
            case_id="case1", outcome="NonIntegrable",
            witness=Witness("heun_B", {"B": str(red.B)}),
            params=snapshot, details=details)
    return IntegrabilityVerdict(
        case_id="case1", outcome="Separable",
        witness=Witness("none"), params=snapshot,
        details=dict(details, reason="B = 0 forces g_bf = 0: Euler equation"))


def analyze_case1_direct(omega0, omega, g_bf, c_sum) -> IntegrabilityVerdict:
    """Case-1 verdict from the common frequency omega itself (w_j = omega^2/2)."""
    red = heun.reduce_case1(omega0, omega, g_bf, c_sum)
    snapshot = {"omega0": str(Q(omega0)), "omega": str(Q(omega)),
                "g_bf": str(Q(g_bf)), "c_sum": str(Q(c_sum))}
    if Q(g_bf) == 0:
        return IntegrabilityVerdict(
            case_id="case1", outcome="Separable", witness=Witness("none"),
            params=snapshot, details={"B": str(red.B)})
    return _case1_verdict(red, snapshot)


def analyze_case2(p: ModelParams, h, order: int = 30,
                  choice: Optional[variational.HigherVEChoice] = None,
                  scan: bool = True) -> IntegrabilityVerdict:
    snapshot = params_snapshot(p)
    snapshot["h"] = str(Q(h))
    if p.g_bf == 0:
        return IntegrabilityVerdict(
            case_id="case2", outcome="Separable", witness=Witness("none"),
            params=snapshot, details={"reason": "g_bf = 0"})
    e = elliptic.invariants_from_energy(p.omega0, p.C0_sq, Q(h))
    details = {"g2": str(e.g2), "g3": str(e.g3),
               "discriminant": str(e.discriminant)}

    n = lame.lame_index(p.g_bf)
    if n is None:
        return IntegrabilityVerdict(
            case_id="case2", outcome="NonIntegrable",
            witness=Witness("lame_monodromy",
                            {"reason": "2 g_bf = n(n+1) has no rational root; "
                                       "monodromy of the normal equation is "
                                       "non-abelian",
                             "two_g_bf": str(2 * Q(p.g_bf))}),
            params=snapshot, details=details)
    details["lame_index"] = str(n)

    data = lame.lame_data(p)
    details["B_j"] = [str(b) for b in data.B_j]
    checks = [lame.theorem5_check(c, n) for c in data.coeffs]
    details["theorem5"] = [
        {"passed_case": v.passed_case,
         "failed_conditions": [[cid, str(r)] for cid, r in v.failed_conditions],
         "conjecture_conditional": v.conjecture_conditional,
         "notes": v.notes}
        for v in checks]
    failing = [(j, v) for j, v in enumerate(checks) if not v.passed]
    if failing:
        j, v = failing[0]
        return IntegrabilityVerdict(
            case_id="case2", outcome="NonIntegrable",
            witness=Witness("theorem5_failure",
                            {"block": j + 1,
                             "failed_conditions": [[cid, str(r)] for cid, r
                                                   in v.failed_conditions]}),
            params=snapshot, details=details)

    if n.denominator == 1 and n > 2:
        return IntegrabilityVerdict(
            case_id="case2", outcome="Unsupported",
            witness=Witness("none"),
            params=snapshot,
            details=dict(details, reason=f"integer index n = {n} > 2: "
                         "higher-variational residue formulas not implemented"))

    ch = choice or variational.STANDARD_CHOICES.get(
        n, variational.HigherVEChoice())
    result = variational.higher_ve_residues(p, e, ch, order=order)
    verdict = _ve_verdict(result, ch, snapshot, details, n)
    if verdict is not None:
        return verdict
    if scan:
        for ch2, res2 in variational.scan_choices(p, e, order=order):
            verdict = _ve_verdict(res2, ch2, snapshot, details, n,
                                  scanned=True)
            if verdict is not None:
                return verdict
    return IntegrabilityVerdict(
        case_id="case2", outcome="NecessaryConditionsSurvived",
        witness=Witness("none"), params=snapshot,
        details=dict(details,
                     reason="no logarithmic obstruction through third order "
                            "for any basis solution choice"))


def _choice_record(ch: variational.HigherVEChoice) -> dict:
    return {"pick_xi0": ch.pick_xi0, "pick_xij": ch.pick_xij,
            "pick_xi0_2": ch.pick_xi0_2, "pick_xij_2": ch.pick_xij_2,
            "residue_row": ch.residue_row}


def _ve_verdict(result: variational.HigherVEResult,
                ch: variational.HigherVEChoice, snapshot: dict, details: dict,
                n: Fraction, scanned: bool = False
                ) -> Optional[IntegrabilityVerdict]:
    if result.ve1_log:
        return IntegrabilityVerdict(
            case_id="case2", outcome="NonIntegrable",
            witness=Witness("ve_log", {"order": 1,
                                       "reason": "logarithm forced in a "
                                                 "first-order basis solution"}),
            params=snapshot, details=details)
    if result.ve2_has_log:
        logs = [[str(a), str(b)] for a, b in result.ve2_log_coefficients]
        return IntegrabilityVerdict(
            case_id="case2", outcome="NonIntegrable",
            witness=Witness("ve_log", {"order": 2, "log_coefficients": logs,
                                       "choice": _choice_record(ch)}),
            params=snapshot, details=details)
    hit = result.nonzero_witness()
    if hit is not None:
        block, row, value = hit
        data = {"order": 3, "value": str(value), "block": block, "row": row,
                "choice": _choice_record(ch)}
        if scanned:
            data["found_by_scan"] = True
        det = dict(details)
        det["ve3_residues"] = {
            f"normal_{j + 1}": [str(b.ve3_residue_first),
                                str(b.ve3_residue_second)]
            for j, b in enumerate(result.normal_blocks)}
        if result.tangential_block:
            det["ve3_residues"]["tangential"] = [
                str(result.tangential_block.ve3_residue_first),
                str(result.tangential_block.ve3_residue_second)]
        return IntegrabilityVerdict(
            case_id="case2", outcome="NonIntegrable",
            witness=Witness("ve_residue", data),
            params=snapshot, details=det)
    return None


def analyze_case3(p: ModelParams, opts: AnalyzeOptions) -> IntegrabilityVerdict:
    snapshot = params_snapshot(p)
    if opts.action_I is None:
        raise ValueError("case 3 needs the frozen action (options.action_I)")
    s = melnikov.setup(p.omega0, p.omegas[0], p.C0_sq, p.Cs[0] ** 2,
                       opts.action_I)
    A, resid = melnikov.fitted_amplitude(s)
    t0_max = opts.t0_max
    if t0_max is None:
        t0_max = opts.t0_min + 1.05 * math.pi / math.sqrt(2 * s.omega1)
    zeros = melnikov.find_simple_zeros(s, opts.t0_min, t0_max,
                                       samples=opts.t0_samples)
    details = {
        "h_star": repr(s.h_star), "a": repr(s.a),
        "fitted_amplitude_im": repr(A.imag),
        "fitted_amplitude_re": repr(A.real),
        "fit_residual": repr(resid),
        "predicted_amplitude_im": repr(melnikov.predicted_amplitude(s).imag),
        "quoted_amplitude_im": repr(12 * math.pi * s.a
                                    * math.sqrt(2 * s.omega1) * s.amplitude),
        "contour_radius": repr(s.contour_radius),
    }
    if zeros:
        return IntegrabilityVerdict(
            case_id="case3", outcome="NonIntegrable",
            witness=Witness("melnikov",
                            {"fitted_amplitude": [A.real, A.imag],
                             "zeros": [[z, d] for z, d in zeros]}),
            params=snapshot, details=details)
    return IntegrabilityVerdict(
        case_id="case3", outcome="NecessaryConditionsSurvived",
        witness=Witness("none"), params=snapshot,
        details=dict(details, reason="no simple zero located (splitting "
                                     "function degenerate on this range)"))
