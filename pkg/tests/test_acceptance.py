"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Targets marked (*) below are asserted exactly as stated even though the exact
pipeline, the independent epsilon-expansion oracle and the float contour
quadrature all agree on different values; those assertions fail and the
failure text shows the measured value next to the stated one.  Run with

    pytest tests/test_acceptance.py -v -s
"""
import math
import random
import time
from fractions import Fraction as Q

import numpy as np
import pytest

from bfmix import elliptic, heun, lame, melnikov, model, variational as V
from bfmix.model import PhaseState, make_params, make_params_c0sq
from conftest import random_rational, random_series
from helpers_eps import forcing_oracle


def gate(label, ok, detail):
    print(f"ACCEPTANCE {label}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{label}: {detail}"


def run_case2(n, w0, wj, c0sq, h, n_f=1, order=16, choice=None):
    g = Q(n) * (Q(n) + 1) / 2
    p = make_params_c0sq(w0, [wj] * n_f, c0sq, [0] * n_f, g)
    e = elliptic.invariants_from_energy(w0, c0sq, h)
    ch = choice or V.STANDARD_CHOICES[Q(n)]
    return V.higher_ve_residues(p, e, ch, order=order)


def test_criterion_01_index_one_residue():
    """(*) index-1 third-order residue, stated -2 g^2 N_f / 3 exactly."""
    t0 = time.time()
    res1 = run_case2(1, Q(1), Q(1), Q(1), Q(0), n_f=1, order=16)
    res2 = run_case2(1, Q(1), Q(1), Q(1), Q(0), n_f=2, order=16)
    elapsed = time.time() - t0
    got = (res1.residues[0], res2.residues[0])
    stated = (Q(-2, 3), Q(-4, 3))
    ok = got == stated and elapsed < 10.0
    gate("1", ok,
         f"stated {tuple(map(str, stated))}, computed {tuple(map(str, got))} "
         f"(exact pipeline, oracle-validated; sign differs), {elapsed:.2f}s")


def test_criterion_02_index_two_mu2_expansion():
    """(*) full mu2 pole expansion for a random rational draw, n = 2."""
    rng = random.Random(2)
    w0 = Q(rng.randint(1, 5), rng.randint(1, 3))
    wj = Q(rng.randint(1, 5), rng.randint(1, 3))
    c0sq = Q(rng.randint(1, 4))
    h = Q(rng.randint(0, 3), rng.randint(1, 2))
    e = elliptic.invariants_from_energy(w0, c0sq, h)
    p = make_params_c0sq(w0, [wj], c0sq, [0], 3)
    bj = 4 * w0 - 2 * wj
    ve1 = V.build_ve1(p, e, order=24)
    tb = V.frobenius(ve1.tangential)
    nb = V.frobenius(ve1.normal[0])
    _, kj = V.forcing_k2(ve1.qbar0, e.C0_sq, 3, tb.sol1, [nb.sol1])
    mu2 = nb.sol1 * kj[0]
    stated = {Q(-7): Q(12), Q(-5): -4 * bj,
              Q(-3): Q(4, 3) * bj ** 2 - Q(12, 5) * e.g2,
              Q(-1): bj * (e.g2 - bj ** 2 / 3)}
    got = {ex: mu2.coefficient(ex) for ex in stated}
    ok = got == stated
    mism = {str(ex): (str(stated[ex]), str(got[ex]))
            for ex in stated if got[ex] != stated[ex]}
    gate("2", ok,
         f"draw w0={w0} wj={wj} C0^2={c0sq} h={h}: "
         + ("all four coefficients match" if ok else
            f"mismatch (stated, computed) at {mism}; the three pole "
            f"coefficients match, the 1/t one is exactly 0"))


def test_criterion_03_index_two_zero_offset_residue():
    """(*) index-2, B_j = 0 third-order residue, stated -72 w0 / 25."""
    got, scanned = {}, {}
    for w0 in (Q(1), Q(2)):
        res = run_case2(2, w0, 2 * w0, Q(1), Q(0), order=16)
        got[w0] = res.residues[0]
        p = make_params_c0sq(w0, [2 * w0], Q(1), [0], 3)
        e = elliptic.invariants_from_energy(w0, Q(1), Q(0))
        for ch, r2 in V.scan_choices(p, e, order=16):
            w = r2.nonzero_witness()
            if w:
                scanned[w0] = w[2]
                break
    stated = {w0: Q(-72, 25) * w0 for w0 in got}
    ok = got == stated
    gate("3", ok,
         f"stated {[str(v) for v in stated.values()]}, stated-choice residue "
         f"{[str(v) for v in got.values()]}, nonzero witness via "
         f"singular-pick scan {[str(v) for v in scanned.values()]} "
         f"(= (8/5) w0 N_f)")


def test_criterion_04_half_integer_indices():
    """(*) n = 1/2: second order clean, third-order residue stated w0/4;
    n = 5/2 under its constraint triple: stated (7/12) w0."""
    res_half = run_case2(Q(1, 2), Q(1), Q(1, 4), Q(1), Q(0), order=16)
    no_log_ve2 = not res_half.ve2_has_log
    got_half = res_half.residues[0]
    res_5half = run_case2(Q(5, 2), Q(1), Q(55, 28), Q(72, 343), Q(0),
                          order=16)
    got_5half = res_5half.residues[0]
    ok = (no_log_ve2 and got_half == Q(1, 4) and got_5half == Q(7, 12))
    gate("4", ok,
         f"VE2 log-free: {no_log_ve2}; stated residues (1/4, 7/12), "
         f"computed ({got_half}, {got_5half}) "
         f"(all choices and both blocks give exactly 0 at third order)")


def test_criterion_05_p_coefficient_oracle():
    rng = random.Random(5)
    checked = 0
    identity_ok = True
    while checked < 20:
        w0 = abs(random_rational(rng, nonzero=True))
        wj = abs(random_rational(rng, nonzero=True))
        c0sq = abs(random_rational(rng))
        n = rng.choice([Q(1), Q(2), Q(1, 2), Q(3, 2), Q(5, 2), Q(7, 6)])
        g = n * (n + 1) / 2
        a = lame.p_coefficients(w0, wj, c0sq, g)
        b = lame.p_coefficients_from_invariants(w0, wj, c0sq, g)
        if a != b:
            gate("5", False, f"coefficient routes disagree at {(w0, wj, c0sq, n)}")
        if a.c2 * a.b1 - 3 * a.a1 * a.d2 != -32 * w0 * n * (n + 1):
            identity_ok = False
        checked += 1
    gate("5", identity_ok,
         "20 draws: closed-form and derived coefficients identical; "
         "c2 b1 - 3 a1 d2 = -32 w0 n(n+1) holds exactly")


def test_criterion_06_condition_tree():
    v_half = lame.theorem5_check(lame.p_coefficients(1, Q(1, 4), 1, Q(3, 8)),
                                 Q(1, 2))
    ok = (v_half.passed_case == "case2_1"
          and v_half.derived_constraints["omega_j/omega0"] == Q(1, 4))
    bad_half = lame.theorem5_check(lame.p_coefficients(1, 1, 1, Q(3, 8)),
                                   Q(1, 2))
    ok = ok and bad_half.passed_case == "none"

    w0, wj, c0sq = Q(28), Q(55), Q(72, 343) * Q(28) ** 3
    v_53 = lame.theorem5_check(lame.p_coefficients(w0, wj, c0sq, Q(35, 8)),
                               Q(5, 2))
    ok = ok and v_53.passed_case == "case2_3"
    ok = ok and lame.lame_offset(w0, wj, Q(5, 2)) == Q(32, 33) * wj
    ok = ok and 55 * w0 == 28 * wj and 343 * c0sq == 72 * w0 ** 3
    for bad in (lame.p_coefficients(w0, wj + 1, c0sq, Q(35, 8)),
                lame.p_coefficients(w0, wj, c0sq + 1, Q(35, 8))):
        ok = ok and lame.theorem5_check(bad, Q(5, 2)).passed_case == "none"

    # branches that can never pass on these coefficient families
    rng = random.Random(6)
    for _ in range(10):
        w0r = abs(random_rational(rng, nonzero=True))
        wjr = abs(random_rational(rng, nonzero=True))
        c = lame.p_coefficients(w0r, wjr, abs(random_rational(rng)), Q(15, 8))
        ok = ok and lame.theorem5_check(c, Q(3, 2)).passed_case == "none"
        for n in (Q(7, 2), Q(9, 2), Q(13, 2)):
            cm = lame.p_coefficients(w0r, wjr, Q(1), n * (n + 1) / 2)
            ok = ok and lame.theorem5_check(cm, n).passed_case == "none"
        cb = lame.p_coefficients(w0r, wjr, Q(1), Q(7, 6) * Q(13, 6) / 2)
        ok = ok and lame.theorem5_check(cb, Q(7, 6)).passed_case == "none"
    gate("6", ok, "m=1 survives only at w_j = w0/4; m=3 forces the stated "
                  "triple; m=2, m>3 and the fractional branch always fail")


def test_criterion_07_oscillator_plane_reduction():
    rng = random.Random(7)
    ok = True
    for _ in range(20):
        w0 = abs(random_rational(rng, nonzero=True))
        w = abs(random_rational(rng, nonzero=True))
        g = random_rational(rng)
        csum = random_rational(rng, nonzero=True)
        red = heun.reduce_case1(w0, w, g, csum)
        ok = ok and red.B == g * csum / (4 * w ** 3)
        ok = ok and ((red.B != 0) == (g != 0))
    defect = heun.transform_consistency(heun.reduce_case1(1, 2, 1, 3),
                                        np.linspace(0.1, 1.0, 10))
    ok = ok and defect < 1e-6
    gate("7", ok, f"B = g sum(C_j)/(4 w^3) exact, nonzero iff g != 0; "
                  f"transform defect {defect:.2e} < 1e-6")


def test_criterion_08_closed_form_residuals():
    rng = random.Random(8)
    p1 = make_params(1, [2, Q(1, 2)], 0, [1, Q(3, 4)], Q(2, 3))
    worst1 = max(model.case1_residual(
        p1, [0, 0], 0, complex(0.2 + 0.7 * rng.random(),
                               0.4 * rng.random() - 0.2))
        for _ in range(10))
    p2 = make_params(1, [1], 1, [0], 1)
    e = elliptic.invariants_from_energy(1, 1, 0)
    worst2 = max(model.case2_residual(
        p2, e, complex(0.25 + 0.6 * rng.random(), 0.3 * rng.random()))
        for _ in range(10))
    worst3 = max(model.separatrix_residual(
        1, Q(1, 100), complex(0.3 + 1.0 * rng.random(), 0.3 * rng.random()))
        for _ in range(10))
    s0 = PhaseState(0.4, 0.1, (0.5,), (-0.2,), 0.0)
    _, drift = model.integrate_orbit(make_params(1, [1], 0, [1], Q(1, 2)),
                                     s0, 5.0, tol=1e-10)
    ok = worst1 < 1e-9 and worst2 < 1e-9 and worst3 < 1e-9 and drift < 1e-8
    gate("8", ok, f"residuals: oscillator-plane {worst1:.1e}, elliptic-plane "
                  f"{worst2:.1e}, separatrix {worst3:.1e} (all < 1e-9); "
                  f"energy drift {drift:.1e} < 1e-8")


def test_criterion_09_splitting_function():
    s = melnikov.setup(1, 1, Q(1, 100), 1, 3.0)
    A, resid = melnikov.fitted_amplitude(s)
    ok = resid < 1e-8
    d1 = melnikov._contour_integral(s, 0.3, s.contour_radius,
                                    s.contour_points)
    d2 = melnikov._contour_integral(s, 0.3, s.contour_radius / 2,
                                    2 * s.contour_points)
    ok = ok and abs(d1 - d2) <= 1e-6 * abs(d1)
    period_half = math.pi / (2 * math.sqrt(2 * s.omega1))
    zeros = melnikov.find_simple_zeros(s, 0.05, 0.05 + 2.1 * period_half)
    ok = ok and bool(zeros)
    for z, dmag in zeros:
        ok = ok and abs(z - round(z / period_half) * period_half) < 1e-8
        ok = ok and dmag > 1e-3 * abs(A)
    quoted = 12 * math.pi * s.a * math.sqrt(2 * s.omega1) * s.amplitude
    gate("9", ok,
         f"sine-fit residual {resid:.1e}; zeros at multiples of "
         f"pi/(2 sqrt(2 w1)) and simple; radius-independent to 1e-6; "
         f"measured prefactor {A.imag:.6f}i vs quoted {quoted:.6f}i "
         f"(= 16 pi w1 amp vs 12 pi a sqrt(2 w1) amp; agreement not required)")


def test_criterion_10_forcing_oracle_and_ring_axioms():
    rng = random.Random(10)
    draws = 0
    while draws < 20:
        w0 = abs(random_rational(rng, nonzero=True))
        wjs = [abs(random_rational(rng, nonzero=True))]
        c0sq = abs(random_rational(rng))
        g = random_rational(rng, nonzero=True)
        try:
            e = elliptic.invariants_from_energy(w0, c0sq, Q(0))
        except elliptic.DegenerateInvariantsError:
            continue
        qbar = V.qbar0_series(e, 14)
        a = random_series(rng, lo=-2, hi=3, trunc=6)
        b = [random_series(rng, lo=-2, hi=3, trunc=6)]
        a2 = random_series(rng, lo=-2, hi=3, trunc=6)
        b2 = [random_series(rng, lo=-2, hi=3, trunc=6)]
        if a.is_zero or b[0].is_zero:
            continue
        k0_2, kj_2 = V.forcing_k2(qbar, c0sq, g, a, b)
        k0_3, kj_3 = V.forcing_k3(qbar, c0sq, g, a, b, a2, b2)
        o0_2, oj_2, o0_3, oj_3 = forcing_oracle(qbar, w0, wjs, c0sq, g,
                                                a, b, a2, b2)
        if not (k0_2.agrees_with(o0_2) and k0_3.agrees_with(o0_3)
                and kj_2[0].agrees_with(oj_2[0])
                and kj_3[0].agrees_with(oj_3[0])):
            gate("10", False, f"oracle mismatch at draw {draws}")
        draws += 1

    e = elliptic.invariants_from_energy(1, 1, 0)
    p = make_params(1, [1], 1, [0], 1)
    ve1 = V.build_ve1(p, e, order=20)
    for q in (ve1.tangential,) + ve1.normal:
        basis = V.frobenius(q)
        w = (basis.sol1 * basis.sol2.differentiate()
             - basis.sol1.differentiate() * basis.sol2)
        if not (w.coefficient(0) == 1
                and all(c == 0 for ex, c in w.terms() if ex != 0)):
            gate("10", False, "Wronskian not the constant series 1")

    rng2 = random.Random(11)
    for _ in range(1000):
        x = random_series(rng2, trunc=7)
        y = random_series(rng2, trunc=6)
        z = random_series(rng2, trunc=8)
        if not ((x + y) + z).agrees_with(x + (y + z)):
            gate("10", False, "associativity failed")
        if not (x * (y + z)).agrees_with(x * y + x * z):
            gate("10", False, "distributivity failed")
    gate("10", True, "20 oracle draws agree exactly; Wronskians identically "
                     "one; 1000 randomized ring-axiom cases pass")
