"""Hamiltonian model: parameters, equations of motion, closed-form solutions.

Everything derives from the single normalized Hamiltonian

    H = p0^2/2 + sum p_j^2/2 + w0 q0^2 + sum w_j q_j^2
        - g q0^2 sum q_j^2 - q0^4/2 + C0^2/(2 q0^2) + sum C_j^2/(2 q_j^2),

so the three particular-solution families and all variational machinery
share one vector field.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from . import elliptic
from .odeint import Trajectory, integrate
from .series import FieldExtensionError

Q = Fraction


class InvalidParameterError(ValueError):
    pass


class NoSeparatrixError(Exception):
    pass


class DegenerateAmplitudeWarning(UserWarning):
    pass


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _sqrt_exact(x: Fraction) -> Fraction:
    r_num, r_den = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if r_num * r_num != x.numerator or r_den * r_den != x.denominator:
        raise FieldExtensionError(f"{x} has no rational square root")
    return Fraction(r_num, r_den)


@dataclass(frozen=True)
class RawParams:
    """Physical parameters before the rescaling that removes masses and g_BB."""

    m_B: Fraction
    m_F: Fraction
    g_BB: Fraction
    g_BF: Fraction
    omega0: Fraction
    omegas: Tuple[Fraction, ...]
    C0: Fraction
    Cs: Tuple[Fraction, ...]

    def __post_init__(self):
        if not (self.m_B > 0 and self.m_F > 0 and self.omega0 > 0
                and all(w > 0 for w in self.omegas)):
            raise InvalidParameterError("masses and frequencies must be positive")
        if len(self.omegas) != len(self.Cs):
            raise InvalidParameterError("omegas and Cs must have equal length")


@dataclass(frozen=True)
class ModelParams:
    """Normalized parameters of the Hamiltonian.

    C0 enters the dynamics only through its square; an explicit
    ``C0_sq_value`` supports exact squares whose root is irrational.
    """

    omega0: Fraction
    omegas: Tuple[Fraction, ...]
    C0: Fraction
    Cs: Tuple[Fraction, ...]
    g_bf: Fraction
    C0_sq_value: Fraction = None

    def __post_init__(self):
        if self.omega0 <= 0 or any(w <= 0 for w in self.omegas):
            raise InvalidParameterError("frequencies must be positive")
        if len(self.omegas) != len(self.Cs):
            raise InvalidParameterError("omegas and Cs must have equal length")
        if self.C0_sq_value is not None and self.C0_sq_value < 0:
            raise InvalidParameterError("C0^2 must be nonnegative")

    @property
    def n_f(self) -> int:
        return len(self.omegas)

    @property
    def C0_sq(self) -> Fraction:
        if self.C0_sq_value is not None:
            return self.C0_sq_value
        return self.C0 * self.C0

    @property
    def has_centrifugal_q0(self) -> bool:
        return self.C0_sq != 0


def make_params(omega0, omegas, C0, Cs, g_bf) -> ModelParams:
    return ModelParams(_fr(omega0), tuple(_fr(w) for w in omegas),
                       _fr(C0), tuple(_fr(c) for c in Cs), _fr(g_bf))


def make_params_c0sq(omega0, omegas, C0_sq, Cs, g_bf) -> ModelParams:
    """Parameters given C0^2 exactly; C0 takes the rational root if one exists."""
    c0sq = _fr(C0_sq)
    try:
        c0 = _sqrt_exact(c0sq)
    except FieldExtensionError:
        c0 = Q(0)
    return ModelParams(_fr(omega0), tuple(_fr(w) for w in omegas),
                       c0, tuple(_fr(c) for c in Cs), _fr(g_bf),
                       C0_sq_value=c0sq)


@dataclass(frozen=True)
class PhaseState:
    q0: complex
    p0: complex
    qs: Tuple[complex, ...]
    ps: Tuple[complex, ...]
    t: complex = 0.0


def normalize(raw: RawParams) -> ModelParams:
    """Scale away m_B, m_F, g_BB; needs g_BB > 0 and rational square scalings."""
    if raw.g_BB <= 0:
        raise InvalidParameterError("g_BB must be positive")
    alpha_sq = raw.m_F
    beta_sq = raw.m_B
    gamma_sq = 1 / (raw.m_B ** 2 * raw.g_BB)
    g_bf = raw.g_BF * alpha_sq * gamma_sq * raw.m_B
    omega0 = raw.omega0 * gamma_sq * raw.m_B
    omegas = tuple(w * gamma_sq * raw.m_F for w in raw.omegas)
    # C scalings act on squares; keeping signed C's exact requires the
    # combined factor to be a rational square
    c0_fac = _sqrt_exact(gamma_sq / beta_sq ** 2)
    cj_fac = _sqrt_exact(gamma_sq / alpha_sq ** 2)
    C0 = raw.C0 * c0_fac
    Cs = tuple(c * cj_fac for c in raw.Cs)
    return ModelParams(omega0, omegas, C0, Cs, g_bf)


def hamiltonian(p: ModelParams, s: PhaseState) -> complex:
    q0, p0 = complex(s.q0), complex(s.p0)
    if p.C0_sq != 0 and q0 == 0:
        raise ZeroDivisionError("q0 = 0 with C0 != 0")
    total = p0 * p0 / 2 + float(p.omega0) * q0 * q0 - q0 ** 4 / 2
    if p.C0_sq != 0:
        total += float(p.C0_sq) / (2 * q0 * q0)
    sum_qj_sq = 0j
    for j in range(p.n_f):
        qj, pj = complex(s.qs[j]), complex(s.ps[j])
        cj = p.Cs[j]
        if cj != 0 and qj == 0:
            raise ZeroDivisionError(f"q_{j + 1} = 0 with C_{j + 1} != 0")
        total += pj * pj / 2 + float(p.omegas[j]) * qj * qj
        if cj != 0:
            total += float(cj * cj) / (2 * qj * qj)
        sum_qj_sq += qj * qj
    total -= float(p.g_bf) * q0 * q0 * sum_qj_sq
    return total


def eom(p: ModelParams, s: PhaseState) -> PhaseState:
    """Canonical vector field; derivatives are returned in the state slots."""
    q0 = complex(s.q0)
    sum_qj_sq = sum(complex(q) ** 2 for q in s.qs)
    dq0 = complex(s.p0)
    dp0 = (-2 * float(p.omega0) * q0 + 2 * q0 ** 3
           + 2 * float(p.g_bf) * q0 * sum_qj_sq)
    if p.C0_sq != 0:
        dp0 += float(p.C0_sq) / q0 ** 3
    dqs, dps = [], []
    for j in range(p.n_f):
        qj = complex(s.qs[j])
        dqs.append(complex(s.ps[j]))
        dpj = (-2 * float(p.omegas[j]) * qj
               + 2 * float(p.g_bf) * q0 * q0 * qj)
        if p.Cs[j] != 0:
            dpj += float(p.Cs[j] ** 2) / qj ** 3
        dps.append(dpj)
    return PhaseState(dq0, dp0, tuple(dqs), tuple(dps), s.t)


def state_to_vector(s: PhaseState) -> np.ndarray:
    return np.array([s.q0, s.p0, *s.qs, *s.ps], dtype=complex)


def vector_to_state(v: np.ndarray, t: complex = 0.0) -> PhaseState:
    n_f = (len(v) - 2) // 2
    return PhaseState(complex(v[0]), complex(v[1]),
                      tuple(v[2:2 + n_f]), tuple(v[2 + n_f:]), t)


def solution_case1(p: ModelParams, h_j: Sequence, t0: complex, t: complex) -> PhaseState:
    """Invariant-plane solution for C0 = 0: q0 = p0 = 0 and

    q_j^2 = h_j/(2 w_j) + sqrt(C_j^2/(2 w_j) - h_j^2/(4 w_j^2)) sinh(2i sqrt(2 w_j)(t - t0)).
    """
    if p.C0_sq != 0:
        raise InvalidParameterError("case 1 requires C0 = 0")
    if any(c == 0 for c in p.Cs):
        raise InvalidParameterError("case 1 requires every C_j nonzero")
    qs, ps = [], []
    for j in range(p.n_f):
        wj = float(p.omegas[j])
        cj = float(p.Cs[j])
        hj = float(_fr(h_j[j]))
        amp_sq = cj * cj / (2 * wj) - hj * hj / (4 * wj * wj)
        if amp_sq == 0:
            warnings.warn(f"degenerate oscillation amplitude for j={j + 1}",
                          DegenerateAmplitudeWarning)
        amp = cmath.sqrt(amp_sq)
        mu = 2j * math.sqrt(2 * wj)
        qj_sq = hj / (2 * wj) + amp * cmath.sinh(mu * (t - t0))
        if qj_sq == 0:
            raise InvalidParameterError(
                f"q_{j + 1} vanishes at t = {t}; centrifugal term undefined")
        qj = cmath.sqrt(qj_sq)
        dqj_sq = amp * mu * cmath.cosh(mu * (t - t0))
        qs.append(qj)
        ps.append(dqj_sq / (2 * qj))
    return PhaseState(0.0, 0.0, tuple(qs), tuple(ps), t)


def solution_case2(p: ModelParams, e: "elliptic.EllipticData", t: complex) -> PhaseState:
    """Invariant-plane solution for C_j = 0: q0^2 = (2/3) w0 + wp(t), q_j = p_j = 0.

    The square-root branch is fixed by Re(q0 t) >= 0, which matches
    q0 ~ +1/t at the pole and stays continuous wherever q0^2 keeps a
    positive real part (evaluation near lattice points is the caller's
    responsibility).
    """
    if any(c != 0 for c in p.Cs):
        raise InvalidParameterError("case 2 requires every C_j = 0")
    wp, wp_prime = elliptic.wp_numeric_with_derivative(e, t)
    q0_sq = 2 * float(p.omega0) / 3 + wp
    q0 = cmath.sqrt(q0_sq)
    # branch continuity along the ray from the pole: near 0 require q0 ~ 1/t
    if (q0 * t).real < 0:
        q0 = -q0
    p0 = wp_prime / (2 * q0)
    return PhaseState(q0, p0, (0.0,) * p.n_f, (0.0,) * p.n_f, t)


def separatrix_energy(omega0, C0_sq) -> float:
    """Largest real root h* of the discriminant cubic

    h^3 - w0^2 h^2 - 9 C0^2 w0 h + 8 C0^2 w0^3 + (27/4) C0^4 = 0.
    """
    w0 = float(omega0)
    c0sq = float(C0_sq)
    coeffs = [1.0, -w0 ** 2, -9 * c0sq * w0, 8 * c0sq * w0 ** 3 + 6.75 * c0sq ** 2]
    roots = np.roots(coeffs)
    scale = max(1.0, max(abs(r) for r in roots))
    real_roots = [r.real for r in roots if abs(r.imag) < 1e-10 * scale]
    if not real_roots:
        raise NoSeparatrixError("discriminant cubic has no real root")
    h_star = max(real_roots)
    # one Newton polish in real arithmetic
    f = lambda x: ((x - w0 ** 2) * x - 9 * c0sq * w0) * x + coeffs[3]
    df = lambda x: (3 * x - 2 * w0 ** 2) * x - 9 * c0sq * w0
    if df(h_star) != 0:
        h_star -= f(h_star) / df(h_star)
    return h_star


def separatrix_case3(omega0, C0_sq, t: complex):
    """Separatrix of the one-degree q0 subsystem:

    q0^2 = (2/3) w0 + a + 3a / sinh^2(sqrt(3a) t),  a = sqrt(4 w0^2 - 3 h*)/3.

    Returns (q0, p0, a, h_star).
    """
    w0 = float(omega0)
    h_star = separatrix_energy(omega0, C0_sq)
    disc = 4 * w0 ** 2 - 3 * h_star
    if disc <= 0:
        raise NoSeparatrixError(f"4 w0^2 - 3 h* = {disc} <= 0")
    a = math.sqrt(disc) / 3
    root3a = math.sqrt(3 * a)
    sh = cmath.sinh(root3a * t)
    if sh == 0:
        raise NoSeparatrixError("separatrix pole at t = 0")
    q0_sq = 2 * w0 / 3 + a + 3 * a / (sh * sh)
    q0 = cmath.sqrt(q0_sq)
    if (q0 * t).real < 0:   # branch with q0 ~ +1/t near the pole
        q0 = -q0
    dq0_sq = -6 * a * root3a * cmath.cosh(root3a * t) / sh ** 3
    p0 = dq0_sq / (2 * q0)
    return q0, p0, a, h_star


DEFAULT_TOL = 1e-10


def integrate_orbit(p: ModelParams, s0: PhaseState, t_end: complex,
                    tol: float = DEFAULT_TOL):
    """Integrate the full system from s0.t to t_end along a straight segment.

    Returns (trajectory, max_energy_drift).
    """
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")

    def f(t, y):
        return state_to_vector(eom(p, vector_to_state(y, t)))

    y0 = state_to_vector(s0)
    h0 = hamiltonian(p, s0)
    _, traj = integrate(f, s0.t, y0, t_end, rtol=tol, atol=tol * 1e-2,
                        record=True)
    drift = 0.0
    for t, y in zip(traj.times, traj.states):
        ht = hamiltonian(p, vector_to_state(y, t))
        drift = max(drift, abs(ht - h0))
    return traj, drift


def case1_residual(p: ModelParams, h_j: Sequence, t0: complex,
                   t: complex) -> float:
    """Residual of the oscillator-plane solution in the full vector field.

    Derivatives of the closed form are taken analytically, so the residual
    measures only whether the formula solves the equations.
    """
    s = solution_case1(p, h_j, t0, t)
    rhs = eom(p, s)
    worst = 0.0
    for j in range(p.n_f):
        wj = float(p.omegas[j])
        cj = float(p.Cs[j])
        hj = float(_fr(h_j[j]))
        amp = cmath.sqrt(cj * cj / (2 * wj) - hj * hj / (4 * wj * wj))
        mu = 2j * math.sqrt(2 * wj)
        qj = s.qs[j]
        w_val = qj * qj
        w_dot = amp * mu * cmath.cosh(mu * (t - t0))
        w_ddot = amp * mu * mu * cmath.sinh(mu * (t - t0))
        qj_dot = w_dot / (2 * qj)
        qj_ddot = w_ddot / (2 * qj) - w_dot ** 2 / (4 * w_val * qj)
        worst = max(worst, abs(qj_dot - rhs.qs[j]), abs(qj_ddot - rhs.ps[j]))
    return worst


def case2_residual(p: ModelParams, e, t: complex) -> float:
    """Residual of the elliptic invariant-plane solution in the q0 equation."""
    wp, wp_prime = elliptic.wp_numeric_with_derivative(e, t)
    w0 = float(p.omega0)
    c0sq = float(e.C0_sq)
    q0_sq = 2 * w0 / 3 + wp
    q0 = cmath.sqrt(q0_sq)
    if (q0 * t).real < 0:
        q0 = -q0
    p0 = wp_prime / (2 * q0)
    g2, g3 = float(e.g2), float(e.g3)
    wp_second = 6 * wp * wp - g2 / 2
    wp_prime_sq = 4 * wp ** 3 - g2 * wp - g3
    q0_ddot = wp_second / (2 * q0) - wp_prime_sq / (4 * q0_sq * q0)
    rhs = -2 * w0 * q0 + 2 * q0 ** 3 + c0sq / q0 ** 3
    return abs(q0_ddot - rhs)


def separatrix_residual(omega0, C0_sq, t: complex) -> float:
    """Residual of the separatrix formula in the one-degree q0 equation."""
    w0 = float(omega0)
    c0sq = float(C0_sq)
    q0, p0, a, h_star = separatrix_case3(omega0, C0_sq, t)
    root3a = math.sqrt(3 * a)
    sh = cmath.sinh(root3a * t)
    ch = cmath.cosh(root3a * t)
    u = q0 * q0
    u_dot = -6 * a * root3a * ch / sh ** 3
    u_ddot = 18 * a * a * (3 * ch ** 2 - sh ** 2) / sh ** 4
    q0_dot = u_dot / (2 * q0)
    q0_ddot = u_ddot / (2 * q0) - u_dot ** 2 / (4 * u * q0)
    rhs = -2 * w0 * q0 + 2 * q0 ** 3 + c0sq / q0 ** 3
    return max(abs(q0_dot - p0), abs(q0_ddot - rhs))


def trajectory_csv_rows(p: ModelParams, traj: Trajectory):
    """Rows 't_re,t_im,q0_re,q0_im,p0_re,p0_im,...,energy_re,energy_im'."""
    for t, y in zip(traj.times, traj.states):
        s = vector_to_state(y, t)
        energy = hamiltonian(p, s)
        vals = [t.real, t.imag]
        for z in [s.q0, s.p0, *s.qs, *s.ps]:
            z = complex(z)
            vals.extend([z.real, z.imag])
        vals.extend([energy.real, energy.imag])
        yield ",".join(repr(v) for v in vals)
