"""Weierstrass elliptic data for the invariant-plane solution family.

The invariants come from the energy level of the one-degree subsystem:
``g2 = (16/3) w0^2 - 4 h`` and ``g3 = 4 C0^2 - (8/3) w0 h + (64/27) w0^3``;
the analysis needs a nondegenerate curve, so a vanishing discriminant is
rejected at construction time.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .odeint import integrate
from .series import EXACT, PuiseuxSeries

Q = Fraction


class DegenerateInvariantsError(Exception):
    """g2^3 - 27 g3^2 = 0: the elliptic parametrization collapses."""


class NearPoleError(Exception):
    """Numeric evaluation requested too close to a lattice point."""


@dataclass(frozen=True)
class EllipticData:
    g2: Fraction
    g3: Fraction
    discriminant: Fraction
    h: Fraction
    omega0: Fraction
    C0_sq: Fraction


def invariants_from_energy(omega0, C0_sq, h) -> EllipticData:
    omega0, C0_sq, h = Q(omega0), Q(C0_sq), Q(h)
    if omega0 <= 0:
        raise ValueError("omega0 must be positive")
    g2 = Q(16, 3) * omega0 ** 2 - 4 * h
    g3 = 4 * C0_sq - Q(8, 3) * omega0 * h + Q(64, 27) * omega0 ** 3
    disc = g2 ** 3 - 27 * g3 ** 2
    if disc == 0:
        raise DegenerateInvariantsError(
            f"discriminant vanishes for omega0={omega0}, C0_sq={C0_sq}, h={h}")
    return EllipticData(g2=g2, g3=g3, discriminant=disc, h=h,
                        omega0=omega0, C0_sq=C0_sq)


def wp_laurent(e: EllipticData, order) -> PuiseuxSeries:
    """Laurent expansion of wp at the origin, exact, truncated at t**order.

    1/t^2 + (g2/20) t^2 + (g3/28) t^4 + ..., even exponents only; the higher
    coefficients follow from matching wp'' = 6 wp^2 - g2/2 term by term.
    """
    order = Q(order)
    if order < 2:
        raise ValueError("order must be at least 2")
    a = {}
    m = 1
    while 2 * m < order:
        if m == 1:
            a[m] = e.g2 / 20
        elif m == 2:
            a[m] = e.g3 / 28
        else:
            s = sum(a[i] * a[m - 1 - i] for i in range(1, m - 1))
            a[m] = 6 * s / (4 * m * m - 2 * m - 12)
        m += 1
    terms = {Q(-2): Q(1)}
    for k, c in a.items():
        terms[Q(2 * k)] = c
    return PuiseuxSeries(terms, order, EXACT)


def wp_prime_laurent(e: EllipticData, order) -> PuiseuxSeries:
    return wp_laurent(e, Q(order) + 1).differentiate()


def _wp_ode(e: EllipticData):
    g2 = float(e.g2)

    def f(t, y):
        return np.array([y[1], 6.0 * y[0] ** 2 - 0.5 * g2], dtype=complex)
    return f

#: floor for the series-summation radius
DEFAULT_SEED_RADIUS = 0.05

_POLE_GUARD = 1e8
_SERIES_ORDER = 60


def _tail_ok(series: PuiseuxSeries, t: complex, value: complex) -> bool:
    """A-posteriori convergence test: the last stored terms must be
    negligible against the summed value."""
    terms = sorted(series.terms())
    tail = sum(abs(complex(c)) * abs(t) ** float(ex) for ex, c in terms[-3:])
    return tail <= 1e-14 * max(1.0, abs(value))


def wp_numeric_with_derivative(e: EllipticData, t: complex,
                               seed_radius: float = DEFAULT_SEED_RADIUS,
                               rtol: float = 1e-13) -> Tuple[complex, complex]:
    """(wp(t), wp'(t)): Laurent summation while the series tail certifies
    convergence, analytic continuation by the pole-free second-order ODE
    beyond that."""
    t = complex(t)
    if t == 0:
        raise NearPoleError("wp has a pole at t = 0")
    series = wp_laurent(e, _SERIES_ORDER)
    dseries = series.differentiate()
    val = series.evaluate(t)
    if _tail_ok(series, t, val):
        return val, dseries.evaluate(t)
    # walk the seed point inward along the ray until the tail certifies it
    r = abs(t)
    direction = t / r
    while r > seed_radius:
        r *= 0.7
        val = series.evaluate(r * direction)
        if _tail_ok(series, r * direction, val):
            break
    r = max(r, seed_radius)
    ts = r * direction
    y0 = np.array([series.evaluate(ts), dseries.evaluate(ts)], dtype=complex)
    y, _ = integrate(_wp_ode(e), ts, y0, t, rtol=rtol, atol=1e-16)
    if abs(y[0]) > _POLE_GUARD:
        raise NearPoleError(f"wp overflow near t = {t}")
    return complex(y[0]), complex(y[1])


def wp_numeric(e: EllipticData, t: complex,
               seed_radius: float = DEFAULT_SEED_RADIUS) -> complex:
    return wp_numeric_with_derivative(e, t, seed_radius)[0]
