"""Variational equations along the elliptic invariant-plane solution.

Builds the first variational equation (one tangential block plus one Lame
block per transverse mode), solves each block by Frobenius series with unit
Wronskian, assembles the order-2 and order-3 forcings, runs variation of
constants, and extracts the logarithm-detecting residues exactly.

Sign conventions.  The Lame offset is ``B_j = (2/3) w0 n(n+1) - 2 w_j`` and
blocks read ``xi'' = [n(n+1) wp + B_j] xi``; the basis is ``sol1`` monic at
the singular exponent -n and ``sol2 = t^(n+1)/(2n+1) (1 + ...)``, which makes
the Wronskian sol1*sol2' - sol1'*sol2 exactly one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import elliptic
from .series import (EXACT, INF, FieldExtensionError, LogSeries,
                     PuiseuxSeries)

Q = Fraction


class IrregularSingularityError(Exception):
    """Coefficient series has a pole of order > 2 at t = 0."""


@dataclass(frozen=True)
class VE1Coefficients:
    """Coefficient functions of the first variational equation.

    tangential: T(t) = -2 w0 + 6 qbar0^2 - 3 C0^2 / qbar0^4 (leading 6/t^2)
    normal[j]:  N_j(t) = -2 w_j + 2 g qbar0^2 (leading n(n+1)/t^2 when
                2 g = n(n+1))
    """

    tangential: PuiseuxSeries
    normal: Tuple[PuiseuxSeries, ...]
    qbar0: PuiseuxSeries


def qbar0_series(e: "elliptic.EllipticData", order) -> PuiseuxSeries:
    """Local branch q0(t) = 1/t + (w0/3) t + ... of sqrt((2/3) w0 + wp)."""
    wp = elliptic.wp_laurent(e, Q(order))
    qsq = wp + PuiseuxSeries.constant(Q(2, 3) * e.omega0)
    return qsq.sqrt()


def build_ve1(p, e: "elliptic.EllipticData", order=20) -> VE1Coefficients:
    """Exact VE1 coefficient series at truncation exponent ``order``."""
    order = Q(order)
    wp = elliptic.wp_laurent(e, order + 4)
    qsq = wp + PuiseuxSeries.constant(Q(2, 3) * e.omega0)
    qbar = qsq.sqrt()
    tang = (PuiseuxSeries.constant(-2 * Q(p.omega0))
            + qsq.scale(6)
            - (qsq * qsq).invert().scale(3 * Q(e.C0_sq)))
    g = Q(p.g_bf)
    normal = tuple(
        PuiseuxSeries.constant(-2 * Q(wj)) + qsq.scale(2 * g)
        for wj in p.omegas)
    return VE1Coefficients(tangential=tang.truncate(order),
                           normal=tuple(nj.truncate(order) for nj in normal),
                           qbar0=qbar.truncate(order))


@dataclass(frozen=True)
class FrobeniusBasis:
    """Two Frobenius solutions of xi'' = q(t) xi with unit Wronskian.

    sol1 is monic at the smaller exponent rho2, sol2 carries leading
    coefficient 1/(rho1 - rho2) at rho1.  When the recursion for sol1 hits
    rho1 inconsistently the true solution needs a log t term; sol1 then holds
    the log-free part (resonant coefficient zero) and log_in_basis is set.
    """

    sol1: PuiseuxSeries
    sol2: PuiseuxSeries
    exponents: Tuple[Fraction, Fraction]   # (rho1, rho2), rho1 > rho2
    log_in_basis: bool
    wronskian_normalized: bool


def _indicial_roots(c2: Fraction) -> Tuple[Fraction, Fraction]:
    disc = 1 + 4 * c2
    if disc < 0:
        raise FieldExtensionError(f"complex indicial exponents (1+4c = {disc})")
    import math
    rn, rd = math.isqrt(disc.numerator), math.isqrt(disc.denominator)
    if rn * rn != disc.numerator or rd * rd != disc.denominator:
        raise FieldExtensionError(f"irrational indicial exponents (1+4c = {disc})")
    root = Fraction(rn, rd)
    return (1 + root) / 2, (1 - root) / 2


def _frobenius_one(q: PuiseuxSeries, rho: Fraction, other: Fraction,
                   step: Fraction, max_exp) -> Tuple[PuiseuxSeries, bool]:
    """Monic series solution at exponent rho; flags a forced logarithm."""
    c2 = q.coefficient(Q(-2))
    a: Dict[int, Fraction] = {0: Q(1) if q.coeff_mode == EXACT else 1.0}
    log_needed = False
    k = 1
    exps = dict(q.terms())
    if q.truncation_order == INF and max_exp == INF:
        max_exp = rho + 40 * step
    while True:
        e = rho + k * step
        if e - 2 >= q.truncation_order or e > max_exp:
            break
        rhs = 0
        for m, am in a.items():
            c = exps.get((k - m) * step - 2)
            if c is not None and m < k:
                rhs += am * c
        if e == other:
            # resonance: coefficient multiplies zero; solvable only if rhs = 0
            vanishes = (rhs == 0) if q.coeff_mode == EXACT else abs(rhs) < 1e-9
            if not vanishes:
                log_needed = True
            a[k] = Q(0) if q.coeff_mode == EXACT else 0.0
        else:
            bracket = e * (e - 1) - c2
            coeff = rhs / bracket if q.coeff_mode == EXACT \
                else rhs / complex(bracket)
            a[k] = coeff
        k += 1
    terms = {rho + kk * step: c for kk, c in a.items()}
    return PuiseuxSeries(terms, rho + k * step, q.coeff_mode), log_needed


def frobenius(q: PuiseuxSeries, order=INF) -> FrobeniusBasis:
    """Solve xi'' = q(t) xi locally at the regular singular point t = 0."""
    if q.base_exponent < -2:
        raise IrregularSingularityError(
            f"pole of order {-q.base_exponent} > 2 at t = 0")
    if q.coeff_mode == EXACT:
        c2 = q.coefficient(Q(-2))
    else:
        c2raw = q.coefficient(Q(-2))
        c2 = Fraction(c2raw.real).limit_denominator(10 ** 9)
    rho1, rho2 = _indicial_roots(c2)
    step = Q(1, q.ramification)
    # exponent difference must sit on the step lattice or resonance is moot
    sol1, log1 = _frobenius_one(q, rho2, rho1, step, order)
    sol2_monic, log2 = _frobenius_one(q, rho1, rho2, step, order)
    sol2 = sol2_monic.scale(Q(1) / (rho1 - rho2))
    w = sol1 * sol2.differentiate() - sol1.differentiate() * sol2
    if q.coeff_mode == EXACT:
        normalized = (w.coefficient(0) == 1
                      and all(c == 0 for e, c in w.terms() if e != 0))
    else:
        normalized = abs(w.coefficient(0) - 1) < 1e-9
    return FrobeniusBasis(sol1=sol1, sol2=sol2, exponents=(rho1, rho2),
                          log_in_basis=log1 or log2,
                          wronskian_normalized=normalized)


@dataclass(frozen=True)
class VOCResult:
    """Variation-of-constants data for one second-order block.

    mu_first = -sol2 * K and mu_second = sol1 * K are the rows of
    X^{-1} (0, K)^T; their 1/t coefficients decide whether the block solution
    acquires log t.  ``particular`` is sol1*int(mu_first) + sol2*int(mu_second)
    with zero integration constants (log-free part).
    """

    mu_first: PuiseuxSeries
    mu_second: PuiseuxSeries
    c_first: LogSeries
    c_second: LogSeries
    particular: PuiseuxSeries

    @property
    def log_coefficients(self):
        return (self.c_first.log_coefficient, self.c_second.log_coefficient)

    @property
    def has_log(self) -> bool:
        return any(c != 0 for c in self.log_coefficients)

    def residue(self, row: str = "first"):
        mu = self.mu_first if row == "first" else self.mu_second
        return mu.residue()


def variation_of_constants(basis: FrobeniusBasis,
                           forcing: PuiseuxSeries) -> VOCResult:
    if not basis.wronskian_normalized:
        raise ValueError("basis must be Wronskian-normalized")
    mu1 = -(basis.sol2 * forcing)
    mu2 = basis.sol1 * forcing
    c1 = mu1.antiderivative()
    c2 = mu2.antiderivative()
    particular = basis.sol1 * c1.regular + basis.sol2 * c2.regular
    return VOCResult(mu_first=mu1, mu_second=mu2, c_first=c1, c_second=c2,
                     particular=particular)


# ---------------------------------------------------------------------------
# forcing terms of the second and third variational equations
# ---------------------------------------------------------------------------

def forcing_k2(qbar: PuiseuxSeries, C0_sq, g, xi0_1: PuiseuxSeries,
               xij_1: Sequence[PuiseuxSeries]):
    """(K0^(2), [K_j^(2)]) for given first-order solution choices."""
    g = Q(g)
    C0_sq = Q(C0_sq)
    sum_sq = None
    for xj in xij_1:
        s = xj * xj
        sum_sq = s if sum_sq is None else sum_sq + s
    qb5inv = qbar.pow(5).invert()
    k0 = (qbar * sum_sq).scale(2 * g) + (qbar * (xi0_1 * xi0_1)).scale(6) \
        + (qb5inv * (xi0_1 * xi0_1)).scale(6 * C0_sq)
    kj = [(qbar * xi0_1 * xj).scale(4 * g) for xj in xij_1]
    return k0, kj


def forcing_k3(qbar: PuiseuxSeries, C0_sq, g,
               xi0_1: PuiseuxSeries, xij_1: Sequence[PuiseuxSeries],
               xi0_2: PuiseuxSeries, xij_2: Sequence[PuiseuxSeries]):
    """(K0^(3), [K_j^(3)]) from first- and second-order solution choices."""
    g = Q(g)
    C0_sq = Q(C0_sq)
    cross = None
    sum_sq = None
    for xj1, xj2 in zip(xij_1, xij_2):
        c = xj1 * xj2
        s = xj1 * xj1
        cross = c if cross is None else cross + c
        sum_sq = s if sum_sq is None else sum_sq + s
    k0 = (qbar * cross).scale(4 * g) + (xi0_1 * sum_sq).scale(2 * g) \
        + (xi0_1 * xi0_1 * xi0_1).scale(2) + (qbar * xi0_1 * xi0_2).scale(12)
    if C0_sq != 0:
        qb6inv = qbar.pow(6).invert()
        k0 = k0 - (qb6inv * ((xi0_1 * xi0_1 * xi0_1).scale(10)
                             - (qbar * xi0_1 * xi0_2).scale(12))).scale(C0_sq)
    kj = [((xi0_1 * xi0_1) * xj1).scale(2 * g)
          + (qbar * (xi0_1 * xj2 + xi0_2 * xj1)).scale(4 * g)
          for xj1, xj2 in zip(xij_1, xij_2)]
    return k0, kj


# ---------------------------------------------------------------------------
# higher-VE pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HigherVEChoice:
    """Solution picks feeding the order-2 and order-3 forcings.

    'first' selects the singular basis solution, 'second' the regular one.
    Order-2 particulars are the zero-constant variation-of-constants solution
    plus the homogeneous solution of the same index.
    """

    pick_xi0: str = "second"
    pick_xij: str = "first"
    pick_xi0_2: str = "second"
    pick_xij_2: str = "first"
    residue_row: str = "first"

    def __post_init__(self):
        for v in (self.pick_xi0, self.pick_xij, self.pick_xi0_2, self.pick_xij_2):
            if v not in ("first", "second"):
                raise ValueError(f"pick must be 'first' or 'second', got {v!r}")


#: choices that the residue computations for each Lame index are quoted under
STANDARD_CHOICES: Dict[Fraction, HigherVEChoice] = {
    Q(1): HigherVEChoice("second", "first", "second", "first", "first"),
    Q(2): HigherVEChoice("first", "second", "second", "second", "second"),
    Q(1, 2): HigherVEChoice("first", "second", "second", "first", "first"),
    Q(5, 2): HigherVEChoice("first", "first", "second", "second", "first"),
}


@dataclass
class BlockReport:
    """Per-block VE2/VE3 residue data (exact coefficients)."""

    ve2_log_coefficients: Tuple
    ve3_residue_first: object
    ve3_residue_second: object


@dataclass
class HigherVEResult:
    """Everything the order-2/order-3 analysis produced."""

    choice: HigherVEChoice
    tangential_basis: FrobeniusBasis
    normal_bases: Tuple[FrobeniusBasis, ...]
    ve1_log: bool
    ve2_has_log: bool
    ve2_log_coefficients: Tuple
    normal_blocks: Tuple[BlockReport, ...]
    tangential_block: Optional[BlockReport]
    residues: Tuple                       # per-j residue of the requested row

    @property
    def any_nonzero_residue(self) -> bool:
        for b in self.normal_blocks + ((self.tangential_block,)
                                       if self.tangential_block else ()):
            if b.ve3_residue_first != 0 or b.ve3_residue_second != 0:
                return True
        return False

    def nonzero_witness(self):
        """(block, row, residue) of the first nonzero VE3 residue, or None."""
        for j, b in enumerate(self.normal_blocks):
            for row, r in (("first", b.ve3_residue_first),
                           ("second", b.ve3_residue_second)):
                if r != 0:
                    return (f"normal_{j + 1}", row, r)
        if self.tangential_block:
            for row, r in (("first", self.tangential_block.ve3_residue_first),
                           ("second", self.tangential_block.ve3_residue_second)):
                if r != 0:
                    return ("tangential", row, r)
        return None


def _pick(basis: FrobeniusBasis, which: str) -> PuiseuxSeries:
    return basis.sol1 if which == "first" else basis.sol2


def higher_ve_residues(p, e, choice: HigherVEChoice, order=30) -> HigherVEResult:
    """Run the VE2 -> VE3 chain with the given picks and report residues."""
    ve1 = build_ve1(p, e, order=Q(order))
    tb = frobenius(ve1.tangential)
    nbs = tuple(frobenius(nj) for nj in ve1.normal)
    ve1_log = tb.log_in_basis or any(b.log_in_basis for b in nbs)
    if ve1_log:
        return HigherVEResult(choice, tb, nbs, True, False, (), (), None, ())

    qbar = ve1.qbar0
    g = Q(p.g_bf)
    xi0_1 = _pick(tb, choice.pick_xi0)
    xij_1 = [_pick(b, choice.pick_xij) for b in nbs]

    k0_2, kj_2 = forcing_k2(qbar, e.C0_sq, g, xi0_1, xij_1)
    voc0 = variation_of_constants(tb, k0_2)
    vocj = [variation_of_constants(b, k) for b, k in zip(nbs, kj_2)]
    ve2_logs = (voc0.log_coefficients,) + tuple(v.log_coefficients for v in vocj)
    ve2_has_log = voc0.has_log or any(v.has_log for v in vocj)
    if ve2_has_log:
        return HigherVEResult(choice, tb, nbs, False, True, ve2_logs, (), None, ())

    xi0_2 = voc0.particular + _pick(tb, choice.pick_xi0_2)
    xij_2 = [v.particular + _pick(b, choice.pick_xij_2)
             for v, b in zip(vocj, nbs)]

    k0_3, kj_3 = forcing_k3(qbar, e.C0_sq, g, xi0_1, xij_1, xi0_2, xij_2)
    blocks = []
    residues = []
    for b, k in zip(nbs, kj_3):
        mu1 = -(b.sol2 * k)
        mu2 = b.sol1 * k
        rep = BlockReport(ve2_log_coefficients=ve2_logs,
                          ve3_residue_first=mu1.residue(),
                          ve3_residue_second=mu2.residue())
        blocks.append(rep)
        residues.append(rep.ve3_residue_first if choice.residue_row == "first"
                        else rep.ve3_residue_second)
    mu01 = -(tb.sol2 * k0_3)
    mu02 = tb.sol1 * k0_3
    tblock = BlockReport(ve2_log_coefficients=ve2_logs,
                         ve3_residue_first=mu01.residue(),
                         ve3_residue_second=mu02.residue())
    return HigherVEResult(choice, tb, nbs, False, False, ve2_logs,
                          tuple(blocks), tblock, tuple(residues))


def scan_choices(p, e, order=30) -> List[Tuple[HigherVEChoice, HigherVEResult]]:
    """Try the four pure first-order pick combinations, collecting results."""
    out = []
    for p0 in ("first", "second"):
        for pj in ("first", "second"):
            ch = HigherVEChoice(p0, pj, "second", "first", "first")
            out.append((ch, higher_ve_residues(p, e, ch, order=order)))
    return out
