"""Truncated Laurent/Puiseux series with exact rational or complex coefficients.

A series is a finite set of terms ``c * t**e`` with exponents on a lattice
``(1/d) * ZZ`` plus a truncation order: exponents at or above the truncation
are unknown.  All arithmetic tracks how far the result can be trusted, so a
residue read off a series is either exact or raises.

Exact mode keeps every coefficient a :class:`fractions.Fraction`; float mode
uses ``complex`` and exists for numeric cross-checks of the exact pipeline.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Tuple, Union

Q = Fraction
Exponent = Fraction
CoeffValue = Union[Fraction, complex]

EXACT = "exact-rational"
FLOAT = "complex-float"

#: truncation sentinel for series known to all orders (polynomials in t, 1/t)
INF = math.inf

#: relative order used when expanding an exact (untruncated) unit, e.g. 1/(1+t)
DEFAULT_REL_ORDER = Fraction(16)


class SeriesError(Exception):
    """Base class for series arithmetic failures."""


class ModeMismatchError(SeriesError):
    """Operands carry different coefficient modes."""


class ZeroDivisionSeriesError(SeriesError):
    """Inversion of a series that is zero to its truncation order."""


class FieldExtensionError(SeriesError):
    """Exact sqrt would leave the rationals (non-square leading coefficient)."""


class InsufficientOrderError(SeriesError):
    """A requested coefficient lies at or beyond the truncation order."""


def _exp_add(a, b):
    if a == INF or b == INF:
        return INF
    return a + b


def _exp_min(a, b):
    if a == INF:
        return b
    if b == INF:
        return a
    return min(a, b)


def _as_exponent(e) -> Exponent:
    return e if isinstance(e, Fraction) else Fraction(e)


def _sqrt_fraction(x: Fraction) -> Fraction:
    if x < 0:
        raise FieldExtensionError(f"sqrt of negative rational {x}")
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn != x.numerator or rd * rd != x.denominator:
        raise FieldExtensionError(f"{x} is not a perfect square in Q")
    return Fraction(rn, rd)


class PuiseuxSeries:
    """Immutable truncated Puiseux series.

    ``terms`` maps exponents to nonzero coefficients; ``trunc`` is the first
    unknown exponent (may be :data:`INF` for exact polynomials).
    """

    __slots__ = ("_terms", "_trunc", "_mode")

    def __init__(self, terms: Dict[Exponent, CoeffValue], trunc=INF, mode: str = EXACT):
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown coeff mode {mode!r}")
        if trunc != INF:
            trunc = _as_exponent(trunc)
        clean: Dict[Exponent, CoeffValue] = {}
        for e, c in terms.items():
            e = _as_exponent(e)
            if mode == EXACT and not isinstance(c, Fraction):
                c = Fraction(c)
            if mode == FLOAT:
                c = complex(c)
            if c != 0 and (trunc == INF or e < trunc):
                clean[e] = clean.get(e, 0) + c
        self._terms = {e: c for e, c in clean.items() if c != 0}
        self._trunc = trunc
        self._mode = mode

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, trunc=INF, mode: str = EXACT) -> "PuiseuxSeries":
        return cls({}, trunc, mode)

    @classmethod
    def constant(cls, c, mode: str = EXACT) -> "PuiseuxSeries":
        return cls({Q(0): c}, INF, mode)

    @classmethod
    def monomial(cls, c, e, mode: str = EXACT) -> "PuiseuxSeries":
        return cls({_as_exponent(e): c}, INF, mode)

    @classmethod
    def variable(cls, mode: str = EXACT) -> "PuiseuxSeries":
        return cls.monomial(1, 1, mode)

    # -- basic observers ------------------------------------------------------

    @property
    def coeff_mode(self) -> str:
        return self._mode

    @property
    def truncation_order(self):
        return self._trunc

    @property
    def is_zero(self) -> bool:
        """True when no term is known; the series may hide beyond trunc."""
        return not self._terms

    @property
    def base_exponent(self):
        """Leading exponent (valuation); trunc when the series shows no term."""
        return min(self._terms) if self._terms else self._trunc

    @property
    def ramification(self) -> int:
        """Smallest d with all stored exponents in (1/d)*ZZ."""
        d = 1
        exps = list(self._terms)
        if self._trunc != INF:
            exps.append(self._trunc)
        for e in exps:
            d = d * e.denominator // math.gcd(d, e.denominator)
        return d

    def terms(self) -> Iterator[Tuple[Exponent, CoeffValue]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, e) -> CoeffValue:
        """Exact coefficient of t**e; raises if e is not known at this order."""
        e = _as_exponent(e)
        if self._trunc != INF and e >= self._trunc:
            raise InsufficientOrderError(
                f"coefficient of t^{e} unknown (truncation t^{self._trunc})")
        zero = Q(0) if self._mode == EXACT else 0j
        return self._terms.get(e, zero)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (self._mode == other._mode and self._trunc == other._trunc
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self._mode, self._trunc, tuple(sorted(self._terms.items()))))

    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        """Equality of all coefficients below the common truncation order."""
        t = _exp_min(self._trunc, other._trunc)
        exps = {e for e in self._terms if e < t} | {e for e in other._terms if e < t}
        return all(self.coefficient(e) == other.coefficient(e) for e in exps)

    # -- ring operations ------------------------------------------------------

    def _check_mode(self, other: "PuiseuxSeries"):
        if self._mode != other._mode:
            raise ModeMismatchError(
                f"cannot combine {self._mode} with {other._mode}")

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        self._check_mode(other)
        t = _exp_min(self._trunc, other._trunc)
        d = dict(self._terms)
        for e, c in other._terms.items():
            d[e] = d.get(e, 0) + c
        return PuiseuxSeries(d, t, self._mode)

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries({e: -c for e, c in self._terms.items()},
                             self._trunc, self._mode)

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self + (-other)

    def __mul__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        self._check_mode(other)
        # each factor is exact below its trunc; the product is exact below
        # min(val_a + trunc_b, val_b + trunc_a)
        t = _exp_min(_exp_add(self.base_exponent, other._trunc),
                     _exp_add(other.base_exponent, self._trunc))
        d: Dict[Exponent, CoeffValue] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                if t is INF or e < t:
                    d[e] = d.get(e, 0) + c1 * c2
        return PuiseuxSeries(d, t, self._mode)

    def scale(self, k) -> "PuiseuxSeries":
        if self._mode == EXACT:
            k = Fraction(k)
        return PuiseuxSeries({e: k * c for e, c in self._terms.items()},
                             self._trunc, self._mode)

    def shift(self, m) -> "PuiseuxSeries":
        """Multiply by t**m."""
        m = _as_exponent(m)
        return PuiseuxSeries({e + m: c for e, c in self._terms.items()},
                             _exp_add(self._trunc, m), self._mode)

    def truncate(self, t) -> "PuiseuxSeries":
        t = t if t == INF else _as_exponent(t)
        return PuiseuxSeries(dict(self._terms), _exp_min(t, self._trunc), self._mode)

    def pow(self, n: int) -> "PuiseuxSeries":
        if n < 0:
            return self.invert().pow(-n)
        result = PuiseuxSeries.constant(1, self._mode)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    __pow__ = pow

    def invert(self) -> "PuiseuxSeries":
        """Multiplicative inverse, exact to the same relative order."""
        if not self._terms:
            raise ZeroDivisionSeriesError("inverting a series with no known term")
        v = self.base_exponent
        c0 = self._terms[v]
        rel = INF if self._trunc == INF else self._trunc - v
        # u := self / (c0 t^v) - 1 has positive valuation
        pure_monomial = len(self._terms) == 1
        if rel == INF and not pure_monomial:
            rel = DEFAULT_REL_ORDER
        u = PuiseuxSeries({e - v: c / c0 for e, c in self._terms.items() if e != v},
                          rel, self._mode)
        one = PuiseuxSeries.constant(1, self._mode)
        acc, term = one, one
        while term and term.base_exponent < rel:
            term = term * (-u)
            acc = acc + term
        if rel != INF:
            acc = acc.truncate(rel)
        inv_c0 = 1 / c0 if self._mode == FLOAT else Fraction(1) / c0
        return acc.scale(inv_c0).shift(-v)

    def divide(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self * other.invert()

    __truediv__ = divide

    def sqrt(self) -> "PuiseuxSeries":
        """Square root; exact mode needs an even-lattice leading exponent and a
        square leading coefficient, float mode takes Re > 0 branch."""
        if not self._terms:
            raise ZeroDivisionSeriesError("sqrt of a series with no known term")
        v = self.base_exponent
        c0 = self._terms[v]
        if self._mode == EXACT:
            root = _sqrt_fraction(c0)
        else:
            root = complex(c0) ** 0.5
            if root.real < 0 or (root.real == 0 and root.imag < 0):
                root = -root
        rel = INF if self._trunc == INF else self._trunc - v
        if rel == INF and len(self._terms) > 1:
            rel = DEFAULT_REL_ORDER
        u = PuiseuxSeries({e - v: c / c0 for e, c in self._terms.items() if e != v},
                          rel, self._mode)
        # (1+u)^(1/2) by binomial series
        one = PuiseuxSeries.constant(1, self._mode)
        acc, term = one, one
        binom = Fraction(1)
        k = 0
        while term and term.base_exponent < rel:
            binom = binom * (Fraction(1, 2) - k) / (k + 1)
            term = term * u
            if not term:
                break
            b = binom if self._mode == EXACT else float(binom)
            acc = acc + term.scale(b)
            k += 1
        if rel != INF:
            acc = acc.truncate(rel)
        return acc.scale(root).shift(v / 2)

    # -- calculus -------------------------------------------------------------

    def differentiate(self) -> "PuiseuxSeries":
        d = {}
        for e, c in self._terms.items():
            if e != 0:
                mult = e if self._mode == EXACT else float(e)
                d[e - 1] = mult * c
        return PuiseuxSeries(d, _exp_add(self._trunc, -1), self._mode)

    def antiderivative(self) -> "LogSeries":
        """Termwise primitive with zero constants; the 1/t term feeds log t."""
        logc = Q(0) if self._mode == EXACT else 0j
        d = {}
        for e, c in self._terms.items():
            if e == -1:
                logc = c
            else:
                div = (e + 1) if self._mode == EXACT else float(e + 1)
                d[e + 1] = c / div
        return LogSeries(PuiseuxSeries(d, _exp_add(self._trunc, 1), self._mode), logc)

    def residue(self) -> CoeffValue:
        """Coefficient of 1/t (0 when the lattice misses it); needs trunc > -1."""
        if self._trunc != INF and self._trunc <= -1:
            raise InsufficientOrderError(
                f"residue unknowable at truncation t^{self._trunc}")
        zero = Q(0) if self._mode == EXACT else 0j
        return self._terms.get(Q(-1), zero)

    # -- conversions ----------------------------------------------------------

    def to_float(self) -> "PuiseuxSeries":
        if self._mode == FLOAT:
            return self
        return PuiseuxSeries({e: complex(c) for e, c in self._terms.items()},
                             self._trunc, FLOAT)

    def evaluate(self, t: complex) -> complex:
        """Numeric evaluation (float semantics regardless of mode)."""
        total = 0j
        for e, c in self._terms.items():
            total += complex(c) * complex(t) ** float(e)
        return total

    def to_csv_rows(self) -> Iterable[str]:
        """Rows 'exponent,numerator,denominator' (exact) or 'exponent,re,im'."""
        for e, c in sorted(self._terms.items()):
            if self._mode == EXACT:
                yield f"{e},{c.numerator},{c.denominator}"
            else:
                yield f"{e},{c.real!r},{c.imag!r}"

    def __repr__(self) -> str:
        bits = []
        for e, c in sorted(self._terms.items()):
            bits.append(f"({c})*t^({e})")
        tail = "" if self._trunc == INF else f" + O(t^({self._trunc}))"
        body = " + ".join(bits) if bits else "0"
        return body + tail


class LogSeries:
    """A Puiseux series plus a multiple of log t (from integrating 1/t)."""

    __slots__ = ("regular", "log_coefficient")

    def __init__(self, regular: PuiseuxSeries, log_coefficient: CoeffValue):
        self.regular = regular
        self.log_coefficient = log_coefficient

    @property
    def has_log(self) -> bool:
        return self.log_coefficient != 0

    def __repr__(self) -> str:
        if not self.has_log:
            return repr(self.regular)
        return f"{self.regular!r} + ({self.log_coefficient})*log(t)"


def series_from_coeffs(coeffs, base_exponent, step=1, trunc=None, mode=EXACT):
    """Build a series from a dense coefficient list starting at base_exponent."""
    base = _as_exponent(base_exponent)
    step = _as_exponent(step)
    d = {base + k * step: c for k, c in enumerate(coeffs)}
    if trunc is None:
        trunc = base + len(coeffs) * step
    return PuiseuxSeries(d, trunc, mode)
