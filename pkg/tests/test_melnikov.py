import math
from fractions import Fraction as Q

import numpy as np
import pytest

from bfmix import melnikov as M


REF = dict(omega0=1, omega1=1, C0_sq=0.01, C1_sq=1, action_I=3.0)


@pytest.fixture(scope="module")
def s():
    return M.setup(REF["omega0"], REF["omega1"], REF["C0_sq"], REF["C1_sq"],
                   REF["action_I"])


class TestSetup:
    def test_zero_c0_limit(self):
        s = M.setup(1, 1, 1e-12, 1, 3.0)
        assert s.h_star == pytest.approx(1.0, abs=1e-6)
        assert s.a == pytest.approx(1 / 3, abs=1e-6)

    def test_action_threshold(self):
        with pytest.raises(M.InvalidActionError):
            M.setup(1, 1, 0.01, 1, 1.0)     # needs I > sqrt(2)

    def test_boundary_action_amplitude(self):
        s = M.setup(1, 1, 0.01, 1, math.sqrt(2) + 1e-9)
        assert s.amplitude == pytest.approx(0.0, abs=1e-4)

    def test_cubic_root_certified(self, s):
        w0, c0sq = 1.0, 0.01
        val = (s.h_star ** 3 - w0 ** 2 * s.h_star ** 2
               - 9 * c0sq * w0 * s.h_star + 8 * c0sq * w0 ** 3
               + 6.75 * c0sq ** 2)
        assert abs(val) < 1e-12

    def test_radius_below_first_pole(self, s):
        assert s.contour_radius < math.pi / math.sqrt(3 * s.a)


class TestBracket:
    def test_sin_zero_leaves_action_term(self, s):
        t = 0.37
        val = M.poisson_bracket_H0H1(s, t, t)
        udot = M._u_dot(s, t)
        assert val == pytest.approx(udot * s.action_I / (2 * s.omega1))

    def test_odd_momentum_factor(self, s):
        # p0 q0 = u'/2 is odd; the action part of the bracket inherits it
        t = 0.4 + 0.1j
        assert M._u_dot(s, -t) == pytest.approx(-M._u_dot(s, t))
        action_part = lambda tt: M._u_dot(s, tt) * s.action_I / (2 * s.omega1)
        assert action_part(-t) == pytest.approx(-action_part(t))

    def test_exact_derivative_integrates_to_zero(self):
        # I^2 = 2 w1 C1^2 exactly: the integrand is a pure derivative and the
        # loop integral collapses to round-off
        s0 = M.setup(1, 1, 0.01, 2, 2.0)
        assert s0.amplitude == 0
        val = M.melnikov_numeric(s0, 0.77, check_radius_independence=False)
        assert abs(val) < 1e-8


class TestNumericIntegral:
    def test_zero_at_origin(self, s):
        assert abs(M.melnikov_numeric(s, 0.0)) < 1e-10 * M._scale(s)

    def test_radius_independence(self, s):
        d1 = M._contour_integral(s, 0.3, s.contour_radius, s.contour_points)
        d2 = M._contour_integral(s, 0.3, s.contour_radius / 2,
                                 2 * s.contour_points)
        assert abs(d1 - d2) <= 1e-6 * abs(d1)

    def test_sine_fit(self, s):
        A, resid = M.fitted_amplitude(s)
        assert resid < 1e-8

    def test_fitted_amplitude_purely_imaginary(self, s):
        A, _ = M.fitted_amplitude(s)
        assert abs(A.real) < 1e-8 * abs(A)

    def test_fitted_amplitude_matches_residue_calculus(self, s):
        A, _ = M.fitted_amplitude(s)
        assert abs(A - M.predicted_amplitude(s)) < 1e-8 * abs(A)

    def test_quoted_prefactor_differs(self, s):
        # the verbatim closed form carries 12 pi a sqrt(2 w1); the measured
        # one is 16 pi w1; both share the sine structure and zeros
        A, _ = M.fitted_amplitude(s)
        quoted = M.melnikov_closed_form(s, math.pi / (2 * s.theta))
        assert quoted.imag == pytest.approx(12 * math.pi * s.a
                                            * math.sqrt(2 * s.omega1)
                                            * s.amplitude)
        assert abs(A.imag / quoted.imag - 1) > 0.1

    def test_antiperiodicity(self, s):
        half = math.pi / (2 * math.sqrt(2 * s.omega1))
        for t0 in (0.2, 0.45):
            d1 = M.melnikov_numeric(s, t0, check_radius_independence=False)
            d2 = M.melnikov_numeric(s, t0 + half,
                                    check_radius_independence=False)
            assert abs(d1 + d2) < 1e-8 * M._scale(s)


class TestClosedForm:
    def test_zero_at_origin(self, s):
        assert M.melnikov_closed_form(s, 0.0) == 0

    def test_sine_maximum(self, s):
        t0 = math.pi / (4 * math.sqrt(2 * s.omega1))
        val = M.melnikov_closed_form(s, t0)
        assert val == pytest.approx(12j * math.pi * s.a
                                    * math.sqrt(2 * s.omega1) * s.amplitude)

    def test_antiperiodicity(self, s):
        half = math.pi / (2 * math.sqrt(2 * s.omega1))
        assert M.melnikov_closed_form(s, 0.3 + half) == pytest.approx(
            -M.melnikov_closed_form(s, 0.3))


class TestZeros:
    def test_zero_locations_and_simplicity(self, s):
        period = math.pi / math.sqrt(2 * s.omega1)
        zeros = M.find_simple_zeros(s, 0.05, 0.05 + 1.05 * period)
        assert zeros
        half = math.pi / (2 * math.sqrt(2 * s.omega1))
        for z, dmag in zeros:
            k = round(z / half)
            assert abs(z - k * half) < 1e-8
            assert dmag > 0

    def test_derivative_magnitude_from_fit(self, s):
        A, _ = M.fitted_amplitude(s)
        zeros = M.find_simple_zeros(s, 0.05,
                                    0.05 + 1.05 * math.pi / math.sqrt(2))
        expected = abs(A) * s.theta
        for _, dmag in zeros:
            assert dmag == pytest.approx(expected, rel=1e-4)

    def test_numeric_and_closed_zeros_coincide(self, s):
        zeros = M.find_simple_zeros(s, 0.05,
                                    0.05 + 1.05 * math.pi / math.sqrt(2))
        for z, _ in zeros:
            assert abs(M.melnikov_closed_form(s, z)) < 1e-7

    def test_degenerate_amplitude_reports_nothing(self):
        s0 = M.setup(1, 1, 0.01, 2, 2.0)
        assert M.find_simple_zeros(s0, 0.05,
                                   0.05 + 1.1 * math.pi / math.sqrt(2)) == []

    def test_range_must_cover_period(self, s):
        with pytest.raises(ValueError):
            M.find_simple_zeros(s, 0.0, 0.1)


class TestDeltaQuadrature:
    def test_quoted_form_inconsistent(self, s):
        samples = np.linspace(0.5, 2.0, 7)
        defect = M.delta_quadrature_check(s, samples)
        assert defect > 1e-4          # the printed expression fails its job

    def test_derived_form_consistent(self, s):
        samples = np.linspace(0.5, 2.0, 7)
        defect = M.delta_quadrature_check(s, samples, form=M.delta_derived)
        assert defect < 1e-6

    def test_growth_rate_matches(self, s):
        # log-slope of both 1/p0^2 and the quoted form's derivative ~ 4 sqrt(3a)
        r = math.sqrt(3 * s.a)
        t1, t2 = 6.0, 8.0
        slope_target = (math.log(M.inverse_p0_squared(s, t2))
                        - math.log(M.inverse_p0_squared(s, t1))) / (t2 - t1)
        h = 1e-5
        d1 = (M.delta_closed_form(s, t1 + h) - M.delta_closed_form(s, t1 - h)) / (2 * h)
        d2 = (M.delta_closed_form(s, t2 + h) - M.delta_closed_form(s, t2 - h)) / (2 * h)
        slope_quoted = (math.log(d2) - math.log(d1)) / (t2 - t1)
        assert slope_target == pytest.approx(4 * r, rel=1e-3)
        assert slope_quoted == pytest.approx(4 * r, rel=1e-3)


class TestSweep:
    def test_csv_rows(self, s):
        rows = list(M.sweep_csv_rows(s, [0.0, 0.3]))
        assert len(rows) == 2
        parts = rows[1].split(",")
        assert len(parts) == 5
        assert float(parts[0]) == 0.3
