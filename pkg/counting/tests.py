import math
from unittest import skipUnless

import mpmath
import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from core.exceptions import HypothesisViolation, IncompleteZeroSet, ParamOutOfRange, QuadratureFailure
from core.utils.analytic import constant
from core.utils.contour import LocalizedZero, ZeroReport
from core.utils.geometry import ComplexRect
from counting.density import density_sweep, fit_line
from counting.formulas import (
    ZeroCounting,
    berndt_count,
    berndt_main_term,
    derivative_zeros,
    li,
    lm_weighted_sum,
    speiser_check,
)
from counting.mean_values import ingham_integral, mean_square_integral
from counting.quadrature import integrate
from counting.tasks import count_rectangle_task
from zeta.engine import zeta_function


class QuadratureTests(SimpleTestCase):
    def test_oscillatory_integral(self):
        value = integrate(lambda t: np.exp(1j * t), 0.0, 10.0)
        expected = (np.exp(10j) - 1) / 1j
        self.assertAlmostEqual(abs(value - expected), 0.0, places=10)

    def test_reversed_limits(self):
        forward = integrate(lambda t: t**3, 0.0, 3.0)
        backward = integrate(lambda t: t**3, 3.0, 0.0)
        self.assertAlmostEqual(forward.real, 81 / 4, places=10)
        self.assertAlmostEqual(backward.real, -81 / 4, places=10)

    def test_non_finite_integrand(self):
        with self.assertRaises(QuadratureFailure):
            integrate(lambda t: np.full(t.shape, np.nan), 0.0, 1.0)


class FormulaTests(SimpleTestCase):
    def test_li_matches_mpmath(self):
        self.assertAlmostEqual(li(4.0), float(mpmath.li(4) - mpmath.li(2)), places=6)
        self.assertAlmostEqual(li(4.0), 1.92, places=2)

    def test_berndt_main_term_at_200(self):
        self.assertAlmostEqual(berndt_main_term(200.0), 56.25, delta=0.01)

    def test_berndt_main_term_monotone_and_superlinear(self):
        grid = np.linspace(50, 2000, 200)
        values = [berndt_main_term(T) for T in grid]
        self.assertTrue(all(b > a for a, b in zip(values, values[1:])))
        for T in (100.0, 250.0, 1000.0):
            self.assertGreater(berndt_main_term(2 * T), 2 * berndt_main_term(T))

    def test_weighted_sum_of_empty_zero_set(self):
        report = ZeroReport(region=ComplexRect(-1, 4, 0.5, 10), count=0)
        empirical, predicted = lm_weighted_sum(1, 10.0, report)
        self.assertEqual(empirical, 0.0)
        self.assertTrue(math.isfinite(predicted))

    def test_weighted_sum_needs_resolved_zeros(self):
        zero = LocalizedZero(location=1 + 20j, multiplicity=2, residual=1e-3, resolved=False)
        report = ZeroReport(region=ComplexRect(-1, 4, 0.5, 30), count=2, zeros=[zero])
        with self.assertRaises(IncompleteZeroSet):
            lm_weighted_sum(1, 30.0, report)

    def test_first_zero_of_zeta_prime(self):
        result = berndt_count(1, 30.0)
        self.assertGreaterEqual(result["count"], 1)
        report = derivative_zeros(1, 30.0)
        self.assertTrue(any(abs(z.location - (2.46316 + 23.29832j)) < 1e-3 for z in report.zeros))

    def test_speiser_zone_is_empty(self):
        self.assertEqual(speiser_check(1, 0.5, 30.0).count, 0)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_berndt_ratio_at_200(self):
        result = berndt_count(1, 200.0)
        self.assertGreaterEqual(result["ratio"], 0.5)
        self.assertLessEqual(result["ratio"], 2.0)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_speiser_zone_to_200(self):
        self.assertEqual(speiser_check(1, 0.5, 200.0).count, 0)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_weighted_sum_band(self):
        T = 100.0
        empirical, predicted = lm_weighted_sum(1, T, derivative_zeros(1, T))
        self.assertLessEqual(abs(empirical - predicted), ZeroCounting.band(T))


class DensitySweepTests(SimpleTestCase):
    def test_no_zeta_zeros_right_of_critical_line(self):
        sweep = density_sweep(zeta_function(), (0.51, 0.99), [20.0, 40.0])
        self.assertEqual(sweep.counts, [0, 0])
        self.assertEqual(sweep.fit.slope, 0.0)
        frame = sweep.to_frame()
        self.assertEqual(list(frame.columns[:3]), ["T", "count", "slope_so_far"])

    def test_counts_do_not_depend_on_workers(self):
        f = zeta_function(order=1)
        one = density_sweep(f, (0.51, 4.0), [25.0, 40.0], workers=1, t_min=0.5)
        two = density_sweep(f, (0.51, 4.0), [25.0, 40.0], workers=2, t_min=0.5)
        self.assertEqual(one.counts, two.counts)
        self.assertGreaterEqual(one.counts[0], 1)

    def test_grid_validation(self):
        with self.assertRaises(ParamOutOfRange):
            density_sweep(zeta_function(), (0.9, 0.6), [10.0])
        with self.assertRaises(ParamOutOfRange):
            density_sweep(zeta_function(), (0.6, 0.9), [20.0, 10.0])

    def test_fit_line(self):
        fit = fit_line([1, 2, 3], [2, 4, 6])
        self.assertAlmostEqual(fit.slope, 2.0)
        self.assertAlmostEqual(fit.residual, 0.0)
        self.assertIsNone(fit_line([1], [1]))

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_zeta_prime_counts_grow(self):
        sweep = density_sweep(zeta_function(order=1), (0.51, 0.99), [100.0, 200.0, 400.0])
        self.assertTrue(sweep.counts[0] < sweep.counts[1] < sweep.counts[2])
        self.assertGreater(sweep.fit.slope, 0)


class MeanValueTests(SimpleTestCase):
    def test_unit_constant(self):
        result = mean_square_integral(constant(1.0), 0.75, 50.0)
        self.assertAlmostEqual(result.integral_over_T, 1.0, places=12)
        self.assertIsNone(result.predicted)

    def test_zeta_mean_square_in_absolute_convergence(self):
        result = mean_square_integral(zeta_function(), 2.0, 400.0)
        self.assertAlmostEqual(result.predicted, float(mpmath.zeta(4)), places=6)
        self.assertLess(result.rel_error, 0.02)

    def test_ingham_short_range(self):
        result = ingham_integral(0, 0, 1.5, 1.5, 400.0)
        self.assertAlmostEqual(abs(result.predicted - float(mpmath.zeta(3))), 0.0, places=9)
        self.assertLess(result.rel_error, 0.05)
        self.assertEqual(result.to_dict()["kind"], "ingham")

    def test_ingham_hypotheses(self):
        with self.assertRaises(HypothesisViolation):
            ingham_integral(0, 0, 0.3, 0.3, 100.0)

    def test_sigma_must_exceed_half(self):
        with self.assertRaises(ParamOutOfRange):
            mean_square_integral(zeta_function(), 0.5, 100.0)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_zeta_mean_square_at_three_quarters(self):
        result = mean_square_integral(zeta_function(), 0.75, 2000.0)
        self.assertLess(abs(result.integral_over_T - float(mpmath.zeta(1.5))) / float(mpmath.zeta(1.5)), 0.1)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_zeta_prime_mean_square_is_bounded(self):
        f = zeta_function(order=1)
        values = [mean_square_integral(f, 0.75, T).integral_over_T for T in (1000.0, 2000.0)]
        self.assertLess(abs(values[1] - values[0]) / values[0], 0.15)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_ingham_acceptance(self):
        self.assertLess(ingham_integral(0, 0, 0.8, 0.8, 2000.0).rel_error, 0.1)
        self.assertLess(ingham_integral(1, 0, 0.8, 0.8, 2000.0).rel_error, 0.15)


class CountTaskTests(SimpleTestCase):
    def test_task_reports_zeros(self):
        data = count_rectangle_task("zeta", 0.4, 0.6, 10.0, 20.0)
        self.assertEqual(data["count"], 1)

    def test_task_reports_errors(self):
        data = count_rectangle_task("zeta +", 0.4, 0.6, 10.0, 20.0)
        self.assertEqual(data["error"], "ParseError")
