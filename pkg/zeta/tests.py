import math
from fractions import Fraction
from unittest import skipUnless

import mpmath
import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from core.exceptions import NearZeroOfZeta, ParamOutOfRange, PoleAtOne, PoleHit
from core.utils.contour import count_zeros_rect
from core.utils.geometry import ComplexRect
from dirichlet.series import make_ordinary
from zeta.bernoulli import BERNOULLI_EVEN, EM_COEFFICIENTS
from zeta.engine import (
    ZetaParams,
    reciprocal_values,
    zeta,
    zeta_derivative,
    zeta_function,
    zeta_partial_summation,
    zeta_reciprocal,
)
from zeta.moebius import moebius_table

FIRST_ZERO = 0.5 + 14.134725141734693j


def reference(s, k=0):
    return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag), derivative=k))


class EulerMaclaurinTests(SimpleTestCase):
    def test_known_values(self):
        self.assertAlmostEqual(zeta(2), math.pi**2 / 6, places=13)
        self.assertAlmostEqual(zeta(4), math.pi**4 / 90, places=13)
        self.assertAlmostEqual(zeta(-1), -1 / 12, places=12)
        self.assertAlmostEqual(zeta(0), -0.5, places=13)

    def test_first_zero(self):
        self.assertLess(abs(zeta(FIRST_ZERO)), 1e-12)

    def test_against_mpmath(self):
        rng = np.random.default_rng(11)
        points = rng.uniform(-2, 4, 40) + 1j * rng.uniform(-60, 60, 40)
        for k in range(4):
            values = zeta_derivative(points, k) if k else zeta(points)
            for s, value in zip(points, values):
                want = reference(s, k)
                self.assertLess(abs(value - want), 1e-10 * max(1.0, abs(want)), msg=f"k={k} s={s}")

    def test_fixed_truncation(self):
        params = ZetaParams(truncation_N=40, bernoulli_terms=8)
        self.assertLess(abs(zeta(3 + 20j, params) - reference(3 + 20j)), 1e-12)

    def test_pole(self):
        with self.assertRaises(PoleAtOne):
            zeta(1)
        with self.assertRaises(PoleAtOne):
            zeta_derivative(1.0, 2)
        with self.assertRaises(ParamOutOfRange):
            zeta_derivative(2.0, -1)

    def test_invalid_params(self):
        with self.assertRaises(ParamOutOfRange):
            ZetaParams(truncation_N=1)
        with self.assertRaises(ParamOutOfRange):
            ZetaParams(bernoulli_terms=0)

    def test_bernoulli_table(self):
        self.assertEqual(BERNOULLI_EVEN[0], Fraction(1, 6))
        self.assertEqual(BERNOULLI_EVEN[1], Fraction(-1, 30))
        self.assertAlmostEqual(EM_COEFFICIENTS[0], 1 / 12)


class PartialSummationTests(SimpleTestCase):
    def test_agrees_with_euler_maclaurin(self):
        for s in (2 + 1j, 0.5 + 10j, 0.8 - 3j):
            self.assertLess(abs(zeta_partial_summation(s) - zeta(s)), 1e-8)

    def test_explicit_cutoff(self):
        self.assertLess(abs(zeta_partial_summation(3.0, N=5) - reference(3.0)), 1e-8)


class ReciprocalTests(SimpleTestCase):
    def test_value(self):
        self.assertAlmostEqual(zeta_reciprocal(2), 6 / math.pi**2, places=13)

    def test_near_zero(self):
        with self.assertRaises(NearZeroOfZeta):
            zeta_reciprocal(FIRST_ZERO)

    def test_array_form(self):
        values = reciprocal_values([1.0, 2.0])
        self.assertEqual(values[0], 0)
        self.assertAlmostEqual(values[1], 6 / math.pi**2)


class HandleTests(SimpleTestCase):
    def test_pole_orders(self):
        self.assertEqual(zeta_function().poles, ((1 + 0j, 1),))
        self.assertEqual(zeta_function(order=2).poles, ((1 + 0j, 3),))
        with self.assertRaises(PoleHit):
            zeta_function()(1.0)

    def test_exact_derivatives(self):
        f = zeta_function()
        self.assertAlmostEqual(f.deriv(2.0, 1), -0.9375482543158437, places=12)
        self.assertAlmostEqual(zeta_function(order=1).deriv(2.0, 1), f.deriv(2.0, 2), places=13)

    def test_handles_are_cached(self):
        self.assertIs(zeta_function(), zeta_function())

    def test_attached_series(self):
        series = zeta_function().series
        self.assertAlmostEqual(series.coeffs[0], 1)
        self.assertFalse(series.is_exact)


class MoebiusTests(SimpleTestCase):
    def test_small_values(self):
        table = moebius_table(100)
        self.assertEqual([table[n] for n in range(1, 11)], [1, -1, -1, 0, -1, 1, -1, 0, 0, 1])
        self.assertEqual(int(table.omega[30]), 3)
        self.assertEqual(int(table.omega[12]), 2)

    def test_mertens(self):
        self.assertEqual(int(moebius_table(100).values[1:].sum()), 1)
        self.assertEqual(int(moebius_table(1000).values[1:].sum()), 2)

    def test_coefficients_grow_table(self):
        coeffs = moebius_table(10).coefficients(30)
        self.assertEqual(len(coeffs), 30)
        self.assertEqual(coeffs[29], -1.0)

    def test_read_only(self):
        with self.assertRaises(ValueError):
            moebius_table(10).values[2] = 0


class ZeroCountTests(SimpleTestCase):
    def test_zeros_up_to_height_100(self):
        report = count_zeros_rect(zeta_function(), ComplexRect(0.0, 1.0, 0.0, 100.0))
        self.assertEqual(report.count, 29)
        # the corner s = 1 is the pole
        self.assertGreater(report.adjustment, 0.0)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_zeros_up_to_height_200(self):
        self.assertEqual(count_zeros_rect(zeta_function(), ComplexRect(0.0, 1.0, 1.0, 200.0)).count, 79)


class EtaOracleTests(SimpleTestCase):
    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_500_points_against_eta_series(self):
        rng = np.random.default_rng(500)
        points = rng.uniform(0.4, 4.0, 500) + 1j * rng.uniform(-2000, 2000, 500)
        values = zeta(points)
        with mpmath.workdps(30):
            for s, value in zip(points, values):
                z = mpmath.mpc(s.real, s.imag)
                want = complex(mpmath.altzeta(z) / (1 - mpmath.power(2, 1 - z)))
                self.assertLess(abs(value - want), 1e-10 * max(1.0, abs(want)), msg=f"s={s}")


class MoebiusInversionTests(SimpleTestCase):
    def test_divisor_sums_up_to_ten_thousand(self):
        n_max = 10**4
        mu = moebius_table(n_max).values.astype(int)
        sums = np.zeros(n_max + 1, dtype=int)
        for d in range(1, n_max + 1):
            sums[d::d] += mu[d]
        expected = np.zeros(n_max + 1, dtype=int)
        expected[1] = 1
        np.testing.assert_array_equal(sums[1:], expected[1:])

    def test_series_matches_reciprocal_at_five_halves(self):
        coeffs = moebius_table(2000).coefficients(2000)
        series_value = make_ordinary(coeffs).values(2.5)[0]
        tail = float(mpmath.zeta(2.5, 2001))
        self.assertLess(abs(series_value - zeta_reciprocal(2.5)), tail)
