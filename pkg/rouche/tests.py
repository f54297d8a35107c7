import math
import os
import tempfile
from unittest import skipUnless

import mpmath
import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from core.exceptions import (
    DegenerateAtAlpha,
    ParamOutOfRange,
    TargetVanishesOnCircle,
    ZeroAlpha,
    ZeroLeadingJet,
)
from core.utils.analytic import polynomial_from_roots
from core.utils.cauchy import cauchy_derivative
from core.utils.contour import winding_number
from core.utils.geometry import Disk
from dirichlet.series import GeneralDirichletSeries, constant_series
from polynomials.composer import ComposedFunction, constant_polynomial, variable
from rouche.alignment import align_search
from rouche.certificates import RoucheCertificate, rouche_check
from rouche.jets import ExpPolyTarget, Jet, jet_log_solve
from rouche.scan import tau_grid, tau_scan
from rouche.targets import aux_monomial_target, aux_poly_target, monomial_certificate, solve_theta
from zeta.engine import zeta_derivative, zeta_function


class JetLogTests(SimpleTestCase):
    def test_trivial_jets(self):
        np.testing.assert_allclose(jet_log_solve(Jet((1, 0, 0))), (0, 0, 0), atol=1e-15)
        np.testing.assert_allclose(jet_log_solve(Jet((1, 1, 1))), (0, 1, 0), atol=1e-15)

    def test_second_order_jet(self):
        b = jet_log_solve(Jet((2, 3, 5)))
        np.testing.assert_allclose(b, (math.log(2), 1.5, 0.125), rtol=1e-14)

    def test_zero_leading_value(self):
        with self.assertRaises(ZeroLeadingJet):
            jet_log_solve(Jet((0, 1)))

    def test_random_jets_roundtrip(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            m = int(rng.integers(0, 7))
            c0 = rng.uniform(0.1, 10) * np.exp(2j * np.pi * rng.uniform())
            rest = rng.normal(size=m) + 1j * rng.normal(size=m)
            c = np.concatenate(([c0], rest))
            target = ExpPolyTarget(center=0.0, coeffs=jet_log_solve(Jet(c)))
            np.testing.assert_allclose(target.jet(m).values, c, rtol=1e-9, atol=1e-9 * np.max(np.abs(c)))

    def test_jet_matches_cauchy_derivatives(self):
        c = (1.5 - 0.5j, 0.3, -0.7 + 0.2j, 1.1)
        f = ExpPolyTarget(center=0.0, coeffs=jet_log_solve(Jet(c))).as_analytic()
        for n in range(1, 4):
            self.assertAlmostEqual(abs(cauchy_derivative(f, 0.0, n, radius=0.2) - c[n]), 0.0, places=7)


class ThetaTests(SimpleTestCase):
    def test_linear_case(self):
        P = variable(0, 2) + variable(1, 2)
        solution = solve_theta(P, 0.75 + 2j)
        self.assertAlmostEqual(abs(solution.theta[0] + 1), 0.0, places=12)
        self.assertEqual(solution.theta[1], 1)
        self.assertLess(solution.residual, 1e-9)

    def test_quadratic_case(self):
        P = (variable(0, 2) ** 2).scaled(constant_series(2.0)) + variable(1, 2).scaled(constant_series(3.0))
        solution = solve_theta(P, 0.5)
        theta0 = solution.theta[0]
        self.assertAlmostEqual(abs(theta0**2 + 1.5), 0.0, places=10)
        self.assertAlmostEqual(abs(theta0), math.sqrt(1.5), places=10)
        self.assertTrue(all(abs(t) > 0 for t in solution.theta))

    def test_monomial_is_degenerate(self):
        with self.assertRaises(DegenerateAtAlpha):
            solve_theta(variable(0) ** 2, 0.5)


class MonomialTargetTests(SimpleTestCase):
    def test_first_order_closed_form(self):
        A = aux_monomial_target(0.75, 1)
        for s in (0.1, 0.4 + 0.3j, 2j):
            expected = np.exp(-s / 0.75) * (0.75 - s) / 0.75
            self.assertAlmostEqual(abs(A(s) - expected), 0.0, places=12)
        self.assertEqual(abs(A(0.75)), 0.0)

    def test_simple_zero_at_alpha(self):
        self.assertEqual(winding_number(aux_monomial_target(0.75, 2), Disk(0.75, 0.1)), 1)

    def test_value_at_origin_matches_mpmath(self):
        alpha, k = 0.6 + 0.2j, 3
        expected = mpmath.diff(lambda s: s * mpmath.exp(-k * s / alpha), 0, k)
        self.assertAlmostEqual(abs(aux_monomial_target(alpha, k)(0.0) - complex(expected)), 0.0, places=9)

    def test_zero_alpha(self):
        with self.assertRaises(ZeroAlpha):
            aux_monomial_target(0, 1)


class PolyTargetTests(SimpleTestCase):
    alpha = 0.75 + 2j

    def test_vanishes_at_alpha(self):
        A = aux_poly_target(variable(0, 2) + variable(1, 2), self.alpha)
        self.assertLess(abs(A(self.alpha)), 1e-8)
        self.assertGreaterEqual(winding_number(A, Disk(self.alpha, 0.05)), 1)

    def test_square_has_double_zero(self):
        P = (variable(0) - constant_polynomial(1.0)) ** 2
        A = aux_poly_target(P, self.alpha)
        self.assertEqual(winding_number(A, Disk(self.alpha, 0.05)), 2)


class RoucheCheckTests(SimpleTestCase):
    def test_pass(self):
        cert = rouche_check(polynomial_from_roots([0.0]), polynomial_from_roots([-0.1]), Disk(0, 1))
        self.assertTrue(cert.passed)
        self.assertAlmostEqual(cert.max_diff, 0.1, places=12)
        self.assertEqual(cert.winding_Z, cert.winding_A)
        self.assertEqual(cert.winding_Z, 1)
        self.assertAlmostEqual(abs(cert.zero_inside.location), 0.0, places=10)

    def test_fail(self):
        cert = rouche_check(polynomial_from_roots([-2.0]), polynomial_from_roots([0.0]), Disk(0, 1))
        self.assertFalse(cert.passed)
        self.assertIsNone(cert.zero_inside)

    def test_target_vanishing_on_circle(self):
        with self.assertRaises(TargetVanishesOnCircle):
            rouche_check(polynomial_from_roots([0.0]), polynomial_from_roots([1.0]), Disk(0, 1))

    def test_json_roundtrip_keeps_pass_flag(self):
        cert = rouche_check(polynomial_from_roots([0.0]), polynomial_from_roots([-0.1]), Disk(0, 1))
        data = cert.to_dict()
        self.assertIs(data["pass"], True)
        again = RoucheCertificate.from_dict(data)
        self.assertTrue(again.passed)
        self.assertEqual(again.disk, cert.disk)


class MonomialCertificateTests(SimpleTestCase):
    def test_refused_when_coefficient_vanishes_on_circle(self):
        D = GeneralDirichletSeries.from_terms([(1.0, 0.0), (-1.0, math.log(2))])
        with self.assertRaises(TargetVanishesOnCircle):
            monomial_certificate(D, 1, 0.05, Disk(0.05, 0.05), tau=0.0)


class TauScanTests(SimpleTestCase):
    alpha = 0.75 + 0.5j

    def _synthetic(self):
        A = aux_monomial_target(self.alpha, 1)
        return ComposedFunction(variable(0), A), A

    def test_self_approximation_passes_at_zero(self):
        F, A = self._synthetic()
        result = tau_scan(F, A, Disk(self.alpha, 0.1), (0.0, 1.0), step=0.01)
        first = result.certificates[0]
        self.assertEqual(first.tau, 0.0)
        self.assertTrue(first.passed)
        self.assertEqual(first.max_diff, 0.0)
        self.assertEqual(result.grid_size, 101)
        for cert in result.passes:
            self.assertTrue(cert.verified)

    def test_hit_fraction_shrinks_with_radius(self):
        F, A = self._synthetic()
        fractions = [
            tau_scan(F, A, Disk(self.alpha, r), (0.0, 1.0), step=0.01).hit_fraction for r in (0.2, 0.1, 0.05)
        ]
        self.assertGreater(fractions[0], 0.0)
        self.assertGreaterEqual(fractions[0], fractions[1])
        self.assertGreaterEqual(fractions[1], fractions[2])

    def test_results_sorted_and_resumable(self):
        F, A = self._synthetic()
        disk = Disk(self.alpha, 0.1)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "scan.jsonl")
            first = tau_scan(F, A, disk, (0.0, 0.1), step=0.01, sink=path)
            resumed = tau_scan(F, A, disk, (0.0, 0.2), step=0.01, sink=path, resume=True)
            with open(path) as handle:
                lines = [line for line in handle if line.strip()]
        self.assertEqual(first.grid_size, 11)
        self.assertEqual(resumed.resumed, 11)
        self.assertEqual(len(resumed.certificates), 21)
        self.assertEqual(len(lines), 21)
        taus = [c.tau for c in resumed.certificates]
        self.assertEqual(taus, sorted(taus))
        self.assertEqual(
            [c.passed for c in resumed.certificates[:11]],
            [c.passed for c in first.certificates],
        )

    def test_step_must_be_positive(self):
        with self.assertRaises(ParamOutOfRange):
            tau_grid((0.0, 1.0), 0.0)


class AlignmentTests(SimpleTestCase):
    def test_single_frequency_hits_multiples_of_two_pi(self):
        hits = align_search([1.0], 1, 0.1, (0.0, 20.0), 0.01)
        self.assertIn(0.0, hits)
        distance = np.abs(hits - 2 * np.pi * np.rint(hits / (2 * np.pi)))
        self.assertTrue(np.all(distance < 0.2 * np.pi))
        self.assertFalse(np.any(np.abs(hits - np.pi) < 0.1))

    def test_two_logarithms(self):
        hits = align_search([math.log(2), math.log(3)], 1, 0.05, (0.01, 1e4), 0.01)
        self.assertGreater(len(hits), 0)
        self.assertGreater(hits[0], 0.0)

    def test_invalid_parameters(self):
        with self.assertRaises(ParamOutOfRange):
            align_search([], 1, 0.1, (0, 1), 0.1)
        with self.assertRaises(ParamOutOfRange):
            align_search([1.0], 1, 0.5, (0, 1), 0.1)


class ZetaPrimeScanTests(SimpleTestCase):
    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_scan_finds_verified_zeros(self):
        alpha = 0.75 + 0.5j
        disk = Disk(alpha, 0.1)
        F = ComposedFunction(variable(1), zeta_function())
        result = tau_scan(
            F, aux_monomial_target(alpha, 1), disk, (0.0, 500.0), step=0.05, workers=settings.ZETALAB_WORKERS
        )
        self.assertEqual(result.grid_size, 10001)
        self.assertGreaterEqual(len(result.passes), 1)
        self.assertGreater(result.hit_fraction, 0.0)
        for cert in result.passes:
            self.assertTrue(cert.verified)
            z = cert.mapped_zero
            self.assertLess(abs(zeta_derivative(z, 1)), 1e-6)
            self.assertLess(disk.center.real - disk.radius, z.real)
            self.assertLess(z.real, disk.center.real + disk.radius)
