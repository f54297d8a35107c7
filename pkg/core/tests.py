import math

import mpmath
import numpy as np
from django.test import SimpleTestCase

from core.exceptions import (
    BoundaryZero,
    InvalidRadii,
    NonConvergence,
    ParamOutOfRange,
    PoleHit,
    PoleInDisk,
)
from core.utils.analytic import from_callable, polynomial_from_roots
from core.utils.cauchy import cauchy_derivative, derivative_error_bound
from core.utils.contour import (
    argument_change_count,
    count_zeros_disk,
    count_zeros_rect,
    winding_number,
)
from core.utils.geometry import ComplexRect, Disk, region_from_dict
from core.utils.localize import localize_zeros, newton
from core.utils.numerics import numerics_override, setting
from core.utils.parallel import ParallelMap, pairwise_sum


def double_pole(center=0.5):
    return from_callable(lambda s: 1 / (s - center) ** 2, name="double_pole", poles=[(center, 2)])


class GeometryTests(SimpleTestCase):
    def test_invalid_regions(self):
        with self.assertRaises(ParamOutOfRange):
            ComplexRect(1, 0, 0, 1)
        with self.assertRaises(ParamOutOfRange):
            ComplexRect(0, 1, 2, 2)
        with self.assertRaises(InvalidRadii):
            Disk(0, 0)

    def test_split_covers_rectangle(self):
        rect = ComplexRect(0, 2, 0, 4)
        children = rect.split()
        self.assertEqual(len(children), 4)
        self.assertAlmostEqual(sum(c.width * c.height for c in children), 8.0)
        self.assertEqual(children[0].corners[0], rect.corners[0])
        self.assertEqual(children[2].corners[2], rect.corners[2])

    def test_strict_containment(self):
        rect = ComplexRect(0, 1, 0, 1)
        self.assertFalse(rect.contains(1 + 0.5j))
        self.assertTrue(rect.contains(1 + 0.5j, strict=False))
        self.assertAlmostEqual(rect.distance_to_boundary(0.25 + 0.5j), 0.25)

    def test_dict_forms(self):
        rect = ComplexRect(-1, 4, 0.5, 30)
        disk = Disk(0.5 + 2j, 0.1)
        self.assertEqual(region_from_dict(rect.to_dict()), rect)
        self.assertEqual(region_from_dict(disk.to_dict()), disk)


class AnalyticFunctionTests(SimpleTestCase):
    def test_declared_pole(self):
        f = double_pole()
        with self.assertRaises(PoleHit):
            f(0.5)
        values = f.values([0.5, 1.5])
        self.assertTrue(np.isnan(values[0]))
        self.assertAlmostEqual(values[1], 1.0)

    def test_shift(self):
        f = from_callable(lambda s: s, poles=[(2j, 1)])
        g = f.shifted(2.0)
        self.assertAlmostEqual(g(1), 1 + 2j)
        self.assertEqual(g.poles, ((0j, 1),))
        self.assertEqual(g.metadata["tau"], 2.0)

    def test_exact_and_numeric_derivatives(self):
        p = polynomial_from_roots([1, 2, 3])
        self.assertAlmostEqual(p.deriv(0.0, 1), 11.0)
        cube = from_callable(lambda s: s**3)
        self.assertAlmostEqual(cube.deriv(2.0, 2), 12.0, places=8)


class WindingTests(SimpleTestCase):
    def test_zeros_in_disk(self):
        f = polynomial_from_roots([0.1, 0.2 + 0.1j, 3])
        self.assertEqual(winding_number(f, Disk(0, 1)), 2)

    def test_zeros_in_rectangle(self):
        f = polynomial_from_roots(np.exp(2j * np.pi * np.arange(3) / 3))
        report = count_zeros_rect(f, ComplexRect(-1, 2, -0.5, 1))
        self.assertEqual(report.count, 2)
        self.assertEqual(report.adjustment, 0.0)
        self.assertEqual(report.zeros, [])

    def test_poles_are_subtracted(self):
        f = double_pole()
        self.assertEqual(winding_number(f, Disk(0, 1)), -2)
        self.assertEqual(argument_change_count(f, ComplexRect(-1, 1, -1, 1)), -2)
        self.assertEqual(count_zeros_disk(f, Disk(0, 1)).count, 0)

    def test_zero_on_boundary(self):
        f = polynomial_from_roots([1.0])
        with self.assertRaises(BoundaryZero):
            winding_number(f, Disk(0, 1))

    def test_boundary_perturbation_is_reported(self):
        f = polynomial_from_roots([1.0])
        report = count_zeros_disk(f, Disk(0, 1))
        self.assertEqual(report.count, 1)
        self.assertEqual(report.adjustment, setting("contour.perturbations")[0])
        self.assertEqual(report.requested_region, Disk(0, 1))
        self.assertTrue(report.notes)

    def test_threshold_override(self):
        f = polynomial_from_roots([0, 0])
        with numerics_override({"contour.boundary_threshold": 10.0}):
            with self.assertRaises(BoundaryZero):
                winding_number(f, Disk(0, 1))
        self.assertEqual(winding_number(f, Disk(0, 1)), 2)

    def test_sample_budget(self):
        f = polynomial_from_roots([0] * 22)
        with self.assertRaises(NonConvergence):
            winding_number(f, Disk(0, 1), initial_samples=1, budget=4)

    def test_report_dict(self):
        data = count_zeros_disk(polynomial_from_roots([0.5j]), Disk(0, 1)).to_dict()
        self.assertEqual(data["count"], 1)
        self.assertEqual(data["region"]["type"], "disk")
        self.assertEqual(data["requested_region"]["radius"], 1)


class CauchyTests(SimpleTestCase):
    def test_exponential(self):
        f = from_callable(np.exp, name="exp")
        for k in range(1, 5):
            value = cauchy_derivative(f, 0.5, k)
            self.assertLess(abs(value - math.exp(0.5)), 1e-9)

    def test_pole_inside_circle(self):
        with self.assertRaises(PoleInDisk):
            cauchy_derivative(double_pole(0.1), 0.0, 1, radius=0.2)

    def test_default_radius_avoids_pole(self):
        f = double_pole(0.1)
        # f' = -2/(s - 0.1)^3
        self.assertAlmostEqual(cauchy_derivative(f, 0.0, 1), -2 / (-0.1) ** 3, places=6)

    def test_error_bound(self):
        self.assertAlmostEqual(derivative_error_bound(1e-6, 0.5, 1.0, 2), 3.2e-5)
        self.assertEqual(derivative_error_bound(1e-6, 0.5, 1.0, 0), 1e-6)
        with self.assertRaises(InvalidRadii):
            derivative_error_bound(1e-6, 1.0, 1.0, 1)
        with self.assertRaises(ParamOutOfRange):
            derivative_error_bound(-1.0, 0.5, 1.0, 1)


class LocalizeTests(SimpleTestCase):
    def test_newton_simple_root(self):
        z, converged = newton(polynomial_from_roots([2.0, -1.0]), 1.8)
        self.assertTrue(converged)
        self.assertAlmostEqual(z, 2.0, places=12)

    def test_simple_zeros(self):
        roots = [0.3 + 0.2j, -0.4 + 0.1j, 0.25 - 0.6j]
        report = localize_zeros(polynomial_from_roots(roots), ComplexRect(-1, 1, -1, 1))
        self.assertEqual(report.count, 3)
        self.assertTrue(report.resolved)
        found = [z.location for z in report.zeros]
        for got, want in zip(found, sorted(roots, key=lambda r: (r.imag, r.real))):
            self.assertAlmostEqual(got, want, places=8)
        self.assertTrue(all(z.multiplicity == 1 for z in report.zeros))

    def test_double_zero(self):
        f = polynomial_from_roots([0.3 + 0.2j, -0.4 + 0.1j, -0.4 + 0.1j])
        report = localize_zeros(f, ComplexRect(-1, 1, -1, 1))
        self.assertEqual(report.count, 3)
        self.assertEqual([z.multiplicity for z in report.zeros], [2, 1])
        self.assertAlmostEqual(report.zeros[0].location, -0.4 + 0.1j, places=6)
        self.assertAlmostEqual(report.zeros[1].location, 0.3 + 0.2j, places=8)

    def test_no_zeros(self):
        report = localize_zeros(polynomial_from_roots([5.0]), ComplexRect(-1, 1, -1, 1))
        self.assertEqual(report.count, 0)
        self.assertEqual(report.zeros, [])


def square(x):
    return x * x


class ParallelTests(SimpleTestCase):
    def test_order_preserved(self):
        self.assertEqual(ParallelMap(workers=2).map(square, range(10)), [x * x for x in range(10)])
        self.assertEqual(ParallelMap(workers=1).map(square, [3]), [9])

    def test_pairwise_sum(self):
        self.assertEqual(pairwise_sum([]), 0.0)
        self.assertEqual(pairwise_sum([1.0, 2.0, 3.0]), 6.0)
        self.assertEqual(pairwise_sum([1j, 2, 3 - 1j]), 5 + 0j)
        values = np.random.default_rng(3).normal(size=1001)
        self.assertEqual(pairwise_sum(values), pairwise_sum(list(values)))

    def test_unknown_setting(self):
        with self.assertRaises(KeyError):
            setting("contour.no_such_key")
        with self.assertRaises(KeyError):
            with numerics_override({"no.such": 1}):
                pass


def tall_sinh():
    # zeros at s = i k for every integer k
    return from_callable(lambda s: np.sinh(np.pi * s), name="sinh(pi s)")


class TallContourTests(SimpleTestCase):
    rect = ComplexRect(-0.5, 0.5, 0.5, 100.5)

    def test_every_turn_on_long_edges_is_counted(self):
        report = count_zeros_rect(tall_sinh(), self.rect)
        self.assertEqual(report.count, 100)
        self.assertGreater(report.samples_used, 4 * 64)

    def test_doubling_the_grid_keeps_the_winding(self):
        f = tall_sinh()
        windings = [winding_number(f, self.rect, initial_samples=n) for n in (16, 64, 128, 256)]
        self.assertEqual(windings, [100] * 4)

    def test_doubling_recovers_turns_lost_on_a_sparse_grid(self):
        with numerics_override({"contour.samples_per_unit": 0.0}):
            self.assertEqual(winding_number(tall_sinh(), self.rect, initial_samples=64), 100)

    def test_budget_too_small_for_the_grid(self):
        with self.assertRaises(NonConvergence):
            winding_number(tall_sinh(), self.rect, budget=1000)


class NegativeCountTests(SimpleTestCase):
    def test_underdeclared_pole_is_an_error(self):
        f = from_callable(lambda s: 1 / s**2, name="double_pole_declared_simple", poles=[(0, 1)])
        with self.assertRaises(NonConvergence):
            count_zeros_disk(f, Disk(0, 1))

    def test_undeclared_pole_is_noted(self):
        f = from_callable(lambda s: 1 / (s - 0.1) ** 2, name="undeclared")
        report = count_zeros_disk(f, Disk(0, 1))
        self.assertEqual(report.count, -2)
        self.assertTrue(report.notes)


class RandomPolynomialCountTests(SimpleTestCase):
    def test_counts_match_enclosed_roots(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 200:
            degree = int(rng.integers(1, 7))
            roots = rng.uniform(-2, 2, degree) + 1j * rng.uniform(-2, 2, degree)
            s0, s1 = np.sort(rng.uniform(-2, 2, 2))
            t0, t1 = np.sort(rng.uniform(-2, 2, 2))
            if s1 - s0 < 0.2 or t1 - t0 < 0.2:
                continue
            rect = ComplexRect(s0, s1, t0, t1)
            if min(abs(rect.distance_to_boundary(r)) for r in roots) < 0.05:
                continue
            inside = sum(rect.contains(r) for r in roots)
            report = count_zeros_rect(polynomial_from_roots(roots), rect)
            self.assertEqual(report.count, inside, msg=f"roots={roots} rect={rect}")
            self.assertEqual(report.adjustment, 0.0)
            checked += 1

    def test_localized_multiplicities_sum_to_count(self):
        rng = np.random.default_rng(19)
        region = ComplexRect(-1, 1, -1, 1)
        checked = 0
        while checked < 20:
            roots = list(rng.uniform(-0.8, 0.8, 3) + 1j * rng.uniform(-0.8, 0.8, 3))
            if rng.random() < 0.5:
                roots.append(roots[0])
            distinct = roots[:3]
            gaps = [abs(a - b) for i, a in enumerate(distinct) for b in distinct[i + 1 :]]
            if min(gaps) < 0.1:
                continue
            report = localize_zeros(polynomial_from_roots(roots), region)
            self.assertEqual(report.count, len(roots))
            self.assertEqual(sum(z.multiplicity for z in report.zeros), report.count)
            checked += 1


class CauchyAgainstFiniteDifferenceTests(SimpleTestCase):
    cases = (
        (np.exp, mpmath.exp),
        (np.sin, mpmath.sin),
        (lambda s: s**5 - 2 * s**2 + 1, lambda z: z**5 - 2 * z**2 + 1),
    )

    def test_random_points(self):
        rng = np.random.default_rng(5)
        points = rng.uniform(-2, 2, 100) + 1j * rng.uniform(-2, 2, 100)
        for i, s in enumerate(points):
            func, reference = self.cases[i % len(self.cases)]
            f = from_callable(func)
            k = 1 + i % 3
            want = complex(mpmath.diff(reference, mpmath.mpc(s.real, s.imag), k))
            got = cauchy_derivative(f, complex(s), k)
            self.assertLess(abs(got - want), 1e-6 * max(1.0, abs(want)), msg=f"s={s} k={k}")
