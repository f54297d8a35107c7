import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import BudgetExceeded, GrowthViolation, ParamOutOfRange, ParseError
from dirichlet.serializers import series_from_dict
from dirichlet.series import (
    GeneralDirichletSeries,
    constant_series,
    ds_derivative,
    ds_eval,
    make_ordinary,
    mean_square_predicted,
    ring_add,
    ring_mul,
    ring_neg,
    single_term,
    zero_series,
)
from dirichlet.tails import EXACT, SumTail, TailMajorant


def direct(coeffs, s):
    n = np.arange(1, len(coeffs) + 1)
    return complex(np.sum(np.asarray(coeffs) * n ** (-complex(s))))


class ConstructionTests(SimpleTestCase):
    def test_exponents_must_increase(self):
        with self.assertRaises(ParamOutOfRange):
            GeneralDirichletSeries([1, 1], [1.0, 0.5])
        with self.assertRaises(ParamOutOfRange):
            GeneralDirichletSeries([1, 1], [0.0])

    def test_from_terms_merges(self):
        A = GeneralDirichletSeries.from_terms([(1, 0.5), (2, 0.5 + 1e-15), (3, 0.1)])
        self.assertEqual(len(A), 2)
        np.testing.assert_allclose(A.exponents, [0.1, 0.5])
        np.testing.assert_allclose(A.coeffs, [3, 3])

    def test_not_finite_at_half_plus(self):
        with self.assertRaises(ParamOutOfRange):
            GeneralDirichletSeries([1.0], [-2000.0])

    def test_predicates(self):
        self.assertTrue(zero_series().is_zero)
        self.assertTrue(constant_series(2 - 1j).is_constant)
        self.assertEqual(constant_series(2 - 1j).constant_value(), 2 - 1j)
        self.assertFalse(single_term(1, math.log(2)).is_constant)

    def test_immutable(self):
        A = make_ordinary([1, 2, 3])
        with self.assertRaises(ValueError):
            A.coeffs[0] = 5


class OrdinaryTests(SimpleTestCase):
    def test_values_match_direct_sum(self):
        coeffs = [1, -2, 0.5j, 4]
        A = make_ordinary(coeffs)
        for s in (2.0, 0.7 + 3j, -1 + 10j):
            self.assertAlmostEqual(A.values(s)[0], direct(coeffs, s), places=12)

    def test_shift(self):
        A = make_ordinary([1, 1, 1], shift=0.5)
        self.assertAlmostEqual(A.values(1.5)[0], make_ordinary([1, 1, 1]).values(2.0)[0], places=14)

    def test_growth_violation(self):
        with self.assertRaises(GrowthViolation):
            make_ordinary([1, 5], growth=(1.0, 0.0))
        with self.assertRaises(GrowthViolation):
            make_ordinary([1], growth=(-1.0, 0.0))
        make_ordinary([1, 2, 3], growth=(1.0, 1.0))

    def test_tail_bounds_zeta(self):
        A = make_ordinary(np.ones(100), growth=(1.0, 0.0))
        value, tail = ds_eval(A, 2.0)
        self.assertAlmostEqual(tail, 0.01)
        self.assertLessEqual(abs(value - math.pi**2 / 6), tail)
        self.assertEqual(ds_eval(A, 0.5 + 3j).tail_bound, np.inf)
        self.assertEqual(ds_eval(make_ordinary([1, 1]), 0.1).tail_bound, 0.0)

    def test_mean_square_prediction(self):
        A = make_ordinary(np.ones(100), growth=(1.0, 0.0))
        value, tail = mean_square_predicted(A, 1.0)
        target = math.pi**2 / 6
        self.assertLess(value, target)
        self.assertLessEqual(target, value + tail)

    def test_shifted_series(self):
        A = make_ordinary([1, -1, 2])
        tau = 1.7
        for s in (2.0, 1 + 1j):
            self.assertAlmostEqual(A.shifted(tau).values(s)[0], A.values(s + 1j * tau)[0], places=13)


class RingTests(SimpleTestCase):
    def test_add_and_negate(self):
        A, B = make_ordinary([1, 2]), make_ordinary([0, 1, 1])
        total = ring_add(A, B)
        np.testing.assert_allclose(total.coeffs, [1, 3, 1])
        self.assertTrue(ring_add(A, ring_neg(A)).is_zero)

    def test_product(self):
        A, B = make_ordinary([1, 1]), make_ordinary([1, -1])
        P = ring_mul(A, B)
        np.testing.assert_allclose(P.exponents, [0, math.log(2), math.log(4)])
        np.testing.assert_allclose(P.coeffs, [1, 0, -1], atol=1e-15)
        s = 0.8 + 2j
        self.assertAlmostEqual(P.values(s)[0], A.values(s)[0] * B.values(s)[0], places=13)
        self.assertTrue(P.is_exact)

    def test_product_tail(self):
        A = make_ordinary(np.ones(20), growth=(1.0, 0.0))
        B = make_ordinary([1, 1])
        P = ring_mul(A, B)
        self.assertFalse(P.is_exact)
        self.assertGreater(P.tail.bound(2.0), 0)

    def test_sum_tail(self):
        A = make_ordinary(np.ones(20), growth=(1.0, 0.0))
        total = ring_add(A, A)
        self.assertIsInstance(total.tail, SumTail)
        self.assertAlmostEqual(total.tail.bound(3.0), 2 * A.tail.bound(3.0))

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            ring_mul(make_ordinary([1, 1]), make_ordinary([1, 1]), budget=3)

    def test_derivative(self):
        coeffs = [1, 2, 3]
        D = ds_derivative(make_ordinary(coeffs), 1)
        s = 1.5 + 1j
        want = -sum(c * math.log(n) * n ** (-s) for n, c in enumerate(coeffs, start=1))
        self.assertAlmostEqual(D.values(s)[0], want, places=13)
        self.assertIs(ds_derivative(D, 0), D)
        with self.assertRaises(ParamOutOfRange):
            ds_derivative(D, -1)

    def test_derivative_tail_is_heuristic(self):
        A = make_ordinary(np.ones(10), growth=(1.0, 0.0))
        self.assertTrue(ds_derivative(A, 2).tail.heuristic)
        self.assertFalse(A.tail.heuristic)

    def test_exact_tail(self):
        self.assertTrue(EXACT.exact)
        self.assertEqual(EXACT.bound(0.0), 0.0)
        self.assertEqual(TailMajorant(A=1.0, Lambda=1.0, abscissa=1.0).bound(0.9), np.inf)


class SerializerTests(SimpleTestCase):
    def test_ordinary_payload(self):
        A = series_from_dict(
            {"ordinary": {"coeffs": [1, 2, {"re": 0, "im": 1}], "growth": {"C": 3, "theta": 0}}}
        )
        self.assertEqual(len(A), 3)
        self.assertAlmostEqual(A.coeffs[2], 1j)
        self.assertFalse(A.is_exact)

    def test_roundtrip(self):
        A = make_ordinary([1, -2, 0.5j], growth=(2.0, 0.0))
        B = series_from_dict(A.to_dict())
        self.assertTrue(A.structurally_equal(B))
        self.assertAlmostEqual(A.tail.bound(2.5), B.tail.bound(2.5))

    def test_terms_payload(self):
        A = series_from_dict({"terms": [{"a_re": 1, "lambda": 0.0}, {"a_re": 0, "a_im": 2, "lambda": 1.5}]})
        self.assertTrue(A.is_exact)
        np.testing.assert_allclose(A.exponents, [0.0, 1.5])

    def test_invalid_payloads(self):
        with self.assertRaises(ParseError):
            series_from_dict({})
        with self.assertRaises(ParseError):
            series_from_dict({"terms": [], "ordinary": {"coeffs": [1]}})
        with self.assertRaises(ParseError):
            series_from_dict({"ordinary": {"coeffs": []}})
        with self.assertRaises(ParseError):
            series_from_dict({"terms": [{"a_re": 1, "lambda": 1.0}, {"a_re": 1, "lambda": 0.5}], "tail": {"A": -1, "Lambda": 1}})
