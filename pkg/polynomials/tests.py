import math

import mpmath
from django.test import SimpleTestCase

from core.exceptions import DegreeCapExceeded, ParamOutOfRange, ParseError, TermBudgetExceeded
from core.utils.analytic import from_callable, polynomial_from_roots
from core.utils.cauchy import cauchy_derivative
from dirichlet.series import make_ordinary
from polynomials.composer import (
    ComposedFunction,
    PolynomialKind,
    as_analytic,
    classify,
    constant_polynomial,
    declared_pole_orders,
    differentiate_composed,
    eval_composed,
    polynomial_from_terms,
    variable,
)
from polynomials.serializers import polynomial_from_dict
from zeta.engine import zeta_function

X0, X1, X2 = variable(0), variable(1), variable(2)


def mu():
    return X0 * X2 - X1**2


def exact(value):
    return {"terms": [{"a_re": value, "lambda": 0.0}]}


class AlgebraTests(SimpleTestCase):
    def test_mu_structure(self):
        P = mu()
        self.assertEqual(P.num_vars, 3)
        self.assertEqual(P.total_degree, 2)
        self.assertEqual(set(P.terms), {(1, 0, 1), (0, 2, 0)})
        self.assertEqual(P.terms[(0, 2, 0)].constant_value(), -1)
        self.assertEqual(P.used_variables(), (0, 1, 2))

    def test_mixed_widths(self):
        P = X0 + X2
        self.assertEqual(P.num_vars, 3)
        self.assertEqual(P.used_variables(), (0, 2))
        self.assertTrue(polynomial_from_terms([((1,), X0.terms[(1,)]), ((0, 0, 1), X0.terms[(1,)])]).structurally_equal(P))

    def test_cancellation(self):
        with self.assertRaises(ParamOutOfRange):
            X0 - X0
        self.assertTrue(((X0 + X1) * (X0 - X1)).structurally_equal(X0**2 - X1**2))

    def test_caps(self):
        with self.assertRaises(DegreeCapExceeded):
            X0**9
        with self.assertRaises(DegreeCapExceeded):
            variable(7)
        with self.assertRaises(ParamOutOfRange):
            X0 ** (-1)

    def test_classify(self):
        self.assertEqual(classify(mu()), PolynomialKind.NON_MONOMIAL)
        self.assertEqual(classify(X1 * X0**2), PolynomialKind.MONOMIAL_WITH_DERIVATIVE)
        self.assertEqual(classify(X0**3), PolynomialKind.MONOMIAL_PLAIN)
        self.assertEqual(classify(constant_polynomial(2.0)), PolynomialKind.MONOMIAL_PLAIN)
        self.assertEqual(classify(X1.scaled(make_ordinary([1, 2]))), PolynomialKind.MONOMIAL_WITH_DERIVATIVE)


class DerivativeTests(SimpleTestCase):
    def test_square(self):
        Q = differentiate_composed(X0**2, 1)
        self.assertEqual(list(Q.terms), [(1, 1)])
        self.assertEqual(Q.terms[(1, 1)].constant_value(), 2)

    def test_matches_numeric_derivative(self):
        base = polynomial_from_roots([0.5, -1 + 1j])
        P = (X0 * X1).scaled(make_ordinary([1, 2])) + X2
        F = ComposedFunction(P, base)
        composed = from_callable(lambda s: eval_composed(F, s))
        for k in (1, 2):
            G = ComposedFunction(differentiate_composed(P, k), base)
            for s in (0.3 + 0.2j, 1.5 - 1j):
                self.assertAlmostEqual(eval_composed(G, s), cauchy_derivative(composed, s, k), places=8)

    def test_constant_vanishes(self):
        with self.assertRaises(ParamOutOfRange):
            differentiate_composed(constant_polynomial(3.0), 1)
        with self.assertRaises(ParamOutOfRange):
            differentiate_composed(X0, -1)

    def test_variable_budget(self):
        with self.assertRaises(TermBudgetExceeded):
            differentiate_composed(variable(5), 2)


class CompositionTests(SimpleTestCase):
    def test_mu_of_zeta(self):
        F = ComposedFunction(mu(), zeta_function())
        d = [complex(mpmath.zeta(2, derivative=k)) for k in range(3)]
        self.assertAlmostEqual(eval_composed(F, 2.0), d[0] * d[2] - d[1] ** 2, places=12)

    def test_shift(self):
        F = ComposedFunction(mu(), zeta_function())
        tau = 3.0
        self.assertAlmostEqual(eval_composed(F.shifted(tau), 2 + 1j), eval_composed(F, 2 + 1j + 1j * tau), places=13)

    def test_pole_orders(self):
        F = ComposedFunction(mu(), zeta_function())
        self.assertEqual(declared_pole_orders(F), [(1 + 0j, 4)])
        self.assertEqual(declared_pole_orders(F.shifted(2.0)), [(1 - 2j, 4)])
        handle = as_analytic(F)
        self.assertEqual(handle.poles, ((1 + 0j, 4),))
        self.assertEqual(handle.metadata["kind"], "non_monomial")

    def test_overdeclared_pole_is_corrected(self):
        base = from_callable(
            lambda s: 1 / s + 1,
            name="g",
            poles=[(0, 1)],
            derivative=lambda s, k: (-1) ** k * math.factorial(k) / s ** (k + 1),
            max_derivative_order=4,
        )
        # g' + g^2 = 2/s + 1
        F = ComposedFunction(X1 + X0**2, base)
        self.assertEqual(declared_pole_orders(F), [(0j, 2)])
        handle = as_analytic(F)
        self.assertEqual(handle.poles, ((0j, 1),))
        self.assertTrue(handle.metadata["pole_notes"])

    def test_series_attached_to_derivative_monomial(self):
        handle = as_analytic(ComposedFunction(X1, zeta_function()), verify_poles=False)
        self.assertIsNotNone(handle.series)
        self.assertEqual(handle.metadata["kind"], "monomial_with_derivative")

    def test_handle_derivative(self):
        F = ComposedFunction(X0 * X1, zeta_function())
        handle = as_analytic(F, verify_poles=False)
        d = [complex(mpmath.zeta(3, derivative=k)) for k in range(3)]
        self.assertAlmostEqual(handle.deriv(3.0, 1), d[1] ** 2 + d[0] * d[2], places=12)


class SerializerTests(SimpleTestCase):
    def test_mu_payload(self):
        P = polynomial_from_dict(
            {"l": 2, "terms": [{"deg": [1, 0, 1], "coeff": exact(1)}, {"deg": [0, 2, 0], "coeff": exact(-1)}]}
        )
        self.assertTrue(P.structurally_equal(mu()))

    def test_roundtrip(self):
        P = mu() + (X0 * X1).scaled(make_ordinary([1, -0.5]))
        self.assertTrue(polynomial_from_dict(P.to_dict()).structurally_equal(P))

    def test_invalid_payloads(self):
        with self.assertRaises(ParseError):
            polynomial_from_dict({"l": 1, "terms": [{"deg": [1, 0, 0], "coeff": exact(1)}]})
        with self.assertRaises(ParseError):
            polynomial_from_dict({"l": 0, "terms": [{"deg": [1], "coeff": exact(1)}, {"deg": [1], "coeff": exact(2)}]})
        with self.assertRaises(ParseError):
            polynomial_from_dict({"l": 0, "terms": []})
