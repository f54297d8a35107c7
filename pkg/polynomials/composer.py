"""
Polynomials P_s(X_0, ..., X_l) with Dirichlet-series coefficients and their
composition with a base function L: P_s(L(s), L'(s), ..., L^(l)(s)).
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

from core.exceptions import (
    BoundaryZero,
    DegreeCapExceeded,
    NonConvergence,
    ParamOutOfRange,
    TermBudgetExceeded,
)
from core.utils.analytic import AnalyticFunction
from core.utils.contour import winding_number
from core.utils.geometry import Disk
from core.utils.numerics import setting
from dirichlet.series import (
    GeneralDirichletSeries,
    constant_series,
    ds_derivative,
    ring_add,
    ring_mul,
    ring_neg,
)

logger = logging.getLogger(__name__)

Degree = Tuple[int, ...]


class PolynomialKind(str, Enum):
    MONOMIAL_WITH_DERIVATIVE = "monomial_with_derivative"
    MONOMIAL_PLAIN = "monomial_plain"
    NON_MONOMIAL = "non_monomial"


def _add_into(terms: Dict[Degree, GeneralDirichletSeries], degree: Degree, coeff: GeneralDirichletSeries) -> None:
    if degree in terms:
        terms[degree] = ring_add(terms[degree], coeff)
    else:
        terms[degree] = coeff


def _check_caps(num_vars: int, terms: Mapping[Degree, GeneralDirichletSeries], error=DegreeCapExceeded) -> None:
    max_vars = setting("poly.max_vars")
    max_degree = setting("poly.max_total_degree")
    max_terms = setting("poly.max_terms")
    if num_vars > max_vars:
        raise error(f"Polynomial uses {num_vars} variables, cap is {max_vars} (l <= {max_vars - 1})")
    if len(terms) > max_terms:
        raise error(f"Polynomial has {len(terms)} terms, cap is {max_terms}")
    for degree in terms:
        if sum(degree) > max_degree:
            raise error(f"Term of total degree {sum(degree)} exceeds cap {max_degree}")


@dataclass(frozen=True, eq=False)
class DirichletPolynomial:
    """
    sum over multi-degrees (d_0, ..., d_l) of D_d(s) X_0^d_0 ... X_l^d_l

    Terms whose coefficient is the zero series are dropped on construction.
    """

    num_vars: int
    terms: Mapping[Degree, GeneralDirichletSeries]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ParamOutOfRange("a polynomial needs at least one variable")
        cleaned = {}
        for degree, coeff in self.terms.items():
            degree = tuple(int(d) for d in degree)
            if len(degree) != self.num_vars:
                raise ParamOutOfRange(f"degree {degree} does not have {self.num_vars} entries")
            if min(degree) < 0:
                raise ParamOutOfRange(f"negative degree in {degree}")
            if not coeff.is_zero:
                cleaned[degree] = coeff
        if not cleaned:
            raise ParamOutOfRange("polynomial has no nonzero terms")
        _check_caps(self.num_vars, cleaned)
        object.__setattr__(self, "terms", dict(sorted(cleaned.items())))

    @property
    def l(self) -> int:  # noqa: E743
        return self.num_vars - 1

    @property
    def total_degree(self) -> int:
        return max(sum(d) for d in self.terms)

    def used_variables(self) -> Tuple[int, ...]:
        return tuple(j for j in range(self.num_vars) if any(d[j] for d in self.terms))

    def padded(self, num_vars: int) -> "DirichletPolynomial":
        if num_vars == self.num_vars:
            return self
        if num_vars < self.num_vars:
            raise ParamOutOfRange("cannot drop variables")
        extra = (0,) * (num_vars - self.num_vars)
        return DirichletPolynomial(num_vars, {d + extra: c for d, c in self.terms.items()})

    def __add__(self, other: "DirichletPolynomial") -> "DirichletPolynomial":
        n = max(self.num_vars, other.num_vars)
        terms = dict(self.padded(n).terms)
        for degree, coeff in other.padded(n).terms.items():
            _add_into(terms, degree, coeff)
        return DirichletPolynomial(n, terms)

    def __neg__(self) -> "DirichletPolynomial":
        return DirichletPolynomial(self.num_vars, {d: ring_neg(c) for d, c in self.terms.items()})

    def __sub__(self, other: "DirichletPolynomial") -> "DirichletPolynomial":
        return self + (-other)

    def __mul__(self, other: "DirichletPolynomial") -> "DirichletPolynomial":
        n = max(self.num_vars, other.num_vars)
        terms: Dict[Degree, GeneralDirichletSeries] = {}
        for d1, c1 in self.padded(n).terms.items():
            for d2, c2 in other.padded(n).terms.items():
                _add_into(terms, tuple(a + b for a, b in zip(d1, d2)), ring_mul(c1, c2))
        return DirichletPolynomial(n, terms)

    def __pow__(self, exponent: int) -> "DirichletPolynomial":
        if exponent < 0:
            raise ParamOutOfRange("negative powers are not polynomials")
        result = constant_polynomial(1.0, self.num_vars)
        for _ in range(exponent):
            result = result * self
        return result

    def scaled(self, series: GeneralDirichletSeries) -> "DirichletPolynomial":
        return DirichletPolynomial(self.num_vars, {d: ring_mul(c, series) for d, c in self.terms.items()})

    def coefficient_values(self, points) -> Dict[Degree, np.ndarray]:
        return {d: c.values(points) for d, c in self.terms.items()}

    def evaluate(self, points, variables) -> np.ndarray:
        """
        Evaluate with coefficients at `points` and X_j = variables[j]

        Args:
            points: Complex array where the coefficients are evaluated
            variables: Sequence of arrays (or None for unused variables)
        """
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        total = np.zeros(pts.shape, dtype=complex)
        for degree, coeff in self.terms.items():
            term = coeff.values(pts)
            for j, d in enumerate(degree):
                if d:
                    term = term * variables[j] ** d
            total += term
        return total

    def structurally_equal(self, other: "DirichletPolynomial", tol: float = 1e-12) -> bool:
        n = max(self.num_vars, other.num_vars)
        a, b = self.padded(n).terms, other.padded(n).terms
        return a.keys() == b.keys() and all(a[d].structurally_equal(b[d], tol) for d in a)

    def to_dict(self) -> dict:
        from polynomials.serializers import PolynomialSerializer

        return dict(PolynomialSerializer(self).data)

    def __str__(self) -> str:
        from experiments.expressions import print_polynomial

        return print_polynomial(self)


def variable(j: int, num_vars: Optional[int] = None) -> DirichletPolynomial:
    """The polynomial X_j"""
    n = max(j + 1, num_vars or 0)
    degree = tuple(1 if i == j else 0 for i in range(n))
    return DirichletPolynomial(n, {degree: constant_series(1.0)})


def constant_polynomial(value, num_vars: int = 1) -> DirichletPolynomial:
    coeff = value if isinstance(value, GeneralDirichletSeries) else constant_series(value)
    return DirichletPolynomial(num_vars, {(0,) * num_vars: coeff})


def polynomial_from_terms(terms: Iterable[Tuple[Degree, GeneralDirichletSeries]]) -> DirichletPolynomial:
    merged: Dict[Degree, GeneralDirichletSeries] = {}
    terms = list(terms)
    n = max(len(d) for d, _ in terms)
    for degree, coeff in terms:
        _add_into(merged, tuple(degree) + (0,) * (n - len(degree)), coeff)
    return DirichletPolynomial(n, merged)


def classify(P: DirichletPolynomial) -> PolynomialKind:
    """
    monomial_with_derivative: one term with some d_j > 0 for j >= 1
    monomial_plain: one term in X_0 only (or constant)
    non_monomial: two or more terms
    """
    if len(P.terms) >= 2:
        return PolynomialKind.NON_MONOMIAL
    (degree,) = P.terms.keys()
    if any(degree[1:]):
        return PolynomialKind.MONOMIAL_WITH_DERIVATIVE
    return PolynomialKind.MONOMIAL_PLAIN


def differentiate_composed(P: DirichletPolynomial, k: int) -> DirichletPolynomial:
    """
    Polynomial Q in X_0..X_{l+k} with Q(L, ..., L^(l+k)) = d^k/ds^k P_s(L, ..., L^(l))

    Product and chain rule: d/ds [D X^d] = D' X^d + D sum_j d_j X^(d - e_j + e_{j+1}).

    Raises:
        TermBudgetExceeded: the result exceeds the polynomial caps
    """
    if k < 0:
        raise ParamOutOfRange(f"Derivative order must be >= 0, got {k}")
    current = dict(P.terms)
    n = P.num_vars
    for _ in range(k):
        n += 1
        nxt: Dict[Degree, GeneralDirichletSeries] = {}
        for degree, coeff in current.items():
            degree = degree + (0,)
            d_coeff = ds_derivative(coeff, 1)
            if not d_coeff.is_zero and np.any(d_coeff.coeffs):
                _add_into(nxt, degree, d_coeff)
            for j, d in enumerate(degree[:-1]):
                if d:
                    raised = list(degree)
                    raised[j] -= 1
                    raised[j + 1] += 1
                    _add_into(nxt, tuple(raised), coeff.scaled(d))
        current = {d: c for d, c in nxt.items() if not c.is_zero and np.any(c.coeffs)}
        _check_caps(n, current, error=TermBudgetExceeded)
    if not current:
        raise ParamOutOfRange("derivative of the composition vanishes identically")
    return DirichletPolynomial(n, current)


@dataclass(frozen=True)
class ComposedFunction:
    """Z(s + i tau) = P_{s+i tau}(L(s+i tau), ..., L^(l)(s+i tau))"""

    poly: DirichletPolynomial
    base: AnalyticFunction
    tau: float = 0.0
    label: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.base.derivative is not None and self.base.max_derivative_order < self.poly.l:
            raise ParamOutOfRange(
                f"base {self.base.name} supports derivatives up to {self.base.max_derivative_order}, "
                f"polynomial needs {self.poly.l}"
            )

    def shifted(self, tau: float) -> "ComposedFunction":
        return ComposedFunction(self.poly, self.base, self.tau + tau, self.label, self.metadata)

    @property
    def name(self) -> str:
        text = self.label or f"P({self.base.name})[{self.poly}]"
        return text if not self.tau else f"{text}(s+{self.tau:g}i)"


def _variables(F: ComposedFunction, pts: np.ndarray, used: Iterable[int]):
    table = [None] * F.poly.num_vars
    for j in used:
        table[j] = np.atleast_1d(F.base.deriv(pts, j))
    return table


def eval_composed(F: ComposedFunction, s):
    """
    Evaluate the composition at s (coefficients and base both at s + i tau)

    Args:
        F: ComposedFunction
        s: Point or array of points

    Returns:
        complex, or array for array input
    """
    pts = np.atleast_1d(np.asarray(s, dtype=complex)) + 1j * F.tau
    values = F.poly.evaluate(pts, _variables(F, pts, F.poly.used_variables()))
    return complex(values[0]) if np.ndim(s) == 0 else values


def declared_pole_orders(F: ComposedFunction):
    """Conservative orders: max over terms of sum_j d_j (m + j) for a base pole of order m"""
    poles = []
    for loc, m in F.base.poles:
        order = max(sum(d * (m + j) for j, d in enumerate(degree)) for degree in F.poly.terms)
        if order > 0:
            poles.append((loc - 1j * F.tau, order))
    return poles


def _verify_pole_orders(f: AnalyticFunction, declared, radius: float):
    verified, notes = [], []
    for loc, order in declared:
        try:
            w = winding_number(f, Disk(loc, radius))
        except (BoundaryZero, NonConvergence) as exc:
            notes.append(f"pole at {loc}: kept declared order {order} ({exc.__class__.__name__})")
            verified.append((loc, order))
            continue
        actual = -w
        if 0 <= actual <= order:
            if actual != order:
                notes.append(f"pole at {loc}: declared order {order}, winding gives {actual}")
            if actual > 0:
                verified.append((loc, actual))
        else:
            notes.append(f"pole at {loc}: winding {w} inconsistent with declared order {order}; kept declared")
            verified.append((loc, order))
    return verified, notes


def as_analytic(F: ComposedFunction, verify_poles: bool = True) -> AnalyticFunction:
    """
    AnalyticFunction handle for a composition

    Poles of the base propagate with conservative orders, then each order
    is checked by the winding number on a small circle around the pole.
    Exact derivatives come from differentiate_composed.
    """
    used = F.poly.used_variables()
    max_vars = setting("poly.max_vars")
    derivative_cache: Dict[int, DirichletPolynomial] = {}

    def evaluator(pts):
        return eval_composed(F, pts)

    def derivative(pts, k):
        if k not in derivative_cache:
            derivative_cache[k] = differentiate_composed(F.poly, k)
        return eval_composed(ComposedFunction(derivative_cache[k], F.base, F.tau), pts)

    series = None
    if len(F.poly.terms) == 1 and len(used) == 1 and F.base.series is not None:
        ((degree, coeff),) = F.poly.terms.items()
        j = used[0]
        if degree[j] == 1 and coeff.is_constant:
            series = ds_derivative(F.base.series, j).scaled(coeff.constant_value())
            if F.tau:
                series = series.shifted(F.tau)

    domain = F.base.shifted(F.tau).domain if F.base.domain is not None else None
    handle = AnalyticFunction(
        evaluator=evaluator,
        name=F.name,
        max_derivative_order=max(0, min(2, max_vars - F.poly.num_vars)),
        poles=tuple(declared_pole_orders(F)),
        domain=domain,
        derivative=derivative,
        series=series,
        metadata={
            "polynomial": str(F.poly),
            "kind": classify(F.poly).value,
            "tau": F.tau,
            "base": F.base.name,
            **F.metadata,
        },
    )
    if verify_poles and handle.poles:
        verified, notes = _verify_pole_orders(handle, handle.poles, setting("contour.pole_check_radius"))
        handle = handle.with_poles(verified)
        handle.metadata["pole_notes"] = notes
        for note in notes:
            logger.info(f"{F.name}: {note}")
    return handle
