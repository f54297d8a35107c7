"""
Auxiliary targets with a prescribed zero at alpha, and the theta equation
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.exceptions import DegenerateAtAlpha, NoNonzeroRoot, ParamOutOfRange, TargetVanishesOnCircle, ZeroAlpha
from core.utils.analytic import AnalyticFunction
from core.utils.geometry import ComplexRect, Disk
from core.utils.numerics import setting
from polynomials.composer import ComposedFunction, DirichletPolynomial, differentiate_composed, eval_composed
from rouche.jets import ExpPolyTarget, Jet, jet_log_solve

logger = logging.getLogger(__name__)

NONZERO = 1e-10
PIN_STEP = 0.37j


@dataclass(frozen=True)
class ThetaSolution:
    theta: Tuple[complex, ...]
    pivot: int
    residual: float
    attempts: int


def _coefficients_at(P: DirichletPolynomial, alpha: complex):
    return {degree: complex(coeff.values(alpha)[0]) for degree, coeff in P.terms.items()}


def _residual(values, theta) -> complex:
    total = 0j
    for degree, value in values.items():
        term = value
        for j, d in enumerate(degree):
            term *= theta[j] ** d
        total += term
    return total


def _polish(coeffs: np.ndarray, root: complex) -> complex:
    deriv = np.polyder(coeffs)
    for _ in range(8):
        slope = np.polyval(deriv, root)
        if slope == 0:
            break
        step = np.polyval(coeffs, root) / slope
        root -= step
        if abs(step) <= 1e-16 * max(1.0, abs(root)):
            break
    return complex(root)


def solve_theta(P: DirichletPolynomial, alpha: complex, attempts: Optional[int] = None) -> ThetaSolution:
    """
    Nonzero theta_0..theta_l with sum_d D_d(alpha) theta^d = 0

    All variables but the pivot (the lowest-index variable present) are
    pinned, first to 1, then to 1 + a*j*0.37i on re-pin attempt a. The
    smallest nonzero root of the resulting univariate polynomial is taken.

    Raises:
        DegenerateAtAlpha: fewer than two coefficients are nonzero at alpha
        NoNonzeroRoot: no attempt produced a nonzero root
    """
    attempts = setting("rouche.theta_attempts", attempts)
    alpha = complex(alpha)
    values = {d: v for d, v in _coefficients_at(P, alpha).items() if abs(v) > NONZERO}
    if len(values) < 2:
        raise DegenerateAtAlpha(f"only {len(values)} coefficient(s) nonzero at alpha = {alpha}")

    used = [j for j in range(P.num_vars) if any(d[j] for d in values)]
    pivot = used[0] if used else 0
    top = max(d[pivot] for d in values)
    for attempt in range(attempts):
        theta = [1.0 + attempt * j * PIN_STEP for j in range(P.num_vars)]
        univariate = np.zeros(top + 1, dtype=complex)  # lowest power first
        for degree, value in values.items():
            rest = value
            for j, d in enumerate(degree):
                if j != pivot:
                    rest *= theta[j] ** d
            univariate[degree[pivot]] += rest
        coeffs = np.trim_zeros(univariate[::-1], "f")
        scale = np.max(np.abs(univariate))
        roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
        nonzero = [r for r in roots if abs(r) > NONZERO * max(1.0, scale)]
        if not nonzero:
            logger.warning(f"theta equation at {alpha} has no nonzero root (attempt {attempt + 1}); re-pinning")
            continue
        root = min(nonzero, key=lambda r: (round(abs(r), 12), np.angle(r)))
        theta[pivot] = _polish(coeffs, root)
        residual = abs(_residual(values, theta))
        return ThetaSolution(theta=tuple(complex(t) for t in theta), pivot=pivot, residual=residual, attempts=attempt + 1)
    raise NoNonzeroRoot(f"no nonzero theta found at alpha = {alpha} after {attempts} attempts")


def aux_monomial_target(alpha: complex, k: int) -> AnalyticFunction:
    """
    A(s) = d^k/ds^k [s e^(-ks/alpha)] = (-1)^(k-1) k^(k-1) alpha^(-k) e^(-ks/alpha) (k alpha - k s)

    The only zero is a simple one at s = alpha.

    Raises:
        ZeroAlpha: alpha = 0
    """
    alpha = complex(alpha)
    if alpha == 0:
        raise ZeroAlpha("alpha must be nonzero")
    if k < 1:
        raise ParamOutOfRange(f"derivative order must be >= 1, got {k}")
    C = (-1) ** (k - 1) * k ** (k - 1) * alpha ** (-k)
    beta = -k / alpha

    def evaluator(pts):
        return C * np.exp(beta * pts) * (k * alpha - k * pts)

    def derivative(pts, n):
        # (e^(beta s) (k alpha - k s))^(n) = e^(beta s) (beta^n (k alpha - k s) - n k beta^(n-1))
        return C * np.exp(beta * pts) * (beta**n * (k * alpha - k * pts) - n * k * beta ** (n - 1))

    return AnalyticFunction(
        evaluator=evaluator,
        name=f"A(s,{alpha:g},{k})",
        max_derivative_order=64,
        derivative=derivative,
        metadata={"zeros": [(alpha, 1)], "alpha": alpha, "k": k},
    )


def exp_poly_for_theta(P: DirichletPolynomial, alpha: complex, free_coefficient: Optional[complex] = None):
    """exp-polynomial f with f^(j)(alpha) = theta_j, plus one free higher coefficient"""
    solution = solve_theta(P, alpha)
    free = setting("rouche.free_coefficient", free_coefficient)
    coeffs = jet_log_solve(Jet(solution.theta)) + (complex(free),)
    return ExpPolyTarget(center=alpha, coeffs=coeffs), solution


def aux_poly_target(P: DirichletPolynomial, alpha: complex, free_coefficient: Optional[complex] = None) -> AnalyticFunction:
    """
    A(s) = sum_d D_d(s) f(s)^d_0 f'(s)^d_1 ... f^(l)(s)^d_l

    f = exp(p) is built from the theta jet at alpha, so A(alpha) = 0. The
    coefficient of (s - alpha)^(l+1) in p is free (default 1); a zero value
    can make A vanish identically, e.g. for P = X_0 + X_1.
    """
    target, solution = exp_poly_for_theta(P, alpha, free_coefficient)
    l = P.l  # noqa: E741

    def evaluator(pts):
        table = target.derivatives(pts, l)
        return P.evaluate(pts, table)

    def derivative(pts, k):
        return eval_composed(ComposedFunction(differentiate_composed(P, k), target.as_analytic()), pts)

    return AnalyticFunction(
        evaluator=evaluator,
        name=f"A(s,{complex(alpha):g};f)",
        max_derivative_order=max(0, setting("poly.max_vars") - P.num_vars),
        derivative=derivative,
        metadata={
            "zeros": [(complex(alpha), None)],
            "alpha": complex(alpha),
            "theta": solution.theta,
            "theta_residual": solution.residual,
            "exp_target": target,
        },
    )


def suggest_alpha(P: DirichletPolynomial, rect: ComplexRect, samples: Optional[int] = None, seed: int = 0) -> complex:
    """
    A point of rect where at least two coefficients exceed 1e-6 in modulus,
    preferring the largest second-largest coefficient.

    Raises:
        DegenerateAtAlpha: no sampled point qualifies
    """
    samples = setting("rouche.alpha_samples", samples)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(rect.sigma_min, rect.sigma_max, samples) + 1j * rng.uniform(rect.t_min, rect.t_max, samples)
    mags = np.array([np.abs(c.values(pts)) for c in P.terms.values()])
    if mags.shape[0] < 2:
        raise DegenerateAtAlpha("a monomial has no admissible alpha")
    second = np.sort(mags, axis=0)[-2]
    best = int(np.argmax(second))
    if second[best] <= 1e-6:
        raise DegenerateAtAlpha(f"no point of {rect} has two coefficients above 1e-6")
    return complex(pts[best])


def monomial_certificate(D, k: int, alpha: complex, disk: Disk, tau: float, base: Optional[AnalyticFunction] = None):
    """
    Rouche certificate for D(s + i tau) L^(k)(s + i tau) against D(s) A(s, alpha, k)

    Args:
        D: GeneralDirichletSeries coefficient
        k: Derivative order (>= 1)
        alpha: Zero of the target, normally disk.center
        disk: Disk on whose circle the inequality is sampled
        tau: Vertical shift
        base: Function L (defaults to zeta)

    Raises:
        TargetVanishesOnCircle: D has a zero on the circle
    """
    from rouche.certificates import rouche_check
    from zeta.engine import zeta_function

    base = base or zeta_function()
    pts = disk.points(setting("rouche.circle_samples"))
    d_min = float(np.min(np.abs(D.values(pts))))
    if d_min <= NONZERO:
        raise TargetVanishesOnCircle(f"coefficient series vanishes on the circle of {disk} (min |D| = {d_min:.2e})")
    monomial = aux_monomial_target(alpha, k)
    shift = 1j * tau
    Z = AnalyticFunction(
        evaluator=lambda s: D.values(s + shift) * base.deriv(s + shift, k),
        name=f"D*{base.name}^({k})(s+{tau:g}i)",
        poles=tuple((loc - shift, order + k) for loc, order in base.poles),
    )
    A = AnalyticFunction(
        evaluator=lambda s: D.values(s) * monomial.values(s),
        name=f"D*{monomial.name}",
        max_derivative_order=1,
        derivative=lambda s, n: D.derivative_values(s, 1) * monomial.values(s) + D.values(s) * monomial.deriv(s, 1),
        metadata={"zeros": [(complex(alpha), 1)]},
    )
    return rouche_check(Z, A, disk, tau=tau)
