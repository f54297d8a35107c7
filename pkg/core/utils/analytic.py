"""
Evaluatable complex function handles
"""
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from core.exceptions import PoleHit
from core.utils.geometry import ComplexRect

ArrayLike = Union[complex, float, np.ndarray, Sequence[complex]]

# Distance below which an argument counts as sitting on a declared pole
POLE_EPS = 1e-14


@dataclass(frozen=True)
class AnalyticFunction:
    """
    A meromorphic function given by a vectorized evaluator.

    The evaluator maps a 1-D complex array to a complex array of the same
    shape. `derivative(points, k)`, when present, returns exact k-th
    derivatives for 1 <= k <= max_derivative_order; higher orders fall back
    to Cauchy-integral differentiation.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    name: str = "f"
    max_derivative_order: int = 0
    poles: Tuple[Tuple[complex, int], ...] = ()
    domain: Optional[ComplexRect] = None
    derivative: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    series: Any = None
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        poles = tuple((complex(loc), int(order)) for loc, order in self.poles)
        object.__setattr__(self, "poles", poles)

    def _pole_mask(self, points: np.ndarray) -> np.ndarray:
        mask = np.zeros(points.shape, dtype=bool)
        for loc, _ in self.poles:
            mask |= np.abs(points - loc) < POLE_EPS
        return mask

    def values(self, points: ArrayLike) -> np.ndarray:
        """
        Evaluate on an array of points without raising at poles.

        Points on a declared pole yield nan so contour code can treat them
        as boundary hits.
        """
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        mask = self._pole_mask(pts)
        out = np.full(pts.shape, np.nan + 1j * np.nan, dtype=complex)
        if (~mask).any():
            with np.errstate(all="ignore"):
                out[~mask] = np.asarray(self.evaluator(pts[~mask]), dtype=complex)
        return out

    def __call__(self, s: ArrayLike):
        scalar = np.ndim(s) == 0
        pts = np.atleast_1d(np.asarray(s, dtype=complex))
        if self._pole_mask(pts).any():
            raise PoleHit(f"{self.name} evaluated at a declared pole", points=pts[self._pole_mask(pts)])
        with np.errstate(all="ignore"):
            out = np.asarray(self.evaluator(pts), dtype=complex)
        return complex(out[0]) if scalar else out

    def deriv(self, s: ArrayLike, k: int, radius: Optional[float] = None):
        """
        k-th derivative at s, exact when available, else by Cauchy integral

        Args:
            s: Point or array of points
            k: Derivative order (>= 0)
            radius: Optional Cauchy radius for the numeric path

        Returns:
            complex, or array for array input
        """
        if k == 0:
            return self(s)
        if self.derivative is not None and k <= self.max_derivative_order:
            scalar = np.ndim(s) == 0
            pts = np.atleast_1d(np.asarray(s, dtype=complex))
            if self._pole_mask(pts).any():
                raise PoleHit(f"{self.name}^({k}) evaluated at a declared pole")
            with np.errstate(all="ignore"):
                out = np.asarray(self.derivative(pts, k), dtype=complex)
            return complex(out[0]) if scalar else out

        from core.utils.cauchy import cauchy_derivative

        if np.ndim(s) == 0:
            return cauchy_derivative(self, complex(s), k, radius=radius)
        return np.array([cauchy_derivative(self, complex(p), k, radius=radius) for p in np.ravel(s)])

    def pole_order_inside(self, region) -> int:
        return sum(order for loc, order in self.poles if region.contains(loc, strict=True))

    def nearest_pole_distance(self, s: complex) -> float:
        if not self.poles:
            return np.inf
        return min(abs(s - loc) for loc, _ in self.poles)

    def shifted(self, tau: float) -> "AnalyticFunction":
        """The function s -> f(s + i tau)"""
        if tau == 0:
            return self
        shift = 1j * tau
        evaluator = self.evaluator
        derivative = self.derivative
        domain = None
        if self.domain is not None:
            domain = ComplexRect(
                self.domain.sigma_min,
                self.domain.sigma_max,
                self.domain.t_min - tau,
                self.domain.t_max - tau,
            )
        return replace(
            self,
            evaluator=lambda pts: evaluator(pts + shift),
            derivative=(lambda pts, k: derivative(pts + shift, k)) if derivative else None,
            poles=tuple((loc - shift, order) for loc, order in self.poles),
            domain=domain,
            name=f"{self.name}(s+{tau:g}i)",
            metadata={**self.metadata, "tau": tau},
        )

    def with_poles(self, poles) -> "AnalyticFunction":
        return replace(self, poles=tuple(poles))


def from_callable(
    func: Callable,
    name: str = "f",
    poles=(),
    derivative: Optional[Callable[[np.ndarray, int], np.ndarray]] = None,
    max_derivative_order: int = 0,
    domain: Optional[ComplexRect] = None,
    **metadata,
) -> AnalyticFunction:
    """Wrap a numpy-aware callable (e.g. lambda s: s**2 + 1) as an AnalyticFunction"""
    return AnalyticFunction(
        evaluator=lambda pts: np.asarray(func(pts), dtype=complex) * np.ones_like(pts),
        name=name,
        poles=tuple(poles),
        derivative=derivative,
        max_derivative_order=max_derivative_order,
        domain=domain,
        metadata=metadata,
    )


def polynomial_from_roots(roots: Sequence[complex], name: str = "p") -> AnalyticFunction:
    """Monic polynomial with the given roots, with exact derivatives"""
    coeffs = np.poly(np.asarray(roots, dtype=complex)) if len(roots) else np.array([1.0 + 0j])

    def derivative(pts, k):
        return np.polyval(np.polyder(coeffs, k), pts) if k < len(coeffs) else np.zeros_like(pts)

    return AnalyticFunction(
        evaluator=lambda pts: np.polyval(coeffs, pts),
        name=name,
        derivative=derivative,
        max_derivative_order=len(coeffs) + 1,
        metadata={"roots": [complex(r) for r in roots]},
    )


def constant(value: complex, name: str = "const") -> AnalyticFunction:
    value = complex(value)
    return AnalyticFunction(
        evaluator=lambda pts: np.full(pts.shape, value, dtype=complex),
        name=name,
        derivative=lambda pts, k: np.zeros(pts.shape, dtype=complex),
        max_derivative_order=64,
    )
