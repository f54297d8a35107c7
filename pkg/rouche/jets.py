"""
Jets and the exponential-polynomial functions that realize them
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from core.exceptions import ZeroLeadingJet
from core.utils.analytic import AnalyticFunction


@dataclass(frozen=True)
class Jet:
    """Derivatives c_0, ..., c_m of a function at a point"""

    values: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(c) for c in self.values))

    @property
    def order(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class ExpPolyTarget:
    """
    f(s) = exp(sum_j b_j (s - center)^j), optionally times s (linear_prefactor)
    """

    center: complex
    coeffs: Tuple[complex, ...]
    linear_prefactor: bool = False

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "coeffs", tuple(complex(b) for b in self.coeffs))

    def _poly(self) -> np.ndarray:
        # numpy wants highest power first
        return np.array(self.coeffs[::-1], dtype=complex)

    def derivatives(self, points, order: int) -> np.ndarray:
        """
        Rows f, f', ..., f^(order) at the points

        Uses f^(n+1) = sum_i C(n, i) p^(i+1) f^(n-i) for f = exp(p).
        """
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        u = pts - self.center
        poly = self._poly()
        extra = 1 if self.linear_prefactor else 0
        top = order + extra
        p_derivs = [np.polyval(np.polyder(poly, i) if i else poly, u) for i in range(top + 2)]
        g = np.empty((top + 1,) + pts.shape, dtype=complex)
        g[0] = np.exp(p_derivs[0])
        for n in range(top):
            acc = np.zeros(pts.shape, dtype=complex)
            for i in range(n + 1):
                acc += math.comb(n, i) * p_derivs[i + 1] * g[n - i]
            g[n + 1] = acc
        if not self.linear_prefactor:
            return g
        # (s g)^(n) = s g^(n) + n g^(n-1)
        out = np.empty((order + 1,) + pts.shape, dtype=complex)
        out[0] = pts * g[0]
        for n in range(1, order + 1):
            out[n] = pts * g[n] + n * g[n - 1]
        return out

    def values(self, points) -> np.ndarray:
        return self.derivatives(points, 0)[0]

    def jet(self, order: int) -> Jet:
        return Jet(tuple(self.derivatives(self.center, order)[:, 0]))

    def as_analytic(self, name: str = "f") -> AnalyticFunction:
        return AnalyticFunction(
            evaluator=self.values,
            name=name,
            max_derivative_order=32,
            derivative=lambda pts, k: self.derivatives(pts, k)[k],
            metadata={"center": self.center, "coeffs": list(self.coeffs)},
        )


def jet_log_solve(c: Jet, branch: int = 0) -> Tuple[complex, ...]:
    """
    Coefficients b_0..b_m of p with exp(p) having jet c at 0

    With g(s) = sum c_n s^n / n!, p = log g as a formal power series:
    b_0 = log c_0 (principal branch plus 2 pi i * branch) and
    n b_n g_0 = n g_n - sum_{k=1}^{n-1} k b_k g_{n-k}.

    Raises:
        ZeroLeadingJet: c_0 = 0
    """
    values = c.values if isinstance(c, Jet) else tuple(complex(v) for v in c)
    if not values or values[0] == 0:
        raise ZeroLeadingJet("jet-log needs c_0 != 0")
    g = [v / math.factorial(n) for n, v in enumerate(values)]
    b = [complex(np.log(g[0])) + 2j * np.pi * branch]
    for n in range(1, len(g)):
        acc = n * g[n]
        for k in range(1, n):
            acc -= k * b[k] * g[n - k]
        b.append(acc / (n * g[0]))
    return tuple(b)


def target_from_jet(c: Jet, center: complex = 0.0, extra: Optional[Sequence[complex]] = None) -> ExpPolyTarget:
    """exp-polynomial with jet c at center; `extra` appends higher coefficients"""
    coeffs = jet_log_solve(c) + tuple(extra or ())
    return ExpPolyTarget(center=center, coeffs=coeffs)
