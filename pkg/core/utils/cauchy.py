"""
Cauchy-integral derivatives and the nested-disk derivative error bound
"""
import logging
import math
from typing import Optional

import numpy as np

from core.exceptions import InvalidRadii, ParamOutOfRange, PoleInDisk
from core.utils.numerics import setting

logger = logging.getLogger(__name__)


def default_radius(f, s: complex) -> float:
    """Half the distance to the nearest declared pole or domain edge, capped"""
    radius = setting("cauchy.max_radius")
    nearest = f.nearest_pole_distance(s)
    if np.isfinite(nearest):
        radius = min(radius, nearest / 2)
    if f.domain is not None and f.domain.contains(s, strict=True):
        radius = min(radius, f.domain.distance_to_boundary(s) / 2)
    return radius


def _trapezoid(f, s: complex, k: int, radius: float, nodes: int):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    w = np.exp(1j * theta)
    vals = f.values(s + radius * w)
    coeff = np.mean(vals * w ** (-k))
    scale = math.factorial(k) / radius**k
    return coeff * scale, np.mean(np.abs(vals)) * scale


def cauchy_derivative(
    f,
    s: complex,
    k: int,
    radius: Optional[float] = None,
    nodes: Optional[int] = None,
    rtol: Optional[float] = None,
) -> complex:
    """
    k-th derivative of f at s by trapezoidal quadrature of Cauchy's formula

    The node count doubles until two successive estimates agree to rtol,
    relative to the larger of the estimate and the rounding floor of the
    circle values.

    Args:
        f: AnalyticFunction, analytic on the closed disk (s, radius)
        s: Center point
        k: Derivative order
        radius: Circle radius (default: half distance to the nearest pole, capped)
        nodes: Starting node count
        rtol: Agreement tolerance between successive node counts

    Returns:
        Approximation of f^(k)(s)
    """
    s = complex(s)
    if radius is None:
        radius = default_radius(f, s)
    elif f.nearest_pole_distance(s) <= radius:
        raise PoleInDisk(
            f"Declared pole of {f.name} within radius {radius} of {s}",
            center=s,
            radius=radius,
        )
    if k == 0:
        return f(s)
    nodes = setting("cauchy.nodes", nodes)
    rtol = setting("cauchy.rtol", rtol)
    max_nodes = setting("cauchy.max_nodes")
    nodes = max(nodes, 2 * k + 2)

    estimate, floor = _trapezoid(f, s, k, radius, nodes)
    while nodes < max_nodes:
        nodes *= 2
        refined, floor = _trapezoid(f, s, k, radius, nodes)
        if abs(refined - estimate) <= rtol * max(abs(refined), floor):
            return complex(refined)
        estimate = refined
    logger.warning(f"Cauchy derivative of {f.name} at {s} (k={k}) reached {nodes} nodes without settling")
    return complex(estimate)


def derivative_error_bound(eps: float, r: float, r_prime: float, k: int) -> float:
    """
    Sup bound of |f^(k) - g^(k)| on the disk of radius r, given
    |f - g| <= eps on the disk of radius r_prime with the same center.

    Returns:
        k! * 2^k * eps / (r_prime - r)^k
    """
    if r <= 0 or r >= r_prime:
        raise InvalidRadii(f"Need 0 < r < r_prime, got r={r}, r_prime={r_prime}")
    if eps < 0 or k < 0:
        raise ParamOutOfRange(f"Need eps >= 0 and k >= 0, got eps={eps}, k={k}")
    return math.factorial(k) * 2**k * eps / (r_prime - r) ** k
