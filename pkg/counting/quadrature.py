"""
Composite Gauss-Legendre quadrature along vertical lines
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from core.exceptions import QuadratureFailure
from core.utils.numerics import setting
from core.utils.parallel import pairwise_sum

logger = logging.getLogger(__name__)

MAX_HALVINGS = 20


@lru_cache(maxsize=8)
def _rule(nodes: int):
    return leggauss(nodes)


def _estimates(func: Callable, lo: np.ndarray, hi: np.ndarray, nodes: int):
    """Whole-panel and two-half estimates for every panel, one vectorized call"""
    x, w = _rule(nodes)
    mid = 0.5 * (lo + hi)
    bounds = [(lo, hi), (lo, mid), (mid, hi)]
    pts = np.concatenate([(0.5 * (b - a))[:, None] * x[None, :] + (0.5 * (a + b))[:, None] for a, b in bounds], axis=1)
    values = np.asarray(func(pts.ravel()), dtype=complex).reshape(pts.shape)
    if not np.all(np.isfinite(values)):
        raise QuadratureFailure("integrand is not finite on the path (pole or overflow)")
    k = len(x)
    whole = 0.5 * (hi - lo) * (values[:, :k] @ w)
    halves = 0.25 * (hi - lo) * (values[:, k : 2 * k] @ w + values[:, 2 * k :] @ w)
    return whole, halves


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    panel_width: Optional[float] = None,
    nodes: Optional[int] = None,
    tol: Optional[float] = None,
) -> complex:
    """
    Integral of func over [a, b]

    Panels of width panel_width are halved until the whole-panel and
    two-half estimates agree to tol (relative to max(1, |estimate|)).
    Panel contributions are summed in a fixed pairwise order.

    Args:
        func: Vectorized integrand of a real array
        a, b: Limits
        panel_width: Initial panel width
        nodes: Gauss-Legendre nodes per panel
        tol: Panel agreement tolerance

    Returns:
        complex integral

    Raises:
        QuadratureFailure: non-finite integrand or no agreement after repeated halving
    """
    panel_width = setting("counting.panel_width", panel_width)
    nodes = setting("counting.gauss_nodes", nodes)
    tol = setting("counting.panel_tol", tol)
    if b == a:
        return 0j
    count = max(1, math.ceil(abs(b - a) / panel_width))
    edges = np.linspace(a, b, count + 1)
    lo, hi = edges[:-1], edges[1:]
    accepted = []
    evaluations = 0
    for depth in range(MAX_HALVINGS + 1):
        whole, halves = _estimates(func, lo, hi, nodes)
        evaluations += 3 * nodes * len(lo)
        ok = np.abs(whole - halves) <= tol * np.maximum(1.0, np.abs(halves))
        accepted.extend(zip(lo[ok], halves[ok]))
        if ok.all():
            break
        logger.debug(f"quadrature: halving {int((~ok).sum())} panels at depth {depth + 1}")
        mid = 0.5 * (lo[~ok] + hi[~ok])
        lo, hi = np.concatenate([lo[~ok], mid]), np.concatenate([mid, hi[~ok]])
    else:
        raise QuadratureFailure(f"quadrature on [{a}, {b}] did not settle after {MAX_HALVINGS} halvings")
    accepted.sort(key=lambda item: item[0])
    logger.debug(f"quadrature on [{a:g}, {b:g}]: {len(accepted)} panels, {evaluations} evaluations")
    return complex(pairwise_sum([value for _, value in accepted]))


def line_integral(func: Callable[[np.ndarray], np.ndarray], sigma: float, t0: float, t1: float, **kwargs) -> complex:
    """Integral over t in [t0, t1] of func(sigma + i t)"""
    return integrate(lambda t: func(sigma + 1j * t), t0, t1, **kwargs)
