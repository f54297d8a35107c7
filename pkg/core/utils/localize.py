"""
Zero localization: quadrisection, Newton refinement and multiplicity detection
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from core.exceptions import BoundaryZero, ClusterUnresolved, NonConvergence
from core.utils.contour import LocalizedZero, ZeroReport, count_zeros_rect, trace_contour
from core.utils.geometry import ComplexRect, Disk
from core.utils.numerics import setting

logger = logging.getLogger(__name__)

# Alternative quadrisection points, tried in order when a split line hits a zero
SPLIT_FRACTIONS = (0.5, 0.4871, 0.5127, 0.4623, 0.5391)


def newton(
    f,
    start: complex,
    multiplicity: int = 1,
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
) -> Tuple[complex, bool]:
    """
    Modified Newton iteration z <- z - m f(z)/f'(z)

    Near a multiple zero the steps stall at rounding level; the last
    iterate is then accepted when |f| <= tol.

    Returns:
        (final point, converged flag)
    """
    max_iter = setting("localize.newton_max_iter", max_iter)
    tol = setting("localize.tol", tol)
    z = complex(start)
    for _ in range(max_iter):
        try:
            value = f(z)
            slope = f.deriv(z, 1)
        except Exception as exc:  # pole or evaluation failure ends the run
            logger.debug(f"Newton for {f.name} stopped at {z}: {exc}")
            return z, False
        if value == 0:
            return z, True
        if slope == 0 or not np.isfinite(slope) or not np.isfinite(value):
            return z, abs(value) <= tol
        step = multiplicity * value / slope
        z = z - step
        if abs(step) <= 1e-14 * (1 + abs(z)):
            return z, True
    return z, _residual(f, z) <= tol


def _residual(f, z: complex) -> float:
    try:
        return float(abs(f(z)))
    except Exception:
        return np.inf


def _split_counts(f, rect: ComplexRect, total: int):
    """Quadrisect rect into children whose zero counts sum to total"""
    for fraction in SPLIT_FRACTIONS:
        children = rect.split(fraction)
        counts = []
        try:
            for child in children:
                counts.append(trace_contour(f, child).winding + f.pole_order_inside(child))
        except (BoundaryZero, NonConvergence) as exc:
            logger.debug(f"Split of {rect} at {fraction} rejected: {exc}")
            continue
        if sum(counts) == total and min(counts) >= 0:
            return list(zip(children, counts))
        logger.debug(f"Split of {rect} at {fraction} gave counts {counts}, expected {total}")
    return None


def tight_multiplicity(f, z: complex, radius: float, floor: float) -> Tuple[int, float]:
    """
    Winding number of f on small disks around z, shrinking from radius
    down to floor while the circle stays clear of the zero.

    Returns:
        (winding number of the smallest valid disk, its radius)
    """
    winding, used = 0, radius
    r = radius
    while r >= floor:
        try:
            w = trace_contour(f, Disk(z, r)).winding
        except (BoundaryZero, NonConvergence):
            break
        if w <= 0:
            break
        winding, used = w, r
        r /= 4
    return winding, used


def _in_rect(rect: ComplexRect, z: complex) -> bool:
    margin = 1e-9 * max(1.0, rect.diameter)
    return rect.expanded(margin).contains(z, strict=False)


def localize_zeros(
    f,
    region: ComplexRect,
    tol: Optional[float] = None,
    strict: bool = False,
    base_report: Optional[ZeroReport] = None,
) -> ZeroReport:
    """
    Count and locate the zeros of f in a rectangle

    Subregions are quadrisected until each holds one zero cluster. Each
    cluster is refined by Newton's method (modified for the cluster size)
    and its multiplicity is the winding number of a tight isolating disk.

    Args:
        f: AnalyticFunction
        region: ComplexRect
        tol: Residual tolerance in |f|
        strict: Raise ClusterUnresolved instead of reporting an unresolved zero
        base_report: Precomputed count_zeros_rect result for region

    Returns:
        ZeroReport with the zeros list populated
    """
    tol = setting("localize.tol", tol)
    max_depth = setting("localize.max_depth")
    report = base_report or count_zeros_rect(f, region)
    if report.count <= 0:
        return report

    floor = max(10 * tol, 1e-12)
    cluster_floor = max(1e3 * tol, 1e-7)
    zeros: List[LocalizedZero] = []
    stack = [(report.region, report.count, 0)]

    while stack:
        rect, count, depth = stack.pop()
        if count <= 0:
            continue
        z, converged = newton(f, rect.center, multiplicity=count, tol=tol)
        residual = _residual(f, z) if converged else np.inf
        if converged and _in_rect(rect, z) and residual <= tol:
            if count == 1:
                zeros.append(LocalizedZero(location=z, multiplicity=1, residual=residual))
                continue
            radius = 0.5 * min(rect.width, rect.height)
            mult, used = tight_multiplicity(f, z, radius, floor)
            if mult == count:
                logger.debug(f"Multiple zero of {f.name} at {z}: multiplicity {mult} (disk radius {used:.2e})")
                zeros.append(LocalizedZero(location=z, multiplicity=mult, residual=residual))
                continue

        if rect.diameter < cluster_floor or depth >= max_depth:
            message = f"Cluster of {count} zeros of {f.name} near {rect.center} could not be separated"
            if strict:
                raise ClusterUnresolved(message, region=rect, count=count)
            logger.warning(message)
            zeros.append(
                LocalizedZero(location=rect.center, multiplicity=count, residual=_residual(f, rect.center), resolved=False)
            )
            continue

        children = _split_counts(f, rect, count)
        if children is None:
            message = f"Could not subdivide {rect} holding {count} zeros of {f.name}"
            if strict:
                raise ClusterUnresolved(message, region=rect, count=count)
            logger.warning(message)
            zeros.append(
                LocalizedZero(location=rect.center, multiplicity=count, residual=_residual(f, rect.center), resolved=False)
            )
            continue
        for child, child_count in children:
            stack.append((child, child_count, depth + 1))

    zeros.sort(key=lambda zz: (zz.location.imag, zz.location.real))
    report.zeros = zeros
    if not report.resolved:
        report.notes.append("unresolved clusters reported as multiple zeros")
    return report
