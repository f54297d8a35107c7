"""
Argument-principle machinery: winding numbers and zero counts
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from core.exceptions import BoundaryZero, NonConvergence, PoleHit
from core.utils.geometry import ComplexRect, Disk
from core.utils.numerics import setting

logger = logging.getLogger(__name__)

Region = Union[ComplexRect, Disk]


@dataclass
class LocalizedZero:
    location: complex
    multiplicity: int
    residual: float
    resolved: bool = True


@dataclass
class ZeroReport:
    """Result of counting (and optionally localizing) zeros in a region"""

    region: Region
    count: int
    zeros: List[LocalizedZero] = field(default_factory=list)
    boundary_min_modulus: float = np.inf
    samples_used: int = 0
    adjustment: float = 0.0
    requested_region: Optional[Region] = None
    notes: List[str] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return all(z.resolved for z in self.zeros)

    def to_dict(self) -> dict:
        from core.serializers import ZeroReportSerializer

        return dict(ZeroReportSerializer(self).data)


@dataclass
class ContourTrace:
    winding: int
    raw_turns: float
    min_modulus: float
    samples: int


def _rect_path(rect: ComplexRect):
    corners = np.array(rect.corners + (rect.corners[0],))

    def path(u: np.ndarray) -> np.ndarray:
        scaled = 4.0 * u
        edge = np.minimum(scaled.astype(int), 3)
        frac = scaled - edge
        return corners[edge] + frac * (corners[edge + 1] - corners[edge])

    return path


def _disk_path(disk: Disk):
    def path(u: np.ndarray) -> np.ndarray:
        return disk.center + disk.radius * np.exp(2j * np.pi * u)

    return path


def _sample(f, points: np.ndarray, boundary) -> np.ndarray:
    try:
        return f.values(points)
    except PoleHit:
        raise BoundaryZero(f"{f.name} has a pole on the contour", region=boundary)


def _edge_nodes(boundary: Region, initial_samples: int, per_unit: float) -> np.ndarray:
    """
    Path parameters of the starting grid, without the closing point.

    Each of the four edges (quarter circles for a disk) gets at least
    initial_samples nodes and at least per_unit * length * log(2 + |t|).
    """
    if isinstance(boundary, ComplexRect):
        height = max(abs(boundary.t_min), abs(boundary.t_max))
        lengths = (boundary.width, boundary.height, boundary.width, boundary.height)
    else:
        height = abs(complex(boundary.center).imag) + boundary.radius
        lengths = (np.pi * boundary.radius / 2,) * 4
    scale = np.log(2.0 + height)
    pieces = []
    for edge, length in enumerate(lengths):
        n = max(int(initial_samples), int(np.ceil(per_unit * length * scale)))
        pieces.append((edge + np.arange(n) / n) / 4.0)
    return np.concatenate(pieces)


def _refine(f, boundary: Region, path, u: np.ndarray, budget: int, threshold: float) -> ContourTrace:
    if len(u) > budget:
        raise NonConvergence(
            f"Contour grid for {f.name} needs {len(u)} samples, budget is {budget}",
            region=boundary,
        )
    vals = _sample(f, path(u), boundary)
    u = np.append(u, 1.0)
    vals = np.append(vals, vals[0])

    while True:
        moduli = np.abs(vals)
        if not np.all(np.isfinite(vals)):
            raise BoundaryZero(f"{f.name} is singular on the contour", region=boundary)
        min_modulus = float(moduli.min())
        if min_modulus < threshold:
            raise BoundaryZero(
                f"|{f.name}| = {min_modulus:.3e} on the contour (threshold {threshold:g})",
                region=boundary,
                min_modulus=min_modulus,
            )
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(dphi) >= np.pi / 2)[0]
        if bad.size == 0:
            break
        if len(u) + bad.size > budget:
            raise NonConvergence(
                f"Contour refinement for {f.name} exceeded budget of {budget} samples",
                region=boundary,
            )
        mid_u = (u[bad] + u[bad + 1]) / 2
        mid_vals = _sample(f, path(mid_u), boundary)
        u = np.insert(u, bad + 1, mid_u)
        vals = np.insert(vals, bad + 1, mid_vals)
        logger.debug(f"Refined {bad.size} contour segments for {f.name}, now {len(u) - 1} samples")

    raw_turns = float(np.sum(dphi) / (2 * np.pi))
    winding = int(np.rint(raw_turns))
    if abs(raw_turns - winding) >= 0.25:
        raise NonConvergence(f"Phase sum {raw_turns:.4f} turns is not near an integer", region=boundary)
    return ContourTrace(winding=winding, raw_turns=raw_turns, min_modulus=min_modulus, samples=len(u) - 1)


def trace_contour(
    f,
    boundary: Region,
    initial_samples: Optional[int] = None,
    budget: Optional[int] = None,
    threshold: Optional[float] = None,
    per_unit: Optional[float] = None,
) -> ContourTrace:
    """
    Follow arg f along the positively oriented boundary.

    The starting grid grows with edge length and height. Segments whose
    phase jump reaches pi/2 are bisected until every consecutive pair of
    samples differs by less than pi/2. The whole grid is then doubled and
    traced again until two successive windings agree.

    Args:
        f: AnalyticFunction
        boundary: ComplexRect or Disk
        initial_samples: Minimum samples per edge (a disk counts as four edges)
        budget: Hard limit on samples in one pass
        threshold: Smallest admissible |f| on the contour
        per_unit: Samples per unit length, scaled by log(2 + |t|)

    Raises:
        BoundaryZero: a sample is within threshold of a zero, or on a pole
        NonConvergence: the sample budget is exhausted before two passes agree,
            or the phase sum is not within a quarter turn of an integer
    """
    initial_samples = setting("contour.initial_samples", initial_samples)
    budget = setting("contour.sample_budget", budget)
    threshold = setting("contour.boundary_threshold", threshold)
    per_unit = setting("contour.samples_per_unit", per_unit)

    path = _rect_path(boundary) if isinstance(boundary, ComplexRect) else _disk_path(boundary)
    trace = _refine(f, boundary, path, _edge_nodes(boundary, initial_samples, per_unit), budget, threshold)
    while True:
        initial_samples *= 2
        per_unit *= 2
        finer = _refine(f, boundary, path, _edge_nodes(boundary, initial_samples, per_unit), budget, threshold)
        if finer.winding == trace.winding:
            return finer
        logger.warning(
            f"Winding of {f.name} changed from {trace.winding} to {finer.winding} on doubling; refining again"
        )
        trace = finer


def winding_number(f, boundary: Region, initial_samples: Optional[int] = None, budget: Optional[int] = None) -> int:
    """
    Winding number of f around 0 along the positively oriented boundary

    Args:
        f: AnalyticFunction with no zero or pole on the boundary
        boundary: ComplexRect or Disk
        initial_samples: Minimum samples per edge (a disk counts as four edges)
        budget: Hard limit on samples in one pass

    Returns:
        Integer winding number (zeros minus poles inside)
    """
    return trace_contour(f, boundary, initial_samples=initial_samples, budget=budget).winding


def argument_change_count(f, rect: ComplexRect) -> int:
    """Total change of arg f around rect divided by 2 pi, with no pole correction"""
    return trace_contour(f, rect).winding


def _count_with_perturbation(f, region: Region, expand) -> ZeroReport:
    attempts = [0.0] + list(setting("contour.perturbations"))
    last_error = None
    for delta in attempts:
        current = expand(region, delta) if delta else region
        try:
            trace = trace_contour(f, current)
        except BoundaryZero as exc:
            logger.warning(f"Boundary hit counting zeros of {f.name} (offset {delta:g}): {exc}")
            last_error = exc
            continue
        poles_inside = f.pole_order_inside(current)
        report = ZeroReport(
            region=current,
            count=trace.winding + poles_inside,
            boundary_min_modulus=trace.min_modulus,
            samples_used=trace.samples,
            adjustment=delta,
            requested_region=region,
        )
        if delta:
            report.notes.append(f"boundary perturbed outward by {delta:g}")
        if report.count < 0:
            if f.poles:
                raise NonConvergence(
                    f"Negative zero count {report.count} for {f.name} in {current} despite declared poles",
                    region=current,
                )
            report.notes.append("negative count: f has poles inside that are not declared")
            logger.warning(f"Negative zero count for {f.name} in {region}; check declared poles")
        return report
    raise BoundaryZero(
        f"Zero or pole of {f.name} on the boundary after {len(attempts) - 1} perturbations",
        region=region,
    ) from last_error


def count_zeros_rect(f, region: ComplexRect) -> ZeroReport:
    """
    Count zeros (with multiplicity) of f in a rectangle

    count = winding number + total order of declared poles inside. If the
    boundary passes through a zero or pole the rectangle is widened by the
    configured offsets in turn and the adjustment is recorded in the report.

    Args:
        f: AnalyticFunction analytic on the closed rectangle except declared poles
        region: ComplexRect

    Returns:
        ZeroReport with an empty zeros list
    """
    report = _count_with_perturbation(f, region, lambda r, d: r.expanded(d))
    logger.debug(f"{f.name}: {report.count} zeros in {report.region} ({report.samples_used} samples)")
    return report


def count_zeros_disk(f, disk: Disk) -> ZeroReport:
    """Disk version of count_zeros_rect; perturbation widens the radius"""
    return _count_with_perturbation(f, disk, lambda d, delta: d.with_radius(d.radius + delta))
