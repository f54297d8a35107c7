"""
Numerical Rouche certificates on circles
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from core.exceptions import BoundaryZero, NonConvergence, PoleHit, TargetVanishesOnCircle
from core.utils.contour import LocalizedZero, winding_number
from core.utils.geometry import ComplexRect, Disk, region_from_dict
from core.utils.localize import localize_zeros, newton
from core.utils.numerics import setting

logger = logging.getLogger(__name__)

# Relative change in both extrema below which sampling counts as stable
STABLE_RTOL = 1e-3


@dataclass
class RoucheCertificate:
    """
    max |Z - A| and min |A| on the circle of `disk`

    passed is max_diff < min_target as sampled; a pass is only reported
    after the winding numbers of Z and A were computed and found equal.
    """

    disk: Disk
    tau: float
    max_diff: float
    min_target: float
    passed: bool
    samples: int
    zero_inside: Optional[LocalizedZero] = None
    winding_Z: Optional[int] = None
    winding_A: Optional[int] = None
    mapped_zero: Optional[complex] = None
    verified: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    @property
    def margin(self) -> float:
        return self.min_target - self.max_diff

    def to_dict(self) -> dict:
        from rouche.serializers import RoucheCertificateSerializer

        return dict(RoucheCertificateSerializer(self).data)

    @classmethod
    def from_dict(cls, data: dict) -> "RoucheCertificate":
        zero = data.get("zero_inside")
        mapped = data.get("mapped_zero")
        return cls(
            disk=region_from_dict(data["disk"]),
            tau=data["tau"],
            max_diff=data["max_diff"],
            min_target=data["min_target"],
            passed=data["pass"],
            samples=data["samples"],
            zero_inside=(
                LocalizedZero(complex(zero["re"], zero["im"]), zero["mult"], zero["residual"], zero["resolved"])
                if zero
                else None
            ),
            winding_Z=data.get("winding_Z"),
            winding_A=data.get("winding_A"),
            mapped_zero=complex(mapped["re"], mapped["im"]) if mapped else None,
            verified=data.get("verified"),
            notes=list(data.get("notes", [])),
        )


def _extrema(Z, A, disk: Disk, samples: int):
    pts = disk.points(samples)
    a = A.values(pts)
    if not np.all(np.isfinite(a)):
        raise TargetVanishesOnCircle(f"{A.name} has a pole on the circle of {disk}")
    min_target = float(np.min(np.abs(a)))
    if min_target <= setting("contour.boundary_threshold"):
        raise TargetVanishesOnCircle(f"min |{A.name}| = {min_target:.3e} on the circle of {disk}")
    z = Z.values(pts)
    if not np.all(np.isfinite(z)):
        return np.inf, min_target
    return float(np.max(np.abs(z - a))), min_target


def _stable(old, new) -> bool:
    return all(abs(n - o) <= STABLE_RTOL * max(abs(n), 1e-300) for o, n in zip(old, new))


def locate_zero_in_disk(f, disk: Disk, count: int) -> Optional[LocalizedZero]:
    """Newton from the center with the enclosed multiplicity, then quadrisection of the bounding square"""
    z, converged = newton(f, disk.center, multiplicity=max(count, 1))
    if converged and disk.contains(z):
        return LocalizedZero(location=z, multiplicity=count, residual=float(abs(f.values(z)[0])))
    c, r = disk.center, disk.radius
    square = ComplexRect(c.real - r, c.real + r, c.imag - r, c.imag + r)
    try:
        report = localize_zeros(f, square)
    except (BoundaryZero, NonConvergence) as exc:
        logger.warning(f"Could not localize the zero of {f.name} in {disk}: {exc}")
        return None
    inside = [zz for zz in report.zeros if disk.contains(zz.location)]
    return inside[0] if inside else None


def rouche_check(Z, A, disk: Disk, samples: Optional[int] = None, tau: float = 0.0) -> RoucheCertificate:
    """
    Sampled Rouche inequality max |Z - A| < min |A| on the circle of disk

    Sampling starts at `samples` points and doubles while the inequality
    holds until both extrema are stable. A failed sample set is final:
    more points can only raise max_diff and lower min_target.

    Args:
        Z: AnalyticFunction to certify
        A: Target with known zeros
        disk: Disk whose circle is sampled
        samples: Initial number of circle points
        tau: Shift recorded in the certificate

    Returns:
        RoucheCertificate; on a verified pass, zero_inside holds the zero of Z

    Raises:
        TargetVanishesOnCircle: min |A| on the circle is not positive
    """
    n = setting("rouche.circle_samples", samples)
    cap = setting("rouche.max_circle_samples")
    max_diff, min_target = _extrema(Z, A, disk, n)
    while max_diff < min_target and n < cap:
        refined = _extrema(Z, A, disk, 2 * n)
        n *= 2
        stable = _stable((max_diff, min_target), refined)
        max_diff, min_target = refined
        if stable:
            break

    cert = RoucheCertificate(disk=disk, tau=tau, max_diff=max_diff, min_target=min_target, passed=max_diff < min_target, samples=n)
    if not cert.passed:
        return cert

    try:
        cert.winding_Z = winding_number(Z, disk)
        cert.winding_A = winding_number(A, disk)
    except (BoundaryZero, NonConvergence) as exc:
        cert.passed = False
        cert.notes.append(f"winding check failed: {exc}")
        return cert
    if cert.winding_Z != cert.winding_A:
        cert.passed = False
        cert.notes.append(f"sampled inequality held but windings differ ({cert.winding_Z} vs {cert.winding_A})")
        logger.warning(f"Rouche pass at tau={tau:g} rejected: windings {cert.winding_Z} != {cert.winding_A}")
        return cert

    count = cert.winding_Z + Z.pole_order_inside(disk)
    if count > 0:
        try:
            cert.zero_inside = locate_zero_in_disk(Z, disk, count)
        except PoleHit as exc:
            cert.notes.append(f"zero localization hit a pole: {exc}")
    return cert
