"""
Regions in the complex plane: rectangles and disks
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.exceptions import InvalidRadii, ParamOutOfRange


@dataclass(frozen=True)
class ComplexRect:
    """Closed rectangle [sigma_min, sigma_max] x [t_min, t_max]"""

    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float

    def __post_init__(self):
        if not self.sigma_min < self.sigma_max:
            raise ParamOutOfRange(f"sigma_min must be < sigma_max, got {self.sigma_min}, {self.sigma_max}")
        if not self.t_min < self.t_max:
            raise ParamOutOfRange(f"t_min must be < t_max, got {self.t_min}, {self.t_max}")

    @property
    def corners(self) -> Tuple[complex, complex, complex, complex]:
        """Corners in positive (counter-clockwise) order starting bottom-left"""
        return (
            complex(self.sigma_min, self.t_min),
            complex(self.sigma_max, self.t_min),
            complex(self.sigma_max, self.t_max),
            complex(self.sigma_min, self.t_max),
        )

    @property
    def center(self) -> complex:
        return complex((self.sigma_min + self.sigma_max) / 2, (self.t_min + self.t_max) / 2)

    @property
    def width(self) -> float:
        return self.sigma_max - self.sigma_min

    @property
    def height(self) -> float:
        return self.t_max - self.t_min

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.width, self.height))

    def contains(self, s: complex, strict: bool = True) -> bool:
        if strict:
            return self.sigma_min < s.real < self.sigma_max and self.t_min < s.imag < self.t_max
        return self.sigma_min <= s.real <= self.sigma_max and self.t_min <= s.imag <= self.t_max

    def distance_to_boundary(self, s: complex) -> float:
        return min(
            s.real - self.sigma_min,
            self.sigma_max - s.real,
            s.imag - self.t_min,
            self.t_max - s.imag,
        )

    def expanded(self, delta: float) -> "ComplexRect":
        return ComplexRect(
            self.sigma_min - delta,
            self.sigma_max + delta,
            self.t_min - delta,
            self.t_max + delta,
        )

    def split(self, fraction: float = 0.5) -> Tuple["ComplexRect", ...]:
        """Quadrisection at the given fraction of width and height"""
        sm = self.sigma_min + fraction * self.width
        tm = self.t_min + fraction * self.height
        return (
            ComplexRect(self.sigma_min, sm, self.t_min, tm),
            ComplexRect(sm, self.sigma_max, self.t_min, tm),
            ComplexRect(sm, self.sigma_max, tm, self.t_max),
            ComplexRect(self.sigma_min, sm, tm, self.t_max),
        )

    def to_dict(self) -> dict:
        return {
            "type": "rect",
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "t_min": self.t_min,
            "t_max": self.t_max,
        }


@dataclass(frozen=True)
class Disk:
    """Closed disk |s - center| <= radius"""

    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidRadii(f"Disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", complex(self.center))

    def contains(self, s: complex, strict: bool = True) -> bool:
        d = abs(s - self.center)
        return d < self.radius if strict else d <= self.radius

    def distance_to_boundary(self, s: complex) -> float:
        return self.radius - abs(s - self.center)

    def with_radius(self, radius: float) -> "Disk":
        return Disk(self.center, radius)

    def shifted(self, offset: complex) -> "Disk":
        return Disk(self.center + offset, self.radius)

    def points(self, samples: int) -> np.ndarray:
        theta = 2 * np.pi * np.arange(samples) / samples
        return self.center + self.radius * np.exp(1j * theta)

    def to_dict(self) -> dict:
        return {
            "type": "disk",
            "center_re": self.center.real,
            "center_im": self.center.imag,
            "radius": self.radius,
        }


def region_from_dict(data: dict):
    """Rebuild a ComplexRect or Disk from its to_dict() form"""
    if data.get("type") == "disk":
        return Disk(complex(data["center_re"], data["center_im"]), data["radius"])
    return ComplexRect(data["sigma_min"], data["sigma_max"], data["t_min"], data["t_max"])
