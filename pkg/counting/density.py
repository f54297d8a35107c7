"""
Zero-density sweeps: N(T) in a vertical strip for a grid of heights
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from core.exceptions import ParamOutOfRange, ZetaLabError
from core.utils.contour import count_zeros_rect
from core.utils.geometry import ComplexRect
from core.utils.parallel import ParallelMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    residual: float
    points: int

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "residual": self.residual, "points": self.points}


def fit_line(T: Sequence[float], counts: Sequence[float]) -> Optional[LinearFit]:
    """Ordinary least squares count = slope*T + intercept; residual is the RMS misfit"""
    x = np.asarray(T, dtype=float)
    y = np.asarray(counts, dtype=float)
    if len(x) < 2 or np.ptp(x) == 0:
        return None
    slope, intercept, r_value, p_value, std_err = stats.linregress(x, y)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return LinearFit(float(slope), float(intercept), residual, len(x))


@dataclass
class DensitySweep:
    function: str
    strip: Tuple[float, float]
    T_grid: List[float]
    counts: List[Optional[int]]
    t_min: float = 0.0
    errors: List[Optional[str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def completed(self) -> List[Tuple[float, int]]:
        return [(T, c) for T, c in zip(self.T_grid, self.counts) if c is not None]

    @property
    def fit(self) -> Optional[LinearFit]:
        done = self.completed
        return fit_line([T for T, _ in done], [c for _, c in done])

    def to_frame(self) -> pd.DataFrame:
        """One row per grid point: T, count, slope_so_far (fit over the rows up to this one)"""
        rows = []
        for i, (T, count) in enumerate(zip(self.T_grid, self.counts)):
            prefix = [(t, c) for t, c in zip(self.T_grid[: i + 1], self.counts[: i + 1]) if c is not None]
            fit = fit_line([t for t, _ in prefix], [c for _, c in prefix])
            rows.append(
                {
                    "T": T,
                    "count": count,
                    "slope_so_far": fit.slope if fit else np.nan,
                    "error": self.errors[i] if self.errors else None,
                }
            )
        frame = pd.DataFrame(rows, columns=["T", "count", "slope_so_far", "error"])
        frame["count"] = frame["count"].astype("Int64")
        return frame

    def to_dict(self) -> dict:
        fit = self.fit
        return {
            "function": self.function,
            "strip": list(self.strip),
            "t_min": self.t_min,
            "T": list(self.T_grid),
            "counts": list(self.counts),
            "errors": list(self.errors),
            "fit": fit.to_dict() if fit else None,
            "notes": list(self.notes),
        }


def _count_job(f, strip, t_min):
    def job(T):
        try:
            report = count_zeros_rect(f, ComplexRect(strip[0], strip[1], t_min, T))
            return report.count, None
        except ZetaLabError as exc:
            logger.error(f"density sweep of {f.name} failed at T={T:g}: {exc}")
            return None, f"{exc.__class__.__name__}: {exc}"

    return job


def density_sweep(
    f,
    strip: Tuple[float, float],
    T_grid: Sequence[float],
    workers: Optional[int] = None,
    t_min: float = 0.0,
) -> DensitySweep:
    """
    Zero counts of f in (sigma_1, sigma_2) x (t_min, T) for each T

    Args:
        f: AnalyticFunction
        strip: (sigma_1, sigma_2)
        T_grid: Increasing heights
        workers: Worker processes; counts do not depend on it
        t_min: Lower edge shared by all rectangles

    Returns:
        DensitySweep; failed grid points keep count None and their error
    """
    sigma_1, sigma_2 = float(strip[0]), float(strip[1])
    if not sigma_1 < sigma_2:
        raise ParamOutOfRange(f"strip needs sigma_1 < sigma_2, got ({sigma_1}, {sigma_2})")
    grid = [float(T) for T in T_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] <= t_min:
        raise ParamOutOfRange("T grid must be non-empty, increasing and above t_min")

    logger.info(f"density sweep of {f.name} in ({sigma_1:g}, {sigma_2:g}) for {len(grid)} heights")
    results = ParallelMap(workers).map(_count_job(f, (sigma_1, sigma_2), t_min), grid)
    sweep = DensitySweep(
        function=f.name,
        strip=(sigma_1, sigma_2),
        T_grid=grid,
        counts=[count for count, _ in results],
        t_min=t_min,
        errors=[error for _, error in results],
    )
    done = [c for _, c in sweep.completed]
    if any(b < a for a, b in zip(done, done[1:])):
        sweep.notes.append("counts decrease with T: boundary perturbation or a precision problem")
        logger.warning(f"density sweep of {f.name}: non-monotone counts {done}")
    fit = sweep.fit
    if fit:
        logger.info(f"density sweep of {f.name}: slope {fit.slope:.4g}, residual {fit.residual:.3g}")
    return sweep
