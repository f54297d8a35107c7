"""
Classical counting formulas for zeros of zeta derivatives and their measured counterparts
"""
import logging
import math
from typing import Optional, Tuple

from scipy import integrate

from core.exceptions import IncompleteZeroSet, ParamOutOfRange, QuadratureFailure
from core.utils.contour import ZeroReport, count_zeros_rect
from core.utils.geometry import ComplexRect
from core.utils.localize import localize_zeros
from core.utils.numerics import setting
from zeta.engine import zeta_function

logger = logging.getLogger(__name__)


def li(x: float) -> float:
    """Li(x) = integral from 2 to x of dy / log y, for x > 1"""
    if x <= 1:
        raise ParamOutOfRange(f"Li needs x > 1, got {x}")
    value, error = integrate.quad(lambda y: 1.0 / math.log(y), 2.0, x, epsabs=1e-10, epsrel=1e-10, limit=200)
    if not math.isfinite(value) or error > 1e-6 * max(1.0, abs(value)):
        raise QuadratureFailure(f"Li({x}) did not converge (error estimate {error:.2e})")
    return value


class ZeroCounting:
    """Main terms of the classical zero-counting formulas for zeta^(k)"""

    @staticmethod
    def berndt_main_term(T: float) -> float:
        """
        T log T / 2 pi - (1 + log 4 pi) T / 2 pi (the same for every k >= 1)

        Args:
            T: Height, T > 1

        Returns:
            float
        """
        if T <= 1:
            raise ParamOutOfRange(f"T must exceed 1, got {T}")
        return T * math.log(T) / (2 * math.pi) - (1 + math.log(4 * math.pi)) * T / (2 * math.pi)

    @staticmethod
    def lm_predicted(k: int, T: float) -> float:
        """k T log log(T/2pi) - 2 pi k Li(T/2pi) + (log 2 - 2k log log 2) T/2"""
        x = T / (2 * math.pi)
        if x <= 1:
            raise ParamOutOfRange(f"T must exceed 2 pi, got {T}")
        return (
            k * T * math.log(math.log(x))
            - 2 * math.pi * k * li(x)
            + (math.log(2) - 2 * k * math.log(math.log(2))) * T / 2
        )

    @staticmethod
    def band(T: float, factor: Optional[float] = None) -> float:
        """Half-width of the O(log T) acceptance band"""
        return setting("counting.band_log_factor", factor) * math.log(T)


berndt_main_term = ZeroCounting.berndt_main_term


def berndt_rectangle(T: float, t_min: Optional[float] = None) -> ComplexRect:
    """(sigma_lo, sigma_hi) x (t_min, T), the window holding the complex zeros of zeta^(k)"""
    sigma_lo, sigma_hi = setting("counting.berndt_sigma")
    t_min = setting("counting.real_axis_offset", t_min)
    return ComplexRect(sigma_lo, sigma_hi, t_min, T)


def berndt_count(k: int, T: float, t_min: Optional[float] = None) -> dict:
    """
    Measured N_k(T) beside the main term

    Returns:
        dict with count, main_term, ratio and the rectangle used
    """
    if k < 1:
        raise ParamOutOfRange(f"k must be >= 1, got {k}")
    rect = berndt_rectangle(T, t_min)
    report = count_zeros_rect(zeta_function(order=k), rect)
    main = berndt_main_term(T)
    logger.info(f"N_{k}({T:g}) = {report.count}, main term {main:.3f}")
    return {
        "k": k,
        "T": T,
        "count": report.count,
        "main_term": main,
        "ratio": report.count / main if main > 0 else None,
        "region": report.region.to_dict(),
        "adjustment": report.adjustment,
    }


def speiser_check(k: int = 1, sigma_max: float = 0.5, T: float = 200.0, t_min: float = 0.0) -> ZeroReport:
    """Zeros of zeta^(k) in (0, sigma_max) x (t_min, T); none are expected left of the critical line"""
    if not 0 < sigma_max:
        raise ParamOutOfRange(f"sigma_max must be positive, got {sigma_max}")
    report = count_zeros_rect(zeta_function(order=k), ComplexRect(0.0, sigma_max, t_min, T))
    if report.count:
        logger.warning(f"speiser check: {report.count} zeros of zeta^({k}) in (0, {sigma_max}) x ({t_min}, {T})")
    return report


def derivative_zeros(k: int, T: float, t_min: Optional[float] = None) -> ZeroReport:
    """Localized zeros of zeta^(k) in the counting rectangle up to height T"""
    return localize_zeros(zeta_function(order=k), berndt_rectangle(T, t_min))


def lm_weighted_sum(k: int, T: float, zeros: ZeroReport) -> Tuple[float, float]:
    """
    2 pi sum over zeros with 0 < gamma <= T of (beta - 1/2), beside its main terms

    Args:
        k: Derivative order
        T: Height
        zeros: Localized zeros of zeta^(k) (multiplicities count)

    Returns:
        (empirical, predicted)

    Raises:
        IncompleteZeroSet: the report holds unresolved clusters
    """
    if not zeros.resolved:
        raise IncompleteZeroSet(f"{sum(1 for z in zeros.zeros if not z.resolved)} unresolved clusters in the zero report")
    total = sum(z.multiplicity * (z.location.real - 0.5) for z in zeros.zeros if 0 < z.location.imag <= T)
    empirical = 2 * math.pi * total
    predicted = ZeroCounting.lm_predicted(k, T)
    logger.info(f"weighted sum k={k}, T={T:g}: empirical {empirical:.4f}, predicted {predicted:.4f}")
    return empirical, predicted
