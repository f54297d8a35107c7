"""
Mean values of zeta-type functions along vertical lines
"""
import logging
from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from core.exceptions import HypothesisViolation, ParamOutOfRange
from counting.quadrature import integrate, line_integral
from dirichlet.series import mean_square_predicted
from zeta.engine import em_values, zeta_derivative

logger = logging.getLogger(__name__)

Number = Union[float, complex]


@dataclass
class MeanValueResult:
    kind: str
    T: float
    integral_over_T: Number
    predicted: Optional[Number] = None
    rel_error: Optional[float] = None
    sigma: Optional[float] = None
    eta: Optional[float] = None
    theta: Optional[float] = None
    u: Optional[int] = None
    v: Optional[int] = None
    predicted_tail: Optional[float] = None

    def __post_init__(self):
        if self.predicted is not None and self.predicted != 0:
            self.rel_error = float(abs(self.integral_over_T - self.predicted) / abs(self.predicted))

    def to_dict(self) -> dict:
        data = asdict(self)
        for key in ("integral_over_T", "predicted"):
            value = data[key]
            if isinstance(value, complex):
                data[key] = {"re": value.real, "im": value.imag}
        return data


def mean_square_integral(f, sigma: float, T: float, t_min: float = 0.0) -> MeanValueResult:
    """
    (1/T) * integral over [t_min, T] of |f(sigma + it)|^2

    The prediction is the Carlson mean square of f.series when f carries one.

    Args:
        f: AnalyticFunction without poles on the segment
        sigma: Abscissa, > 1/2
        T: Height

    Returns:
        MeanValueResult
    """
    if not sigma > 0.5:
        raise ParamOutOfRange(f"sigma must exceed 1/2, got {sigma}")
    if not T > t_min:
        raise ParamOutOfRange(f"T must exceed {t_min}, got {T}")
    logger.info(f"mean square of {f.name} on sigma={sigma:g}, t in [{t_min:g}, {T:g}]")
    value = line_integral(lambda s: np.abs(f.values(s)) ** 2, sigma, t_min, T).real / T
    predicted = mean_square_predicted(f.series, sigma) if f.series is not None else None
    result = MeanValueResult(
        kind="mean_square",
        T=T,
        integral_over_T=float(value),
        sigma=sigma,
        predicted=predicted.value if predicted else None,
        predicted_tail=predicted.tail_bound if predicted else None,
    )
    logger.info(f"mean square of {f.name}: {value:.6g} (predicted {result.predicted})")
    return result


def ingham_integral(u: int, v: int, eta: float, theta: float, T: float) -> MeanValueResult:
    """
    (1/T) * integral over [1, T] of zeta^(u)(eta + it) zeta^(v)(theta - it), against zeta^(u+v)(eta + theta)

    Raises:
        HypothesisViolation: unless eta, theta > -1/2 and eta + theta > 1
    """
    if not (eta > -0.5 and theta > -0.5 and eta + theta > 1):
        raise HypothesisViolation(f"need eta, theta > -1/2 and eta + theta > 1, got eta={eta}, theta={theta}")
    if u < 0 or v < 0:
        raise ParamOutOfRange("derivative orders must be non-negative")
    if not T > 1:
        raise ParamOutOfRange(f"T must exceed 1, got {T}")

    def integrand(t):
        return em_values(eta + 1j * t, u) * em_values(theta - 1j * t, v)

    logger.info(f"Ingham integral u={u}, v={v}, eta={eta:g}, theta={theta:g}, T={T:g}")
    value = integrate(integrand, 1.0, T) / T
    predicted = zeta_derivative(eta + theta, u + v)
    return MeanValueResult(
        kind="ingham",
        T=T,
        integral_over_T=complex(value),
        predicted=complex(predicted),
        eta=eta,
        theta=theta,
        u=u,
        v=v,
    )
