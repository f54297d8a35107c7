"""
Riemann zeta function, its derivatives and reciprocal by Euler-Maclaurin summation

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{j=1..nu} B_2j/(2j)! s(s+1)...(s+2j-2) N^(-s-2j+1) + R

Derivatives are taken term by term, so zeta^(k) costs the same as zeta.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from core.exceptions import NearZeroOfZeta, ParamOutOfRange, PoleAtOne
from core.utils.analytic import AnalyticFunction
from core.utils.geometry import ComplexRect
from core.utils.numerics import setting
from zeta.bernoulli import EM_COEFFICIENTS, MAX_TERMS

logger = logging.getLogger(__name__)

POLE_TOL = 1e-14
CHUNK = 512

# s(s+1)...(s+2j-2) for j = 1..MAX_TERMS, highest power first
_RISING = tuple(np.poly(-np.arange(2 * j - 1, dtype=float)) for j in range(1, MAX_TERMS + 1))

# Region on which the handles are declared valid
ZETA_DOMAIN = ComplexRect(-8.0, 12.0, -2500.0, 2500.0)


@dataclass(frozen=True)
class ZetaParams:
    """
    Euler-Maclaurin parameters.

    truncation_N=None picks N = max(10, ceil(|t|/2) + 10) per point.
    """

    truncation_N: Optional[int] = None
    bernoulli_terms: int = 12

    def __post_init__(self):
        if self.truncation_N is not None and self.truncation_N < 2:
            raise ParamOutOfRange(f"truncation_N must be >= 2, got {self.truncation_N}")
        if not 1 <= self.bernoulli_terms <= MAX_TERMS:
            raise ParamOutOfRange(f"bernoulli_terms must be in [1, {MAX_TERMS}], got {self.bernoulli_terms}")

    @classmethod
    def from_settings(cls) -> "ZetaParams":
        return cls(
            truncation_N=setting("zeta.truncation_N"),
            bernoulli_terms=setting("zeta.bernoulli_terms"),
        )

    def cutoff(self, t: np.ndarray) -> np.ndarray:
        if self.truncation_N is not None:
            return np.full(np.shape(t), self.truncation_N, dtype=np.int64)
        return np.maximum(10, np.ceil(np.abs(t) / 2).astype(np.int64) + 10)


def _resolve(params: Optional[ZetaParams]) -> ZetaParams:
    return params if params is not None else ZetaParams.from_settings()


def _correction(s: np.ndarray, N: np.ndarray, k: int, nu: int) -> np.ndarray:
    """Boundary and Bernoulli terms of the k-th derivative"""
    L = np.log(N.astype(float))
    n_pow = np.exp(-s * L)  # N^-s
    minus_L = -L

    # N^(1-s)/(s-1), Leibniz over N^(1-s) and (s-1)^-1
    pole_part = np.zeros_like(s)
    for i in range(k + 1):
        j = k - i
        pole_part += (
            math.comb(k, i)
            * minus_L**i
            * (-1) ** j
            * math.factorial(j)
            / (s - 1) ** (j + 1)
        )
    total = pole_part * n_pow * N + 0.5 * minus_L**k * n_pow

    for j in range(1, nu + 1):
        poly = _RISING[j - 1]
        weight = n_pow * N ** (-(2.0 * j - 1))
        acc = np.zeros_like(s)
        for i in range(min(k, len(poly) - 1) + 1):
            acc += math.comb(k, i) * np.polyval(np.polyder(poly, i) if i else poly, s) * minus_L ** (k - i)
        total += EM_COEFFICIENTS[j - 1] * acc * weight
    return total


def em_values(points, k: int = 0, params: Optional[ZetaParams] = None) -> np.ndarray:
    """
    zeta^(k) on an array of points, no pole check.

    Args:
        points: Complex array
        k: Derivative order
        params: ZetaParams (defaults from settings)

    Returns:
        Complex array of the same shape
    """
    params = _resolve(params)
    s = np.atleast_1d(np.asarray(points, dtype=complex))
    shape = s.shape
    s = s.ravel()
    out = np.empty_like(s)
    N_all = params.cutoff(s.imag)
    for start in range(0, len(s), CHUNK):
        sc = s[start : start + CHUNK]
        Nc = N_all[start : start + CHUNK]
        n = np.arange(1, int(Nc.max()), dtype=float)
        logn = np.log(n)
        terms = np.exp(-np.outer(sc, logn))
        if k:
            terms *= (-logn) ** k
        terms[n[None, :] >= Nc[:, None]] = 0
        out[start : start + CHUNK] = terms.sum(axis=1) + _correction(sc, Nc, k, params.bernoulli_terms)
    return out.reshape(shape)


def _check_pole(s) -> None:
    if np.any(np.abs(np.asarray(s) - 1) < POLE_TOL):
        raise PoleAtOne("zeta has a pole at s = 1")


def _scalar_or_array(s, values):
    return complex(values[0]) if np.ndim(s) == 0 else values


def zeta(s, params: Optional[ZetaParams] = None):
    """
    Riemann zeta function

    Args:
        s: Point or array of points, s != 1
        params: ZetaParams

    Returns:
        zeta(s) (complex, or array for array input)
    """
    _check_pole(s)
    return _scalar_or_array(s, em_values(s, 0, params))


def zeta_derivative(s, k: int, params: Optional[ZetaParams] = None):
    """k-th derivative of zeta by termwise differentiation (k >= 1)"""
    if k < 0:
        raise ParamOutOfRange(f"Derivative order must be >= 0, got {k}")
    _check_pole(s)
    return _scalar_or_array(s, em_values(s, k, params))


def reciprocal_values(points, params: Optional[ZetaParams] = None) -> np.ndarray:
    """1/zeta on an array without raising; 0 at s = 1, inf at exact zeros"""
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.zeros(pts.shape, dtype=complex)
    away = np.abs(pts - 1) >= POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        out[away] = 1.0 / em_values(pts[away], 0, params)
    return out


def zeta_reciprocal(s, params: Optional[ZetaParams] = None):
    """
    1/zeta(s) by direct division

    Raises:
        NearZeroOfZeta: |zeta(s)| <= 1e-12
    """
    pts = np.atleast_1d(np.asarray(s, dtype=complex))
    away = np.abs(pts - 1) >= POLE_TOL
    values = em_values(pts[away], 0, params)
    if np.any(np.abs(values) <= 1e-12):
        raise NearZeroOfZeta(f"|zeta(s)| <= 1e-12 near {pts[away][np.abs(values) <= 1e-12][0]}")
    out = np.zeros(pts.shape, dtype=complex)
    out[away] = 1.0 / values
    return _scalar_or_array(s, out)


def zeta_partial_summation(s: complex, N: Optional[int] = None, cutoff: int = 20000) -> complex:
    """
    zeta(s) from the partial-summation identity

        zeta(s) = sum_{n<=N} n^-s + N^(1-s)/(s-1) + s * int_N^inf ([u]-u) u^(-s-1) du

    The integral is summed exactly over unit intervals up to N + cutoff;
    the remainder uses the first two Euler-Maclaurin terms. Valid for Re(s) > 0.
    """
    s = complex(s)
    _check_pole(s)
    if N is None:
        N = int(ZetaParams().cutoff(np.array([s.imag]))[0])
    n = np.arange(1, N + 1, dtype=float)
    head = np.sum(np.exp(-s * np.log(n)))
    boundary = np.exp((1 - s) * np.log(N)) / (s - 1)

    m = np.arange(N, N + cutoff, dtype=float)
    lm, lm1 = np.log(m), np.log(m + 1)
    pieces = m * (np.exp(-s * lm) - np.exp(-s * lm1)) / s - (np.exp((1 - s) * lm1) - np.exp((1 - s) * lm)) / (1 - s)
    M = float(N + cutoff)
    tail = -np.exp(-s * np.log(M)) / (2 * s) + np.exp(-(s + 1) * np.log(M)) / 12
    return complex(head + boundary + s * (np.sum(pieces) + tail))


@lru_cache(maxsize=32)
def _handle(params: ZetaParams, order: int) -> AnalyticFunction:
    from dirichlet.series import ds_derivative, make_ordinary

    series = make_ordinary(np.ones(setting("dirichlet.default_terms")), shift=0.0, growth=(1.0, 0.0))
    if order:
        series = ds_derivative(series, order)
    name = "zeta" if order == 0 else f"zeta^({order})"
    return AnalyticFunction(
        evaluator=lambda pts: em_values(pts, order, params),
        name=name,
        max_derivative_order=64,
        poles=((1.0 + 0j, order + 1),),
        domain=ZETA_DOMAIN,
        derivative=lambda pts, k: em_values(pts, order + k, params),
        series=series,
        metadata={"kind": "zeta", "order": order},
    )


def zeta_function(params: Optional[ZetaParams] = None, order: int = 0) -> AnalyticFunction:
    """
    AnalyticFunction handle for zeta^(order)

    The handle has exact derivatives of every order, a pole of order
    order+1 at s = 1, and the partial zeta series attached for mean-square
    predictions.
    """
    return _handle(_resolve(params), order)
