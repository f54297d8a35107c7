"""
The ring of general Dirichlet series sum a_n e^(-lambda_n s)

Series are immutable: every operation returns a new series. Exponents are
kept sorted and strictly increasing; exponents closer than the merge
tolerance are combined by adding their coefficients.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from core.exceptions import BudgetExceeded, GrowthViolation, ParamOutOfRange
from core.utils.numerics import setting
from dirichlet.tails import EXACT, ProductTail, TailBound, TailMajorant, combine_sum

logger = logging.getLogger(__name__)

CHUNK = 128


class Evaluation(NamedTuple):
    value: complex
    tail_bound: float


class MeanSquare(NamedTuple):
    value: float
    tail_bound: float


def _merge(coeffs: np.ndarray, exponents: np.ndarray, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    order = np.argsort(exponents, kind="stable")
    lam = exponents[order]
    a = coeffs[order]
    if len(lam) < 2:
        return a, lam
    gaps = np.diff(lam) > tol * np.maximum(1.0, np.abs(lam[1:]))
    starts = np.concatenate(([0], np.nonzero(gaps)[0] + 1))
    return np.add.reduceat(a, starts), lam[starts]


@dataclass(frozen=True, eq=False)
class GeneralDirichletSeries:
    """
    Truncated general Dirichlet series with a tail bound.

    Attributes:
        coeffs: complex a_n
        exponents: real lambda_n, strictly increasing
        tail: bound on the dropped terms
        label: free-form description used in reports
    """

    coeffs: np.ndarray
    exponents: np.ndarray
    tail: TailBound = EXACT
    label: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex).ravel()
        exponents = np.array(self.exponents, dtype=float).ravel()
        if coeffs.shape != exponents.shape:
            raise ParamOutOfRange("coefficient and exponent counts differ")
        if len(exponents) > 1 and not np.all(np.diff(exponents) > 0):
            raise ParamOutOfRange("exponents must be strictly increasing; use from_terms to merge")
        with np.errstate(over="ignore"):
            guard = np.sum(np.abs(coeffs) * np.exp(-exponents * 0.51))
        if not np.isfinite(guard):
            raise ParamOutOfRange("series is not finite at sigma = 0.51")
        coeffs.setflags(write=False)
        exponents.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "exponents", exponents)

    @classmethod
    def from_terms(
        cls,
        terms: Iterable[Tuple[complex, float]],
        tail: TailBound = EXACT,
        label: str = "",
        merge_tol: Optional[float] = None,
    ) -> "GeneralDirichletSeries":
        """Build from (a, lambda) pairs in any order, merging equal exponents"""
        terms = list(terms)
        coeffs = np.array([a for a, _ in terms], dtype=complex)
        exponents = np.array([lam for _, lam in terms], dtype=float)
        coeffs, exponents = _merge(coeffs, exponents, setting("dirichlet.merge_tol", merge_tol))
        return cls(coeffs, exponents, tail=tail, label=label)

    @property
    def terms(self) -> Sequence[Tuple[complex, float]]:
        return list(zip(self.coeffs.tolist(), self.exponents.tolist()))

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def is_exact(self) -> bool:
        return self.tail.exact

    @property
    def is_zero(self) -> bool:
        return self.is_exact and not np.any(self.coeffs)

    @property
    def is_constant(self) -> bool:
        """All nonzero terms sit at exponent 0"""
        nz = self.coeffs != 0
        return self.is_exact and not np.any(self.exponents[nz] != 0)

    def constant_value(self) -> complex:
        return complex(np.sum(self.coeffs[self.exponents == 0]))

    def abs_sum(self, sigma: float) -> float:
        return float(np.sum(np.abs(self.coeffs) * np.exp(-self.exponents * sigma)))

    def values(self, points) -> np.ndarray:
        """Truncated sum at an array of points"""
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        flat = pts.ravel()
        out = np.empty_like(flat)
        if len(self.coeffs) == 0:
            out[:] = 0
            return out.reshape(pts.shape)
        for start in range(0, len(flat), CHUNK):
            chunk = flat[start : start + CHUNK]
            out[start : start + CHUNK] = np.exp(-np.outer(chunk, self.exponents)) @ self.coeffs
        return out.reshape(pts.shape)

    def derivative_values(self, points, k: int) -> np.ndarray:
        return ds_derivative(self, k).values(points) if k else self.values(points)

    def shifted(self, tau: float) -> "GeneralDirichletSeries":
        """Series of s -> D(s + i tau): a_n -> a_n e^(-i lambda_n tau)"""
        return GeneralDirichletSeries(
            self.coeffs * np.exp(-1j * self.exponents * tau),
            self.exponents,
            tail=self.tail,
            label=f"{self.label}(s+{tau:g}i)" if self.label else "",
        )

    def scaled(self, factor: complex) -> "GeneralDirichletSeries":
        return GeneralDirichletSeries(self.coeffs * factor, self.exponents, tail=self.tail.scaled(factor), label=self.label)

    def structurally_equal(self, other: "GeneralDirichletSeries", tol: float = 1e-12) -> bool:
        return (
            len(self) == len(other)
            and np.allclose(self.exponents, other.exponents, rtol=0, atol=tol)
            and np.allclose(self.coeffs, other.coeffs, rtol=tol, atol=tol)
        )

    def to_dict(self) -> dict:
        from dirichlet.serializers import SeriesSerializer

        return dict(SeriesSerializer(self).data)

    def __repr__(self) -> str:
        return f"GeneralDirichletSeries({self.label or len(self)} terms, exact={self.is_exact})"


def zero_series() -> GeneralDirichletSeries:
    return GeneralDirichletSeries(np.zeros(0), np.zeros(0), label="0")


def constant_series(value: complex) -> GeneralDirichletSeries:
    return GeneralDirichletSeries([value], [0.0], label=f"{complex(value)}")


def unit_series() -> GeneralDirichletSeries:
    return constant_series(1.0)


def single_term(a: complex, lam: float) -> GeneralDirichletSeries:
    """The one-term series a e^(-lam s)"""
    return GeneralDirichletSeries([a], [lam], label=f"{complex(a)}*exp(-{lam:g}s)")


def make_ordinary(
    coeffs: Sequence[complex],
    shift: float = 0.0,
    growth: Optional[Tuple[float, float]] = None,
    label: str = "",
) -> GeneralDirichletSeries:
    """
    Ordinary Dirichlet series sum c_n n^-(s + shift), n = 1..len(coeffs)

    Args:
        coeffs: c_1, c_2, ...
        shift: Real shift of the argument
        growth: Declared (C, theta) with |c_n| <= C n^theta for all n, including
            the dropped ones. None means the sequence is complete (no tail).

    Returns:
        GeneralDirichletSeries with lambda_n = log n and a_n = c_n n^-shift

    Raises:
        GrowthViolation: a supplied coefficient breaks the declared growth
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    n = np.arange(1, len(c) + 1, dtype=float)
    logn = np.log(n)
    tail = EXACT
    if growth is not None:
        C, theta = float(growth[0]), float(growth[1])
        if C < 0:
            raise GrowthViolation(f"growth constant must be non-negative, got {C}")
        allowed = C * n**theta * (1 + 1e-12)
        bad = np.nonzero(np.abs(c) > allowed)[0]
        if bad.size:
            i = int(bad[0])
            raise GrowthViolation(f"|c_{i + 1}| = {abs(c[i]):.6g} exceeds declared bound {allowed[i]:.6g}", index=i + 1)
        if len(c):
            tail = TailMajorant(A=C, Lambda=float(np.log(len(c))), abscissa=1.0 + theta - shift)
    return GeneralDirichletSeries(
        c * np.exp(-shift * logn),
        logn,
        tail=tail,
        label=label or f"ordinary[{len(c)}]",
        metadata={"ordinary": True, "shift": shift, "growth": growth},
    )


def ring_add(A: GeneralDirichletSeries, B: GeneralDirichletSeries) -> GeneralDirichletSeries:
    """Sum with exponent merging; tail bounds add"""
    coeffs, exponents = _merge(
        np.concatenate([A.coeffs, B.coeffs]),
        np.concatenate([A.exponents, B.exponents]),
        setting("dirichlet.merge_tol"),
    )
    return GeneralDirichletSeries(coeffs, exponents, tail=combine_sum(A.tail, B.tail))


def ring_neg(A: GeneralDirichletSeries) -> GeneralDirichletSeries:
    return GeneralDirichletSeries(-A.coeffs, A.exponents, tail=A.tail, label=f"-{A.label}" if A.label else "")


def ring_mul(A: GeneralDirichletSeries, B: GeneralDirichletSeries, budget: Optional[int] = None) -> GeneralDirichletSeries:
    """
    Product: all pairwise products at exponents lambda_m + mu_n, merged

    Raises:
        BudgetExceeded: len(A) * len(B) exceeds the budget
    """
    budget = setting("dirichlet.mul_budget", budget)
    size = len(A) * len(B)
    if size > budget:
        raise BudgetExceeded(f"Series product needs {size} terms, budget is {budget}")
    if size == 0:
        return zero_series()
    coeffs, exponents = _merge(
        np.outer(A.coeffs, B.coeffs).ravel(),
        np.add.outer(A.exponents, B.exponents).ravel(),
        setting("dirichlet.merge_tol"),
    )
    if A.is_exact and B.is_exact:
        tail = EXACT
    else:
        tail = ProductTail(A, B, A.tail, B.tail)
    if size > 10**6:
        logger.info(f"Multiplied series of {len(A)} and {len(B)} terms into {len(coeffs)} terms")
    return GeneralDirichletSeries(coeffs, exponents, tail=tail)


def ds_derivative(A: GeneralDirichletSeries, k: int) -> GeneralDirichletSeries:
    """
    k-th derivative, term by term: a_n -> a_n (-lambda_n)^k

    The tail bound is multiplied by max(1, lambda_last)^k and marked heuristic.
    """
    if k < 0:
        raise ParamOutOfRange(f"Derivative order must be >= 0, got {k}")
    if k == 0:
        return A
    coeffs = A.coeffs * (-A.exponents) ** k
    tail = A.tail
    if not tail.exact:
        last = float(A.exponents[-1]) if len(A) else 1.0
        tail = tail.scaled(max(1.0, abs(last)) ** k, heuristic=True)
    return GeneralDirichletSeries(coeffs, A.exponents, tail=tail, label=f"{A.label}^({k})" if A.label else "")


def ds_eval(A: GeneralDirichletSeries, s: complex) -> Evaluation:
    """
    Truncated value at s and the tail bound at Re(s)

    The tail bound is infinite for Re(s) <= 1/2 unless the series is exact.
    """
    s = complex(s)
    value = complex(A.values(s)[0])
    if A.is_exact:
        tail = 0.0
    elif s.real <= 0.5:
        tail = np.inf
    else:
        tail = A.tail.bound(s.real)
    return Evaluation(value, tail)


def mean_square_predicted(A: GeneralDirichletSeries, sigma: float) -> MeanSquare:
    """
    Carlson mean square sum |a_n|^2 e^(-2 lambda_n sigma) over the stored terms

    Returns:
        (value, tail_bound); the limit of (1/T) int_0^T |A(sigma+it)|^2 dt
        lies in [value, value + tail_bound] when the series is absolutely
        convergent at sigma.
    """
    value = float(np.sum(np.abs(A.coeffs) ** 2 * np.exp(-2 * A.exponents * sigma)))
    tail = 0.0 if A.is_exact else A.tail.square_bound(sigma)
    return MeanSquare(value, tail)
