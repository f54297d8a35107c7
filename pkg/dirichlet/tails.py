"""
Tail majorants for truncated Dirichlet series.

A tail bounds the dropped part sum |a_n| e^(-lambda_n sigma) of a series
as a function of sigma, and its Carlson counterpart
sum |a_n|^2 e^(-2 lambda_n sigma).
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np


class TailBound:
    heuristic = False

    @property
    def exact(self) -> bool:
        return False

    def bound(self, sigma: float) -> float:
        raise NotImplementedError

    def square_bound(self, sigma: float) -> float:
        b = self.bound(sigma)
        return b * b

    def scaled(self, factor: float, heuristic: bool = False) -> "TailBound":
        if self.exact:
            return self
        return ScaledTail(self, abs(factor), heuristic or self.heuristic)


@dataclass(frozen=True)
class TailMajorant(TailBound):
    """
    A e^(-Lambda (sigma - abscissa)) / (sigma - abscissa), valid for sigma > abscissa.

    This is the integral-test bound for ordinary series with
    |c_n| <= A n^theta cut at N: Lambda = log N, abscissa = 1 + theta - shift.
    """

    A: float = 0.0
    Lambda: float = 0.0
    abscissa: float = 0.5
    heuristic: bool = False

    @property
    def exact(self) -> bool:
        return self.A == 0

    def bound(self, sigma: float) -> float:
        if self.exact:
            return 0.0
        gap = sigma - self.abscissa
        if gap <= 0:
            return np.inf
        return float(self.A * np.exp(-self.Lambda * gap) / gap)

    def square_bound(self, sigma: float) -> float:
        if self.exact:
            return 0.0
        gap = 2 * sigma - 2 * self.abscissa + 1
        if gap <= 0:
            return np.inf
        return float(self.A**2 * np.exp(-self.Lambda * gap) / gap)

    def scaled(self, factor: float, heuristic: bool = False) -> "TailMajorant":
        return TailMajorant(self.A * abs(factor), self.Lambda, self.abscissa, heuristic or self.heuristic)

    def to_dict(self) -> dict:
        return {"A": self.A, "Lambda": self.Lambda, "abscissa": self.abscissa, "heuristic": self.heuristic}


EXACT = TailMajorant()


@dataclass(frozen=True)
class ScaledTail(TailBound):
    base: TailBound
    factor: float
    heuristic: bool = False

    def bound(self, sigma: float) -> float:
        return self.factor * self.base.bound(sigma)

    def square_bound(self, sigma: float) -> float:
        return self.factor**2 * self.base.square_bound(sigma)


@dataclass(frozen=True)
class SumTail(TailBound):
    parts: Tuple[TailBound, ...]

    @property
    def heuristic(self) -> bool:
        return any(p.heuristic for p in self.parts)

    def bound(self, sigma: float) -> float:
        return float(sum(p.bound(sigma) for p in self.parts))

    def square_bound(self, sigma: float) -> float:
        # Minkowski
        return float(sum(np.sqrt(p.square_bound(sigma)) for p in self.parts) ** 2)


@dataclass(frozen=True)
class ProductTail(TailBound):
    """(A + a)(B + b) - AB = A b + a B + a b, with A, B the truncations"""

    left: "object"
    right: "object"
    left_tail: TailBound
    right_tail: TailBound

    @property
    def heuristic(self) -> bool:
        return self.left_tail.heuristic or self.right_tail.heuristic

    def bound(self, sigma: float) -> float:
        lt, rt = self.left_tail.bound(sigma), self.right_tail.bound(sigma)
        la, ra = self.left.abs_sum(sigma), self.right.abs_sum(sigma)
        with np.errstate(invalid="ignore"):
            total = (la * rt if rt else 0.0) + (lt * ra if lt else 0.0) + lt * rt
        return float(total)


def combine_sum(*tails: TailBound) -> TailBound:
    live = tuple(t for t in tails if not t.exact)
    if not live:
        return EXACT
    if len(live) == 1:
        return live[0]
    return SumTail(live)
