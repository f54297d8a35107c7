"""
Shifts tau that align a set of Dirichlet exponents modulo 2 pi M
"""
import logging
from typing import Sequence, Tuple

import numpy as np

from core.exceptions import ParamOutOfRange
from rouche.scan import tau_grid

logger = logging.getLogger(__name__)

# Grid points processed per vectorized block
BLOCK = 65536


def nearest_integer_distance(x: np.ndarray) -> np.ndarray:
    return np.abs(x - np.rint(x))


def align_search(
    lambdas: Sequence[float], M: int, delta: float, tau_range: Tuple[float, float], step: float
) -> np.ndarray:
    """
    Grid shifts with || tau * lambda / (2 pi M) || < delta for every lambda

    The exponents are taken as given; no rational-independence basis is
    extracted from them.

    Args:
        lambdas: Exponents lambda
        M: Positive integer modulus
        delta: Tolerance in (0, 1/2)
        tau_range: (tau_0, tau_1)
        step: Grid step

    Returns:
        Sorted array of matching grid points
    """
    lambdas = np.asarray(list(lambdas), dtype=float)
    if lambdas.size == 0:
        raise ParamOutOfRange("align_search needs at least one exponent")
    if not 0 < delta < 0.5:
        raise ParamOutOfRange(f"delta must lie in (0, 1/2), got {delta}")
    if int(M) != M or M < 1:
        raise ParamOutOfRange(f"M must be a positive integer, got {M}")
    grid = tau_grid(tau_range, step)
    freq = lambdas / (2 * np.pi * M)
    hits = []
    for start in range(0, len(grid), BLOCK):
        block = grid[start : start + BLOCK]
        worst = nearest_integer_distance(np.outer(block, freq)).max(axis=1)
        hits.append(block[worst < delta])
    result = np.concatenate(hits) if hits else np.array([])
    logger.info(f"align_search: {len(result)} of {len(grid)} shifts within {delta:g} for {lambdas.size} exponents")
    return result
