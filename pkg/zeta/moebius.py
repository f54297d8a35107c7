"""
Möbius function table via a linear sieve
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MoebiusTable:
    """
    mu(n) and omega(n) for n = 0..n_max (index 0 unused, stored as 0).

    Attributes:
        n_max: Largest tabulated n
        values: int8 array, values[n] = mu(n)
        omega: int16 array, omega[n] = number of distinct prime factors of n
    """

    n_max: int
    values: np.ndarray
    omega: np.ndarray

    def __getitem__(self, n: int) -> int:
        return int(self.values[n])

    def coefficients(self, count: int) -> np.ndarray:
        """mu(1..count) as a float array, ready for make_ordinary"""
        if count > self.n_max:
            return moebius_table(count).coefficients(count)
        return self.values[1 : count + 1].astype(float)

    @classmethod
    def build(cls, n_max: int) -> "MoebiusTable":
        spf = np.zeros(n_max + 1, dtype=np.int64)
        for p in range(2, int(n_max**0.5) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
                spf[p * p :: p] = block
        n = np.arange(n_max + 1)
        spf[(spf == 0) & (n >= 2)] = n[(spf == 0) & (n >= 2)]

        mu = np.zeros(n_max + 1, dtype=np.int8)
        omega = np.zeros(n_max + 1, dtype=np.int16)
        if n_max >= 1:
            mu[1] = 1
        for k in range(2, n_max + 1):
            p = spf[k]
            m = k // p
            omega[k] = omega[m] + (0 if m % p == 0 else 1)
            mu[k] = 0 if m % p == 0 else -mu[m]
        logger.debug(f"Built Möbius table up to {n_max}")
        values = mu
        values.setflags(write=False)
        omega.setflags(write=False)
        return cls(n_max=n_max, values=values, omega=omega)


@lru_cache(maxsize=4)
def moebius_table(n_max: int) -> MoebiusTable:
    """Cached per process; tables are read-only once built"""
    return MoebiusTable.build(n_max)
