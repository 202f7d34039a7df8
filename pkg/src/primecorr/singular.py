"""Twin prime constant and the Goldbach singular series.

    Pi_2 = prod_{p > 2} (1 - 1/(p-1)^2)
    S(N) = 2 Pi_2 prod_{p | N, p > 2} (p-1)/(p-2)    (N even), 0 for odd N

The product is truncated at a prime bound L.  Omitted factors lie in
(0, 1) and sum_{p > L} 1/(p-1)^2 < sum_{m >= L} 1/m^2 < 1/(L-1), so the true
constant lies in [pi2 - pi2/(L-1), pi2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .correlations import CorrelationRecord
from .sieve import PrimeTable

DEFAULT_PRODUCT_LIMIT = 10**6


@dataclass(frozen=True)
class SingularSeriesValue:
    pi2: float
    pi2_tail_bound: float
    product_limit: int

    @property
    def lower(self) -> float:
        return self.pi2 - self.pi2_tail_bound

    def per_n_factor(self, t: PrimeTable, N: int) -> float:
        t.check_range(N, lo=2)
        f = 1.0
        for p in t.distinct_primes(N):
            if p > 2:
                f *= (p - 1) / (p - 2)
        return f

    def s_of_n(self, t: PrimeTable, N: int) -> float:
        return singular_series(self, t, N)


def twin_prime_constant(t: PrimeTable, product_limit: int) -> tuple[float, float]:
    """Truncated product over 2 < p <= product_limit and its absolute tail bound."""
    product_limit = int(product_limit)
    if not 3 <= product_limit <= t.limit:
        raise ValueError(f"product_limit must lie in [3, {t.limit}], got {product_limit}")
    p = t.primes[(t.primes > 2) & (t.primes <= product_limit)].astype(np.float64)
    # sum of log1p terms is exact under fsum; one rounding in exp
    pi2 = math.exp(math.fsum(np.log1p(-1.0 / (p - 1.0) ** 2).tolist()))
    return pi2, pi2 / (product_limit - 1)


def build_singular_series(t: PrimeTable, product_limit: int | None = None) -> SingularSeriesValue:
    if product_limit is None:
        product_limit = min(t.limit, DEFAULT_PRODUCT_LIMIT)
    pi2, tail = twin_prime_constant(t, product_limit)
    return SingularSeriesValue(pi2, tail, int(product_limit))


def singular_series(ssv: SingularSeriesValue, t: PrimeTable, N: int) -> float:
    t.check_range(N, lo=2)
    if N % 2:
        return 0.0
    return 2.0 * ssv.pi2 * ssv.per_n_factor(t, N)


def singular_series_array(ssv: SingularSeriesValue, t: PrimeTable, ns) -> np.ndarray:
    ns = np.asarray(ns, dtype=np.int64)
    out = 2.0 * ssv.pi2 * _kernels.singular_factors(t.spf, ns)
    out[ns % 2 == 1] = 0.0
    return out


def hl_residual(
    record: CorrelationRecord, ssv: SingularSeriesValue, t: PrimeTable
) -> tuple[float, float, float]:
    """(S(N) N, R_Lambda(N) - S(N) N, that residual / sqrt(N))."""
    N = record.N
    predicted = singular_series(ssv, t, N) * N
    residual = record.r_lambda - predicted
    return predicted, residual, residual / math.sqrt(N)
