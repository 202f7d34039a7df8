"""Correlation sums R_f(N) = sum_{n=1}^{N-1} f(n) f(N-n) and their pieces.

Besides the plain sums this module splits the master-weight correlation by
whether ``gcd(n, N - n)`` is 1, computes the per-prime cofactor sums

    S_p(N) = R_{Lambda_0}(N / p)    for each prime p | N,

and the ratio K(N) = R_Upsilon(N) / sum_p S_p(N).

Sums always run over ``1 <= n <= N - 1``; ordered pairs ``(n, N - n)`` and
``(N - n, n)`` are both counted.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import fft

from . import _kernels
from .sieve import PrimeTable
from .weights import WeightKind, WeightTable

CONVOLUTION_CERTIFIED_LIMIT = 10**6

# Every nonzero term of any correlation here is a product of two logs of
# integers >= 2, so a genuinely positive part is at least (log 2)^2 ~ 0.48.
# Differences below this are rounding noise.
ZERO_GAP = 0.25


class Engine(enum.Enum):
    DIRECT = "direct"
    CONVOLUTION = "convolution"


class PrecisionLimitError(ValueError):
    """FFT engine asked for a length beyond its certified accuracy."""


@dataclass
class CorrelationRecord:
    N: int
    r_upsilon: float
    r_lambda0: float
    r_lambda: float
    noncoprime_part: float
    coprime_part: float
    per_prime: dict[int, float] = field(default_factory=dict)
    denominator: float = 0.0
    ratio_k: float | None = None


@dataclass
class ErrorTermBreakdown:
    """Master-weight correlation at N split by the shape of each pair.

    ``sq_semiprime`` holds mixed pairs in either order.  ``noncoprime_square``
    is the part of ``sq_sq + sq_semiprime`` coming from pairs with a common
    factor, so that ``semi_semi_noncoprime + noncoprime_square`` is the
    non-coprime part of the correlation.
    """

    N: int
    sq_sq: float
    sq_semiprime: float
    semi_semi_coprime: float
    semi_semi_noncoprime: float
    noncoprime_square: float
    pairs: int

    @property
    def total(self) -> float:
        return math.fsum(
            (self.sq_sq, self.sq_semiprime, self.semi_semi_coprime, self.semi_semi_noncoprime)
        )

    def scaled(self) -> dict[str, float]:
        """Each class divided by its Cauchy-Schwarz size (sqrt(N) log^2 N or N log N log log N)."""
        n = float(self.N)
        small = math.sqrt(n) * math.log(n) ** 2
        big = n * math.log(n) * math.log(math.log(n))
        return {
            "sq_sq": self.sq_sq / small,
            "sq_semiprime": self.sq_semiprime / big,
            "semi_semi_coprime": self.semi_semi_coprime / big,
        }


def _require_even(N: int, lo: int) -> None:
    if N % 2:
        raise ValueError(f"N={N} must be even")
    if N < lo:
        raise ValueError(f"N={N} must be >= {lo}")


def correlate(f: WeightTable, N: int) -> float:
    f.check_range(N)
    ns = np.array([N], dtype=np.int64)
    return float(_kernels.direct_correlations(f.values, f.support, ns)[0])


def decompose_upsilon(t: PrimeTable, f_upsilon: WeightTable, N: int) -> tuple[float, float]:
    """(non-coprime part, coprime part) of the master-weight correlation at N."""
    _require_even(N, 8)
    f_upsilon.check_range(N)
    ns = np.array([N], dtype=np.int64)
    nc, co = _kernels.split_by_gcd(t.spf, f_upsilon.values, f_upsilon.support, ns)
    return float(nc[0]), float(co[0])


def per_prime_sums(t: PrimeTable, f_lambda0: WeightTable, N: int) -> dict[int, float]:
    _require_even(N, 4)
    f_lambda0.check_range(N)
    return {p: correlate(f_lambda0, N // p) for p in t.distinct_primes(N)}


def _assemble(N, r_ups, r0, rl, noncoprime, coprime, per_prime) -> CorrelationRecord:
    denominator = math.fsum(per_prime.values())
    ratio = r_ups / denominator if denominator > 0 else None
    return CorrelationRecord(
        N=N,
        r_upsilon=r_ups,
        r_lambda0=r0,
        r_lambda=rl,
        noncoprime_part=noncoprime,
        coprime_part=coprime,
        per_prime=per_prime,
        denominator=denominator,
        ratio_k=ratio,
    )


def correlation_record(
    t: PrimeTable, tables: Mapping[WeightKind, WeightTable], N: int
) -> CorrelationRecord:
    _require_even(N, 8)
    ups = tables[WeightKind.MASTER]
    lam0 = tables[WeightKind.TRUNCATED]
    noncoprime, coprime = decompose_upsilon(t, ups, N)
    return _assemble(
        N,
        correlate(ups, N),
        correlate(lam0, N),
        correlate(tables[WeightKind.VON_MANGOLDT], N),
        noncoprime,
        coprime,
        per_prime_sums(t, lam0, N),
    )


def error_term_breakdown(t: PrimeTable, f_upsilon: WeightTable, N: int) -> ErrorTermBreakdown:
    """Classify every pair (n, N - n) with both weights nonzero; sum each class."""
    _require_even(N, 8)
    f_upsilon.check_range(N)
    w = f_upsilon.values
    n = f_upsilon.support[f_upsilon.support < N]
    m = N - n
    keep = w[m] > 0
    n, m = n[keep], m[keep]
    terms = w[n] * w[m]
    spf = t.spf.astype(np.int64)
    sq_n = n // spf[n] == spf[n]
    sq_m = m // spf[m] == spf[m]
    shared = np.gcd(n, N) > 1
    both = sq_n & sq_m
    mixed = sq_n ^ sq_m
    neither = ~(sq_n | sq_m)
    return ErrorTermBreakdown(
        N=N,
        sq_sq=math.fsum(terms[both]),
        sq_semiprime=math.fsum(terms[mixed]),
        semi_semi_coprime=math.fsum(terms[neither & ~shared]),
        semi_semi_noncoprime=math.fsum(terms[neither & shared]),
        noncoprime_square=math.fsum(terms[(both | mixed) & shared]),
        pairs=int(terms.size),
    )


# -- batch engines ----------------------------------------------------------


def _convolve(values: np.ndarray, L: int) -> np.ndarray:
    x = np.ascontiguousarray(values[: L + 1])
    size = fft.next_fast_len(2 * L + 1, real=True)
    out = fft.irfft(fft.rfft(x, size) ** 2, size)[: L + 1]
    ind = (x != 0).astype(np.float64)
    counts = np.rint(fft.irfft(fft.rfft(ind, size) ** 2, size)[: L + 1])
    out[counts == 0] = 0.0
    return out


def batch_correlate(
    f: WeightTable, L: int, mode: Engine = Engine.DIRECT, *, allow_uncertified: bool = False
) -> np.ndarray:
    """``out[N] = correlate(f, N)`` for 2 <= N <= L; ``out[0] = out[1] = 0``."""
    L = int(L)
    f.check_range(L)
    mode = Engine(mode)
    if mode is Engine.CONVOLUTION:
        if L > CONVOLUTION_CERTIFIED_LIMIT and not allow_uncertified:
            raise PrecisionLimitError(
                f"convolution engine certified up to {CONVOLUTION_CERTIFIED_LIMIT}, got L={L}"
            )
        return _convolve(f.values, L)
    out = np.zeros(L + 1, dtype=np.float64)
    ns = np.arange(2, L + 1, dtype=np.int64)
    out[2:] = _kernels.direct_correlations(f.values, f.support, ns)
    return out


class BatchCorrelator:
    """Produces :class:`CorrelationRecord` objects for many N at once.

    Cofactor sums S_p(N) are table lookups into R_{Lambda_0}(M) for
    M <= hi / 2, which is computed once up front.  The non-coprime part
    is built from prime pairs of N/p (cheap) unless ``exhaustive_split`` is
    set, in which case every pair is gcd-tested.
    """

    def __init__(
        self,
        t: PrimeTable,
        tables: Mapping[WeightKind, WeightTable],
        hi: int,
        engine: Engine = Engine.DIRECT,
        *,
        exhaustive_split: bool = False,
        allow_uncertified: bool = False,
    ):
        self.t = t
        self.tables = tables
        self.hi = int(hi)
        self.engine = Engine(engine)
        self.exhaustive_split = exhaustive_split
        for f in tables.values():
            f.check_range(self.hi)
        self._full: dict[WeightKind, np.ndarray] = {}
        if self.engine is Engine.CONVOLUTION:
            for kind, f in tables.items():
                self._full[kind] = batch_correlate(
                    f, self.hi, Engine.CONVOLUTION, allow_uncertified=allow_uncertified
                )
            self._cofactor = self._full[WeightKind.TRUNCATED]
        else:
            half = max(self.hi // 2, 2)
            self._cofactor = batch_correlate(tables[WeightKind.TRUNCATED], half)

    def _sums(self, kind: WeightKind, ns: np.ndarray) -> np.ndarray:
        if self.engine is Engine.CONVOLUTION:
            return self._full[kind][ns]
        f = self.tables[kind]
        return _kernels.direct_correlations(f.values, f.support, ns)

    def records(self, ns) -> list[CorrelationRecord]:
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size == 0:
            return []
        if np.any(ns % 2) or ns.min() < 8 or ns.max() > self.hi:
            raise ValueError(f"batch expects even N in [8, {self.hi}]")
        ups = self.tables[WeightKind.MASTER]
        r_ups = self._sums(WeightKind.MASTER, ns)
        r0 = self._sums(WeightKind.TRUNCATED, ns)
        rl = self._sums(WeightKind.VON_MANGOLDT, ns)
        if self.exhaustive_split:
            nc, co = _kernels.split_by_gcd(self.t.spf, ups.values, ups.support, ns)
        else:
            nc = _kernels.noncoprime_by_cofactor(self.t.spf, ups.values, self.t.primes, ns)
            co = r_ups - nc
        out = []
        cofactor = self._cofactor
        for i, N in enumerate(ns.tolist()):
            noncoprime = float(nc[i])
            coprime = float(co[i])
            if coprime < ZERO_GAP:
                coprime = 0.0
            per_prime = {p: float(cofactor[N // p]) for p in self.t.distinct_primes(N)}
            out.append(
                _assemble(N, float(r_ups[i]), float(r0[i]), float(rl[i]), noncoprime, coprime, per_prime)
            )
        return out
