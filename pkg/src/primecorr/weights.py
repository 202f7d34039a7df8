"""The three arithmetic weights the correlation sums are built from.

* von Mangoldt: ``log p`` on prime powers ``p**k``.
* truncated von Mangoldt: ``log p`` on primes only.
* master weight: ``log p`` on ``p**2`` and ``log(p1*p2)`` on ``p1*p2`` with
  ``p1 != p2``; supported exactly on the integers with Omega = 2.

The value at a prime square is ``log p``, not ``log p**2``.  This is
deliberate and must not be "fixed".  All logarithms are natural.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .sieve import PrimeTable, factorize


class WeightKind(enum.Enum):
    VON_MANGOLDT = "lambda"
    TRUNCATED = "lambda0"
    MASTER = "upsilon"


_KERNEL_CODE = {
    WeightKind.VON_MANGOLDT: _kernels.VON_MANGOLDT,
    WeightKind.TRUNCATED: _kernels.TRUNCATED,
    WeightKind.MASTER: _kernels.MASTER,
}


def von_mangoldt(t: PrimeTable, n: int) -> float:
    t.check_range(n)
    if n == 1:
        return 0.0
    f = factorize(t, n)
    return math.log(f[0][0]) if len(f) == 1 else 0.0


def truncated_von_mangoldt(t: PrimeTable, n: int) -> float:
    t.check_range(n)
    if n == 1:
        return 0.0
    f = factorize(t, n)
    return math.log(n) if f == [(n, 1)] else 0.0


def master_weight(t: PrimeTable, n: int) -> float:
    t.check_range(n)
    if n == 1:
        return 0.0
    f = factorize(t, n)
    if len(f) == 1 and f[0][1] == 2:
        return math.log(f[0][0])
    if len(f) == 2 and f[0][1] == f[1][1] == 1:
        return math.log(n)
    return 0.0


POINTWISE = {
    WeightKind.VON_MANGOLDT: von_mangoldt,
    WeightKind.TRUNCATED: truncated_von_mangoldt,
    WeightKind.MASTER: master_weight,
}


@dataclass(frozen=True, eq=False)
class WeightTable:
    kind: WeightKind
    limit: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @cached_property
    def support(self) -> np.ndarray:
        """Ascending indices where the weight is nonzero."""
        return np.flatnonzero(self.values).astype(np.int64)

    def check_range(self, N: int, lo: int = 2) -> None:
        if not lo <= N <= self.limit:
            raise ValueError(f"N={N} outside [{lo}, {self.limit}] for {self.kind.value} table")


def build_weight_table(t: PrimeTable, kind: WeightKind, limit: int | None = None) -> WeightTable:
    limit = t.limit if limit is None else int(limit)
    if not 1 <= limit <= t.limit:
        raise ValueError(f"limit {limit} exceeds prime table limit {t.limit}")
    values = _kernels.weight_values(t.spf, limit, _KERNEL_CODE[kind])
    return WeightTable(kind, limit, values)


def build_weight_tables(t: PrimeTable, limit: int | None = None) -> dict[WeightKind, WeightTable]:
    return {kind: build_weight_table(t, kind, limit) for kind in WeightKind}
