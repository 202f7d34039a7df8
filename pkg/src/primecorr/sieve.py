"""Smallest-prime-factor tables and the arithmetic read off them.

A :class:`PrimeTable` stores ``spf[n]``, the smallest prime factor of ``n``,
for every ``0 <= n <= limit`` (with ``spf[0] = spf[1] = 0``).  Everything
downstream (Omega, phi, the weight tables) is derived from it.

Tables can be persisted to a small binary cache::

    b"PCL1" | limit (u64 little-endian) | spf[0..limit] (u32 little-endian)
"""

from __future__ import annotations

import hashlib
import math
import os
import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels

DEFAULT_LIMIT = 10**7
MAX_LIMIT = 2**32 - 1
DEFAULT_MEMORY_BUDGET = 512 * 2**20

CACHE_MAGIC = b"PCL1"
_HEADER = struct.Struct("<4sQ")
_SPOT_CHECKS = 100


class ResourceLimitError(RuntimeError):
    """Requested table would not fit the configured memory budget."""


class CacheError(ValueError):
    """A sieve cache file is malformed or failed verification."""


@dataclass(frozen=True, eq=False)
class PrimeTable:
    limit: int
    spf: np.ndarray

    def __post_init__(self):
        self.spf.setflags(write=False)

    @cached_property
    def primes(self) -> np.ndarray:
        n = np.arange(self.limit + 1, dtype=np.int64)
        return np.flatnonzero(self.spf == n).astype(np.int64)

    @cached_property
    def is_prime(self) -> np.ndarray:
        mask = self.spf == np.arange(self.limit + 1, dtype=np.int64)
        mask[:2] = False
        mask.setflags(write=False)
        return mask

    @cached_property
    def omega(self) -> np.ndarray:
        """Omega(n), prime factors counted with multiplicity."""
        out = _kernels.omega_table(self.spf)
        out.setflags(write=False)
        return out

    @cached_property
    def phi(self) -> np.ndarray:
        out = euler_phi_table(self)
        out.setflags(write=False)
        return out

    def check_range(self, n: int, lo: int = 1) -> None:
        if not lo <= n <= self.limit:
            raise ValueError(f"n={n} outside [{lo}, {self.limit}]")

    def distinct_primes(self, n: int) -> list[int]:
        self.check_range(n)
        out = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            out.append(p)
            while n % p == 0:
                n //= p
        return out


def build_prime_table(limit: int, *, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PrimeTable:
    """Linear (Euler) sieve of smallest prime factors up to ``limit``."""
    limit = int(limit)
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    if limit > MAX_LIMIT:
        raise ResourceLimitError(f"limit {limit} exceeds 32-bit table capacity {MAX_LIMIT}")
    need = 4 * (limit + 1)
    if need > memory_budget:
        raise ResourceLimitError(
            f"sieve up to {limit} needs {need} bytes, budget is {memory_budget}"
        )
    spf, primes = _kernels.linear_sieve(limit)
    table = PrimeTable(limit, spf)
    table.__dict__["primes"] = primes
    return table


def factorize(t: PrimeTable, n: int) -> list[tuple[int, int]]:
    """``[(p, e), ...]`` with ascending primes and ``prod p**e == n``."""
    t.check_range(n, lo=2)
    spf = t.spf
    out: list[tuple[int, int]] = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def big_omega(t: PrimeTable, n: int) -> int:
    t.check_range(n)
    if n == 1:
        return 0
    return sum(e for _, e in factorize(t, n))


def euler_phi_table(t: PrimeTable) -> np.ndarray:
    """phi(n) for 0 <= n <= limit from the recurrence on n / spf(n); phi(0) = 0."""
    return _kernels.phi_table(t.spf)


def phi_summatory(t: PrimeTable, N: int) -> tuple[int, float]:
    """Return ``(sum_{n<=N} phi(n), that sum / N**2)``.

    The normalised value tends to 3/pi^2.
    """
    t.check_range(N, lo=2)
    total = int(t.phi[1 : N + 1].sum(dtype=np.int64))
    return total, total / (N * N)


# -- cache -----------------------------------------------------------------


def _trial_spf(n: int) -> int:
    if n < 2:
        return 0
    if n % 2 == 0:
        return 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return d
    return n


def table_bytes(t: PrimeTable) -> bytes:
    return _HEADER.pack(CACHE_MAGIC, t.limit) + t.spf.astype("<u4", copy=False).tobytes()


def table_checksum(t: PrimeTable) -> str:
    """SHA-256 of the cache serialisation."""
    return hashlib.sha256(table_bytes(t)).hexdigest()


def save_prime_table(t: PrimeTable, path: str | os.PathLike) -> None:
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(table_bytes(t))
    os.replace(tmp, path)


def load_prime_table(path: str | os.PathLike, *, spot_checks: int = _SPOT_CHECKS) -> PrimeTable:
    """Read a cache file, verifying header, size and a sample of entries."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise CacheError(f"{path}: truncated header")
        magic, limit = _HEADER.unpack(head)
        if magic != CACHE_MAGIC:
            raise CacheError(f"{path}: bad magic {magic!r}")
        if not 2 <= limit <= MAX_LIMIT:
            raise CacheError(f"{path}: unsupported limit {limit}")
        spf = np.fromfile(fh, dtype="<u4")
    if spf.size != limit + 1:
        raise CacheError(f"{path}: expected {limit + 1} entries, found {spf.size}")
    spf = spf.astype(np.uint32, copy=False)
    rng = np.random.default_rng(limit)
    sample = rng.integers(0, limit + 1, size=spot_checks)
    for n in sample.tolist():
        if int(spf[n]) != _trial_spf(n):
            raise CacheError(f"{path}: spot check failed at n={n}")
    return PrimeTable(int(limit), spf)
