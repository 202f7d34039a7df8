"""Per-N audit of the finite claims about even numbers.

For each even N the report records, computed from the sums and never
assumed:

* ``goldbach``: R_{Lambda_0}(N) > 0, i.e. N = p + q.
* ``relaxed_goldbach``: R_Upsilon(N) > 0, i.e. N = n1 + n2 with
  Omega(n1) = Omega(n2) = 2.  Claimed for N > 6 with N != 2p.
* Theorem-1 data: whether the cofactor sum sum_p S_p(N) is positive and
  the ratio K(N).
* Conjecture 1: when sum_p S_p(N) > 0, whether every S_p(N) is positive,
  and which primes fail.

A sweep streams one report per even N and folds them into a
:class:`SweepSummary`; summaries merge associatively, so chunk order does
not matter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .correlations import (
    BatchCorrelator,
    CorrelationRecord,
    Engine,
    ErrorTermBreakdown,
    correlation_record,
    error_term_breakdown,
)
from .sieve import PrimeTable
from .singular import SingularSeriesValue, hl_residual
from .weights import WeightKind, WeightTable

CLAIMS = ("goldbach", "relaxed", "conjecture1", "bridge")
COUNTEREXAMPLE_CAP = 100
HL_SAMPLE_POINTS = (10**3, 10**4, 10**5, 10**6)
K_BIN_WIDTH = 0.25
K_BINS = 64  # [0, 16) plus one overflow bin


class NClass(enum.Enum):
    TWO_P = "two_p"
    SMALL = "small"
    GENERAL = "general"


def classify(t: PrimeTable, N: int) -> NClass:
    if N % 2 or N < 4:
        raise ValueError(f"N={N} must be even and >= 4")
    t.check_range(N)
    if N <= 6:
        return NClass.SMALL
    if t.is_prime[N // 2]:
        return NClass.TWO_P
    return NClass.GENERAL


@dataclass
class ClaimReport:
    N: int
    nclass: NClass
    relaxed_goldbach: bool
    goldbach: bool
    theorem1_hypothesis: bool
    theorem1_denominator_positive: bool
    ratio_k: float | None
    conjecture1_applicable: bool
    conjecture1_holds: bool | None
    failing_primes: list[int]
    record: CorrelationRecord
    s_of_n: float
    hl_predicted: float
    hl_residual: float
    hl_normalized: float
    error_terms: ErrorTermBreakdown | None = None

    @property
    def even_cofactor_failures(self) -> list[int]:
        """Failing primes whose cofactor N/p is even and >= 4 (these would break Goldbach).

        For N = 2p the cofactor 2 always fails; Goldbach says nothing about it.
        """
        return [p for p in self.failing_primes if (self.N // p) % 2 == 0 and self.N // p >= 4]

    @property
    def near_miss(self) -> bool:
        """N = 2p with a semiprime representation but no cofactor prime pair."""
        return (
            self.nclass is NClass.TWO_P
            and self.relaxed_goldbach
            and not self.theorem1_denominator_positive
        )


def _report(
    t: PrimeTable,
    ssv: SingularSeriesValue,
    record: CorrelationRecord,
    nclass: NClass,
    breakdown: ErrorTermBreakdown | None = None,
) -> ClaimReport:
    denom_pos = record.denominator > 0.0
    failing = sorted(p for p, s in record.per_prime.items() if s == 0.0) if denom_pos else []
    predicted, residual, normalized = hl_residual(record, ssv, t)
    return ClaimReport(
        N=record.N,
        nclass=nclass,
        relaxed_goldbach=record.r_upsilon > 0.0,
        goldbach=record.r_lambda0 > 0.0,
        theorem1_hypothesis=record.r_upsilon > 0.0,
        theorem1_denominator_positive=denom_pos,
        ratio_k=record.ratio_k,
        conjecture1_applicable=denom_pos,
        conjecture1_holds=(not failing) if denom_pos else None,
        failing_primes=failing,
        record=record,
        s_of_n=predicted / record.N,
        hl_predicted=predicted,
        hl_residual=residual,
        hl_normalized=normalized,
        error_terms=breakdown,
    )


def check_n(
    t: PrimeTable,
    tables: Mapping[WeightKind, WeightTable],
    ssv: SingularSeriesValue,
    N: int,
    *,
    error_terms: bool = False,
) -> ClaimReport:
    record = correlation_record(t, tables, N)
    breakdown = error_term_breakdown(t, tables[WeightKind.MASTER], N) if error_terms else None
    return _report(t, ssv, record, classify(t, N), breakdown)


# -- summaries ----------------------------------------------------------------


@dataclass
class ClassTally:
    count: int = 0
    goldbach_failures: int = 0
    relaxed_failures: int = 0
    conjecture1_applicable: int = 0
    conjecture1_failures: int = 0
    conjecture1_even_cofactor_failures: int = 0
    near_misses: int = 0
    # noncoprime part > 0 but no cofactor prime pair
    bridge_violations: int = 0
    # semiprime representation exists, yet no N/p is a sum of two primes
    remark_forward_failures: int = 0
    # some N/p is a sum of two primes, yet no semiprime representation
    remark_converse_failures: int = 0

    def add(self, r: ClaimReport) -> None:
        self.count += 1
        self.goldbach_failures += not r.goldbach
        self.relaxed_failures += not r.relaxed_goldbach
        if r.conjecture1_applicable:
            self.conjecture1_applicable += 1
            if not r.conjecture1_holds:
                self.conjecture1_failures += 1
                self.conjecture1_even_cofactor_failures += bool(r.even_cofactor_failures)
        self.near_misses += r.near_miss
        self.bridge_violations += (
            r.record.noncoprime_part > 0.0 and not r.theorem1_denominator_positive
        )
        self.remark_forward_failures += r.relaxed_goldbach and not r.theorem1_denominator_positive
        self.remark_converse_failures += r.theorem1_denominator_positive and not r.relaxed_goldbach

    def merge(self, other: "ClassTally") -> "ClassTally":
        return ClassTally(**{k: getattr(self, k) + getattr(other, k) for k in self.__dataclass_fields__})


def _cap_merge(a: list, b: list, cap: int | None = COUNTEREXAMPLE_CAP) -> list:
    out = sorted(a + b)
    return out if cap is None else out[:cap]


def _pick(a, b, better):
    if a is None:
        return b
    if b is None:
        return a
    return a if better(a, b) else b


@dataclass
class SweepSummary:
    reports: int = 0
    tallies: dict[str, ClassTally] = field(default_factory=dict)
    goldbach_counterexamples: list[int] = field(default_factory=list)
    relaxed_counterexamples: list[int] = field(default_factory=list)
    conjecture1_counterexamples: list[tuple[int, list[int]]] = field(default_factory=list)
    bridge_counterexamples: list[int] = field(default_factory=list)
    near_misses: list[int] = field(default_factory=list)
    k_min: tuple[float, int] | None = None
    k_max: tuple[float, int] | None = None
    k_histogram: list[int] = field(default_factory=lambda: [0] * (K_BINS + 1))
    hl_max_abs: tuple[float, int] | None = None
    hl_samples: dict[int, float] = field(default_factory=dict)
    error_term_max: dict[str, tuple[float, int]] = field(default_factory=dict)
    stopped_at: int | None = None

    # Counterexample counts per claim.  Relaxed Goldbach and Conjecture 1 are
    # only claimed away from N = 2p; those N are tallied but not counted.
    def counterexample_count(self, claim: str) -> int:
        tallies = self.tallies.values()
        if claim == "goldbach":
            return sum(t.goldbach_failures for t in tallies)
        if claim == "bridge":
            return sum(t.bridge_violations for t in tallies)
        general = self.tallies.get(NClass.GENERAL.value, ClassTally())
        if claim == "relaxed":
            return general.relaxed_failures
        if claim == "conjecture1":
            return general.conjecture1_failures
        raise ValueError(f"unknown claim {claim!r}")

    def total_counterexamples(self, claims: Iterable[str] = CLAIMS) -> int:
        return sum(self.counterexample_count(c) for c in claims)

    def add(self, r: ClaimReport) -> None:
        self.reports += 1
        self.tallies.setdefault(r.nclass.value, ClassTally()).add(r)
        general = r.nclass is NClass.GENERAL
        if not r.goldbach:
            self.goldbach_counterexamples = _cap_merge(self.goldbach_counterexamples, [r.N])
        if general and not r.relaxed_goldbach:
            self.relaxed_counterexamples = _cap_merge(self.relaxed_counterexamples, [r.N])
        if general and r.conjecture1_holds is False:
            self.conjecture1_counterexamples = _cap_merge(
                self.conjecture1_counterexamples, [(r.N, list(r.failing_primes))]
            )
        if r.record.noncoprime_part > 0.0 and not r.theorem1_denominator_positive:
            self.bridge_counterexamples = _cap_merge(self.bridge_counterexamples, [r.N])
        if r.near_miss:
            self.near_misses.append(r.N)
        if r.ratio_k is not None:
            k = r.ratio_k
            self.k_min = _pick(self.k_min, (k, r.N), lambda a, b: a <= b)
            self.k_max = _pick(self.k_max, (k, r.N), lambda a, b: (a[0], -a[1]) >= (b[0], -b[1]))
            self.k_histogram[min(int(k / K_BIN_WIDTH), K_BINS)] += 1
        h = (abs(r.hl_normalized), r.N)
        self.hl_max_abs = _pick(self.hl_max_abs, h, lambda a, b: (a[0], -a[1]) >= (b[0], -b[1]))
        if r.N in HL_SAMPLE_POINTS:
            self.hl_samples[r.N] = r.hl_normalized
        if r.error_terms is not None:
            for name, v in r.error_terms.scaled().items():
                self.error_term_max[name] = _pick(
                    self.error_term_max.get(name), (v, r.N), lambda a, b: (a[0], -a[1]) >= (b[0], -b[1])
                )

    def merge(self, other: "SweepSummary") -> "SweepSummary":
        bigger = lambda a, b: (a[0], -a[1]) >= (b[0], -b[1])  # noqa: E731
        hist = [a + b for a, b in zip(self.k_histogram, other.k_histogram)]
        tallies = dict(self.tallies)
        for k, v in other.tallies.items():
            tallies[k] = tallies[k].merge(v) if k in tallies else v
        err = dict(self.error_term_max)
        for k, v in other.error_term_max.items():
            err[k] = _pick(err.get(k), v, bigger)
        stops = [s for s in (self.stopped_at, other.stopped_at) if s is not None]
        return SweepSummary(
            reports=self.reports + other.reports,
            tallies=tallies,
            goldbach_counterexamples=_cap_merge(self.goldbach_counterexamples, other.goldbach_counterexamples),
            relaxed_counterexamples=_cap_merge(self.relaxed_counterexamples, other.relaxed_counterexamples),
            conjecture1_counterexamples=_cap_merge(
                self.conjecture1_counterexamples, other.conjecture1_counterexamples
            ),
            bridge_counterexamples=_cap_merge(self.bridge_counterexamples, other.bridge_counterexamples),
            near_misses=_cap_merge(self.near_misses, other.near_misses, cap=None),
            k_min=_pick(self.k_min, other.k_min, lambda a, b: a <= b),
            k_max=_pick(self.k_max, other.k_max, bigger),
            k_histogram=hist,
            hl_max_abs=_pick(self.hl_max_abs, other.hl_max_abs, bigger),
            hl_samples={**self.hl_samples, **other.hl_samples},
            error_term_max=err,
            stopped_at=min(stops) if stops else None,
        )

    def to_dict(self) -> dict:
        edges = [round(i * K_BIN_WIDTH, 6) for i in range(K_BINS + 1)]
        return {
            "reports": self.reports,
            "counterexamples": {c: self.counterexample_count(c) for c in CLAIMS},
            "classes": {k: vars(v).copy() for k, v in sorted(self.tallies.items())},
            "goldbach_counterexamples": self.goldbach_counterexamples,
            "relaxed_counterexamples": self.relaxed_counterexamples,
            "conjecture1_counterexamples": [
                {"N": n, "failing_primes": ps} for n, ps in self.conjecture1_counterexamples
            ],
            "bridge_counterexamples": self.bridge_counterexamples,
            "two_p_near_misses": self.near_misses,
            "ratio_K": {
                "min": None if self.k_min is None else {"value": self.k_min[0], "N": self.k_min[1]},
                "max": None if self.k_max is None else {"value": self.k_max[0], "N": self.k_max[1]},
                "histogram": {
                    "bin_width": K_BIN_WIDTH,
                    "counts": {str(edges[i]): c for i, c in enumerate(self.k_histogram) if c},
                    "overflow_from": edges[-1],
                },
            },
            "hl_residual": {
                "max_abs_normalized": None
                if self.hl_max_abs is None
                else {"value": self.hl_max_abs[0], "N": self.hl_max_abs[1]},
                "samples": {str(k): v for k, v in sorted(self.hl_samples.items())},
            },
            "error_term_scaled_max": {
                k: {"value": v[0], "N": v[1]} for k, v in sorted(self.error_term_max.items())
            },
            "stopped_at": self.stopped_at,
        }


# -- sweep ----------------------------------------------------------------------


def sweep(
    t: PrimeTable,
    tables: Mapping[WeightKind, WeightTable],
    ssv: SingularSeriesValue,
    lo: int,
    hi: int,
    *,
    classes: Iterable[NClass] | None = None,
    engine: Engine = Engine.DIRECT,
    sink: Callable[[ClaimReport], None] | None = None,
    stop_on: Iterable[str] = (),
    chunk_size: int = 4096,
    exhaustive_split: bool = False,
    error_terms: bool = False,
    allow_uncertified: bool = False,
) -> SweepSummary:
    """Check every even N in [lo, hi] (after the class filter).

    Reports go to ``sink`` in increasing N.  If ``stop_on`` names claims, the
    sweep stops right after the first report that is a counterexample to one
    of them and records its N in ``stopped_at``.
    """
    if lo < 8:
        raise ValueError(f"lo must be >= 8, got {lo}")
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    limit = min(f.limit for f in tables.values())
    if hi > limit:
        raise ValueError(f"hi={hi} exceeds table limit {limit}")
    stop_on = set(stop_on)
    unknown = stop_on - set(CLAIMS)
    if unknown:
        raise ValueError(f"unknown claims {sorted(unknown)}")
    wanted = None if classes is None else {NClass(c) for c in classes}

    ns = np.arange(lo + (lo % 2), hi + 1, 2, dtype=np.int64)
    cls = _classify_many(t, ns)
    if wanted is not None:
        keep = np.array([c in wanted for c in cls], dtype=bool)
        ns = ns[keep]
        cls = [c for c, k in zip(cls, keep) if k]
    summary = SweepSummary()
    if ns.size == 0:
        return summary

    batch = BatchCorrelator(
        t,
        tables,
        int(ns.max()),
        engine,
        exhaustive_split=exhaustive_split,
        allow_uncertified=allow_uncertified,
    )
    ups = tables[WeightKind.MASTER]
    for start in range(0, ns.size, chunk_size):
        chunk_ns = ns[start : start + chunk_size]
        part = SweepSummary()
        for j, rec in enumerate(batch.records(chunk_ns)):
            breakdown = error_term_breakdown(t, ups, rec.N) if error_terms else None
            r = _report(t, ssv, rec, cls[start + j], breakdown)
            part.add(r)
            if sink is not None:
                sink(r)
            if stop_on and _is_counterexample(r, stop_on):
                part.stopped_at = r.N
                return summary.merge(part)
        summary = summary.merge(part)
    return summary


def _classify_many(t: PrimeTable, ns: np.ndarray) -> list[NClass]:
    two_p = t.is_prime[ns // 2]
    out = []
    for n, tp in zip(ns.tolist(), two_p.tolist()):
        out.append(NClass.SMALL if n <= 6 else NClass.TWO_P if tp else NClass.GENERAL)
    return out


def _is_counterexample(r: ClaimReport, claims: set[str]) -> bool:
    general = r.nclass is NClass.GENERAL
    return (
        ("goldbach" in claims and not r.goldbach)
        or ("relaxed" in claims and general and not r.relaxed_goldbach)
        or ("conjecture1" in claims and general and r.conjecture1_holds is False)
        or (
            "bridge" in claims
            and r.record.noncoprime_part > 0.0
            and not r.theorem1_denominator_positive
        )
    )

