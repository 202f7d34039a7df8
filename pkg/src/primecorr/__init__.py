"""Prime correlation laboratory.

Arithmetic weights on the primes and on Omega = 2 integers, their additive
correlation sums over even N, the Goldbach singular series, and sweeps that
audit the positivity claims connecting them.
"""

from .claims import ClaimReport, NClass, SweepSummary, check_n, classify, sweep
from .correlations import (
    BatchCorrelator,
    CorrelationRecord,
    Engine,
    ErrorTermBreakdown,
    PrecisionLimitError,
    batch_correlate,
    correlate,
    correlation_record,
    decompose_upsilon,
    error_term_breakdown,
    per_prime_sums,
)
from .sieve import (
    CacheError,
    PrimeTable,
    ResourceLimitError,
    big_omega,
    build_prime_table,
    euler_phi_table,
    factorize,
    load_prime_table,
    phi_summatory,
    save_prime_table,
)
from .singular import (
    SingularSeriesValue,
    build_singular_series,
    hl_residual,
    singular_series,
    twin_prime_constant,
)
from .weights import (
    WeightKind,
    WeightTable,
    build_weight_table,
    build_weight_tables,
    master_weight,
    truncated_von_mangoldt,
    von_mangoldt,
)

__version__ = "0.1.0"
