# %% [markdown]
# # Weights and correlation sums
#
# Three weights live on the sieve: von Mangoldt (prime powers), its prime-only
# truncation, and the master weight supported on numbers with exactly two
# prime factors.  R_f(N) = sum f(n) f(N - n) is positive exactly when N is a
# sum of two elements of the support.

# %%
import numpy as np

from primecorr import (
    BatchCorrelator,
    Engine,
    WeightKind,
    batch_correlate,
    build_prime_table,
    build_weight_tables,
    correlate,
    correlation_record,
    decompose_upsilon,
)

t = build_prime_table(10**5)
w = build_weight_tables(t)
for kind in WeightKind:
    print(kind.value, w[kind].support[:10].tolist())

# %%
print("R_lambda0(10) =", correlate(w[WeightKind.TRUNCATED], 10))  # 3+7, 5+5, 7+3
print("R_upsilon(12) =", correlate(w[WeightKind.MASTER], 12))  # 6+6 only

# %% [markdown]
# ## Coprime split and the cofactor sums
# A representation N = n1 + n2 with a shared prime p gives N/p as a sum of
# two primes.  The record shows both sides of that bridge.

# %%
for N in (10, 12, 34, 54):
    rec = correlation_record(t, w, N)
    nc, co = decompose_upsilon(t, w[WeightKind.MASTER], N)
    print(N, f"noncoprime={nc:.6f} coprime={co:.6f}", "S_p =", {p: round(s, 6) for p, s in rec.per_prime.items()}, "K =", rec.ratio_k)

# %% [markdown]
# ## Two engines
# The direct engine walks only the support; the FFT engine convolves the
# whole array at once and is certified up to length 10^6.

# %%
direct = batch_correlate(w[WeightKind.MASTER], 10**4, Engine.DIRECT)
fft = batch_correlate(w[WeightKind.MASTER], 10**4, Engine.CONVOLUTION)
nz = direct > 0
print("max relative gap:", np.max(np.abs(fft[nz] - direct[nz]) / direct[nz]))

# %%
records = BatchCorrelator(t, w, 10**5).records(range(99_990, 100_001, 2))
for r in records:
    print(r.N, round(r.r_upsilon, 2), r.ratio_k)  # None when N = 2p with N/2 - 2 not prime
