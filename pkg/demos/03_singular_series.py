# %% [markdown]
# # Twin prime constant and singular series
#
# Pi_2 = prod_{p > 2} (1 - 1/(p-1)^2) comes with a tail bound, so every
# truncation is a certified interval.  The singular series predicts
# R_lambda(N) ~ S(N) N, and the sweep records the residual.

# %%
import math

from primecorr import (
    build_prime_table,
    build_singular_series,
    build_weight_tables,
    correlation_record,
    hl_residual,
    singular_series,
    twin_prime_constant,
)

t = build_prime_table(10**6)
for L in (10, 10**3, 10**5, 10**6):
    pi2, tail = twin_prime_constant(t, L)
    print(f"L={L:>8}  pi2={pi2:.12f}  tail<={tail:.1e}")

# %%
ssv = build_singular_series(t)
for N in (8, 10, 15, 30, 210):
    print(N, singular_series(ssv, t, N))

# %% [markdown]
# ## Residuals R_lambda(N) - S(N) N, scaled by sqrt(N)

# %%
w = build_weight_tables(t)
for N in (10, 10**3, 10**4, 10**5, 10**6):
    predicted, residual, normalized = hl_residual(correlation_record(t, w, N), ssv, t)
    print(f"N={N:>8}  predicted={predicted:14.3f}  residual={residual:12.3f}  /sqrt(N)={normalized:8.3f}")
print("log^2 N at 10^6 for scale:", math.log(10**6) ** 2)
