# %% [markdown]
# # Sieve tables and the totient sum
#
# Everything in `primecorr` reads one smallest-prime-factor table.  This demo
# builds it, factors a few numbers, and watches sum(phi(n), n <= N) / N^2
# approach 3 / pi^2 (the density of coprime lattice points, halved).

# %%
import math
import tempfile
from pathlib import Path

from primecorr import build_prime_table, factorize, phi_summatory
from primecorr.sieve import load_prime_table, save_prime_table, table_checksum

t = build_prime_table(10**6)
print(t.limit, "->", t.primes.size, "primes")
print("spf[0..10] =", t.spf[:11].tolist())

# %%
for n in (12, 9, 35, 999_983, 720_720):
    print(n, factorize(t, n), "Omega =", int(t.omega[n]), "phi =", int(t.phi[n]))

# %% [markdown]
# ## Totient sum

# %%
for N in (10, 10**3, 10**4, 10**5, 10**6):
    total, normalized = phi_summatory(t, N)
    print(f"N={N:>8}  sum={total:>14}  sum/N^2={normalized:.8f}  ratio to 3/pi^2 - 1 = {normalized * math.pi**2 / 3 - 1:+.2e}")

# %% [markdown]
# ## Cache file
# The cache is `PCL1`, the limit as u64, then spf as u32 (all little endian).

# %%
with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "sieve.bin"
    save_prime_table(t, path)
    back = load_prime_table(path)
    print(path.read_bytes()[:4], path.stat().st_size, "bytes")
    print(table_checksum(back) == table_checksum(t))
