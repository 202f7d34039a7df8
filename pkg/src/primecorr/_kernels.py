"""Compiled inner loops.

Everything here works on plain numpy arrays so the public modules can keep
their dataclass wrappers thin.  All per-N loops are independent, so results
do not depend on the number of threads numba runs with.
"""

import math
import warnings

import numpy as np
from numba import njit, prange

# numba falls back to another threading layer on its own
warnings.filterwarnings("ignore", message="The TBB threading layer")

VON_MANGOLDT = 0
TRUNCATED = 1
MASTER = 2


@njit(cache=True)
def linear_sieve(limit):
    spf = np.zeros(limit + 1, dtype=np.uint32)
    # pi(x) < 1.25506 x / log x for x > 1
    cap = int(1.26 * limit / math.log(limit)) + 16
    primes = np.empty(cap, dtype=np.int64)
    count = 0
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[count] = i
            count += 1
        s = np.int64(spf[i])
        for j in range(count):
            p = primes[j]
            if p > s or p * i > limit:
                break
            spf[p * i] = p
    return spf, primes[:count].copy()


@njit(cache=True)
def omega_table(spf):
    n_max = spf.size - 1
    out = np.zeros(n_max + 1, dtype=np.int32)
    for n in range(2, n_max + 1):
        out[n] = out[n // spf[n]] + 1
    return out


@njit(cache=True)
def phi_table(spf):
    n_max = spf.size - 1
    out = np.zeros(n_max + 1, dtype=np.int64)
    if n_max >= 1:
        out[1] = 1
    for n in range(2, n_max + 1):
        p = np.int64(spf[n])
        m = n // p
        if m % p == 0:
            out[n] = out[m] * p
        else:
            out[n] = out[m] * (p - 1)
    return out


@njit(cache=True)
def weight_values(spf, limit, kind):
    out = np.zeros(limit + 1, dtype=np.float64)
    for n in range(2, limit + 1):
        p = np.int64(spf[n])
        m = n // p
        if kind == VON_MANGOLDT:
            while m % p == 0:
                m //= p
            if m == 1:
                out[n] = math.log(p)
        elif kind == TRUNCATED:
            if m == 1:
                out[n] = math.log(n)
        else:
            if m > 1 and spf[m] == m:
                if m == p:
                    out[n] = math.log(p)
                else:
                    out[n] = math.log(n)
    return out


@njit(cache=True, inline="always")
def _neumaier(s, c, x):
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


@njit(cache=True, parallel=True)
def direct_correlations(values, support, ns):
    """sum_{n=1}^{N-1} f(n) f(N-n) for each N, walking only the support of f."""
    out = np.zeros(ns.size, dtype=np.float64)
    for i in prange(ns.size):
        big_n = ns[i]
        s = 0.0
        c = 0.0
        for j in range(support.size):
            a = support[j]
            b = big_n - a
            if b <= a:
                break
            wb = values[b]
            if wb != 0.0:
                s, c = _neumaier(s, c, 2.0 * values[a] * wb)
        if big_n % 2 == 0:
            w = values[big_n // 2]
            if w != 0.0:
                s, c = _neumaier(s, c, w * w)
        out[i] = s + c
    return out


@njit(cache=True)
def _distinct_primes(spf, n, buf):
    k = 0
    while n > 1:
        p = np.int64(spf[n])
        buf[k] = p
        k += 1
        while n % p == 0:
            n //= p
    return k


@njit(cache=True, parallel=True)
def split_by_gcd(spf, values, support, ns):
    """Split the self-correlation of f at each N by gcd(n, N - n) > 1 versus = 1.

    gcd(n, N - n) = gcd(n, N), so a pair is non-coprime exactly when n shares
    a prime with N.  No structure of the support is assumed.
    """
    noncoprime = np.zeros(ns.size, dtype=np.float64)
    coprime = np.zeros(ns.size, dtype=np.float64)
    for i in prange(ns.size):
        big_n = ns[i]
        buf = np.empty(16, dtype=np.int64)
        k = _distinct_primes(spf, big_n, buf)
        s1 = 0.0
        c1 = 0.0
        s0 = 0.0
        c0 = 0.0
        for j in range(support.size):
            a = support[j]
            b = big_n - a
            if b <= a:
                break
            wb = values[b]
            if wb == 0.0:
                continue
            term = 2.0 * values[a] * wb
            shared = False
            for q in range(k):
                if a % buf[q] == 0:
                    shared = True
                    break
            if shared:
                s1, c1 = _neumaier(s1, c1, term)
            else:
                s0, c0 = _neumaier(s0, c0, term)
        if big_n % 2 == 0 and big_n >= 4:
            # gcd(N/2, N/2) = N/2 > 1
            w = values[big_n // 2]
            if w != 0.0:
                s1, c1 = _neumaier(s1, c1, w * w)
        noncoprime[i] = s1 + c1
        coprime[i] = s0 + c0
    return noncoprime, coprime


@njit(cache=True, parallel=True)
def noncoprime_by_cofactor(spf, master, primes, ns):
    """Non-coprime part of the master-weight correlation, built from prime pairs.

    A non-coprime pair with both entries of Omega = 2 has the shape
    (p*a, p*b) with p | N and a + b = N/p, a and b prime.  Each pair is
    credited to the smallest prime of gcd(p*a, p*b) so nothing is counted
    twice.
    """
    out = np.zeros(ns.size, dtype=np.float64)
    for i in prange(ns.size):
        big_n = ns[i]
        buf = np.empty(16, dtype=np.int64)
        k = _distinct_primes(spf, big_n, buf)
        s = 0.0
        c = 0.0
        for q in range(k):
            p = buf[q]
            m = big_n // p
            for j in range(primes.size):
                a = primes[j]
                b = m - a
                if b < a:
                    break
                if spf[b] != b:
                    continue
                if a == b:
                    if a < p:
                        continue
                    w = master[p * a]
                    s, c = _neumaier(s, c, w * w)
                else:
                    s, c = _neumaier(s, c, 2.0 * master[p * a] * master[p * b])
        out[i] = s + c
    return out


@njit(cache=True, parallel=True)
def singular_factors(spf, ns):
    """prod_{p | N, p > 2} (p - 1)/(p - 2) for each N."""
    out = np.ones(ns.size, dtype=np.float64)
    for i in prange(ns.size):
        n = ns[i]
        f = 1.0
        while n > 1:
            p = np.int64(spf[n])
            if p > 2:
                f *= (p - 1.0) / (p - 2.0)
            while n % p == 0:
                n //= p
        out[i] = f
    return out
