"""Elementary arithmetic helpers shared by every module."""

from functools import lru_cache
from math import comb, isqrt

import gmpy2
import numpy as np


def prime_mask(n):
    """Boolean array ``mask`` of length n+1 with ``mask[p]`` true iff p is prime."""
    n = int(n)
    mask = np.ones(max(n + 1, 2), dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask[: n + 1]


def primes_up_to(n):
    return np.flatnonzero(prime_mask(n))


def smallest_prime_factor(n):
    """spf[m] for 0 <= m <= n (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
            spf[p] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


def is_prime(n):
    return n >= 2 and bool(gmpy2.is_prime(n))


def factorize(n):
    """Prime factorisation as a sorted list of (p, exponent)."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    return out


def prime_power(n):
    """Return (p, l) if n = p**l with l >= 1, else None."""
    if n < 2:
        return None
    f = factorize(n)
    return f[0] if len(f) == 1 else None


def euler_phi(n):
    r = n
    for p, _ in factorize(n):
        r = r // p * (p - 1)
    return r


def mobius(n):
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def rad(n):
    r = 1
    for p, _ in factorize(n):
        r *= p
    return r


def divisors(n):
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def dk(n, k):
    """k-fold divisor function d_k(n)."""
    if n < 1 or k < 1:
        raise ValueError("dk expects n, k >= 1")
    out = 1
    for _, a in factorize(n):
        out *= comb(k + a - 1, k - 1)
    return out


@lru_cache(maxsize=None)
def nth_primes(count):
    """The first ``count`` primes as a tuple."""
    if count <= 0:
        return ()
    bound = 16
    while True:
        ps = primes_up_to(bound)
        if len(ps) >= count:
            return tuple(int(p) for p in ps[:count])
        bound *= 2


def prime_pi(x, mask=None):
    x = int(x)
    if x < 2:
        return 0
    if mask is None or len(mask) <= x:
        mask = prime_mask(x)
    return int(np.count_nonzero(mask[: x + 1]))
