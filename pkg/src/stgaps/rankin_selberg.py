"""Dirichlet coefficients of L(s, Sym^m1 f1 x Sym^m2 f2) from Sato-Tate angles.

At an unramified prime p the local Satake parameters are the products
e^{i(m1 - 2j) theta_1(p)} e^{i(m2 - 2j') theta_2(p)}, 0 <= j <= m1, 0 <= j' <= m2.
Their l-th power sums factor as U_m1(cos l theta_1) U_m2(cos l theta_2), which
gives the von Mangoldt coefficients; lambda and mu follow by exponentiating
the logarithmic derivative and by the elementary symmetric functions.

Ramified primes (p dividing N1 N2) get all three coefficients set to zero.
Only the trivial character is handled; a twist by chi would multiply every
coefficient at n by chi(n).
"""

import threading
from dataclasses import dataclass, field
from math import log

import mpmath
import numpy as np

from .arith import divisors, dk, factorize, primes_up_to, rad, smallest_prime_factor
from .cache import load_stream, store_stream
from .errors import CoverageError, ParameterError
from .sato_tate import chebyshev_u

__all__ = [
    "CoefficientStream",
    "SymPair",
    "VaughanParams",
    "clebsch_gordan_check",
    "dirichlet_lambda",
    "dirichlet_mu",
    "dk",
    "lambda_partial_sum",
    "vaughan_decompose",
    "summatory_reference",
    "vm_coefficient",
    "vm_prime_powers",
]


@dataclass(frozen=True)
class VaughanParams:
    U: float
    V: float

    def __post_init__(self):
        if self.U < 1 or self.V < 1:
            raise ParameterError("Vaughan parameters U, V must be >= 1")


@dataclass(eq=False)
class SymPair:
    """The pair (Sym^m1 f1, Sym^m2 f2) attached to two angle tables."""

    m1: int
    m2: int
    A1: object
    A2: object
    cache_dir: object = None
    _streams: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.m1 < 0 or self.m2 < 0 or (self.m1, self.m2) == (0, 0):
            raise ParameterError("symmetric powers must be nonnegative and not both zero")

    @property
    def bad_modulus(self):
        return rad(self.A1.spec.level * self.A2.spec.level)

    @property
    def degree(self):
        return (self.m1 + 1) * (self.m2 + 1)

    @property
    def pmax(self):
        return min(self.A1.pmax, self.A2.pmax)

    def label(self):
        return f"sym{self.m1}-{self.A1.label}_x_sym{self.m2}-{self.A2.label}"

    def check_coverage(self, p):
        if p > self.pmax:
            raise CoverageError(f"prime {p} beyond angle table coverage pmax={self.pmax}")

    def ramified(self, p):
        return self.bad_modulus % p == 0

    def angles(self, p):
        self.check_coverage(p)
        return self.A1.float_angle(p), self.A2.float_angle(p)

    def satake(self, p):
        """The (m1+1)(m2+1) local roots at an unramified p, in a fixed order."""
        t1, t2 = self.angles(p)
        return [
            np.exp(1j * ((self.m1 - 2 * j) * t1 + (self.m2 - 2 * jj) * t2))
            for j in range(self.m1 + 1)
            for jj in range(self.m2 + 1)
        ]

    def local_vm(self, p, ell):
        """Lambda(p^ell) / log p."""
        if self.ramified(p):
            self.check_coverage(p)
            return 0.0
        t1, t2 = self.angles(p)
        return float(chebyshev_u(self.m1, np.cos(ell * t1)) * chebyshev_u(self.m2, np.cos(ell * t2)))

    def local_lambda(self, p, top):
        """[lambda(p^0), ..., lambda(p^top)] by exponentiating sum Lambda(p^j) T^j / (j log p)."""
        out = [1.0] + [0.0] * top
        if self.ramified(p):
            self.check_coverage(p)
            return out
        power_sums = [0.0] + [self.local_vm(p, j) for j in range(1, top + 1)]
        for ell in range(1, top + 1):
            out[ell] = sum(power_sums[j] * out[ell - j] for j in range(1, ell + 1)) / ell
        return out

    def local_mu(self, p, top):
        """[mu(p^0), ..., mu(p^top)]: coefficients of prod (1 - alpha T)."""
        out = [1.0] + [0.0] * top
        if self.ramified(p):
            self.check_coverage(p)
            return out
        poly = np.array([1.0 + 0j])
        for root in self.satake(p):
            poly = np.convolve(poly, np.array([1.0, -root]))
        for ell in range(1, min(top, len(poly) - 1) + 1):
            out[ell] = float(poly[ell].real)
        return out

    def stream(self, limit):
        """Memoised CoefficientStream covering 1..limit."""
        with self._lock:
            for have, s in self._streams.items():
                if have >= limit:
                    return s
            s = self._cached_stream(limit) if self.cache_dir is not None else None
            if s is None:
                s = CoefficientStream(self, limit)
                if self.cache_dir is not None:
                    self._store_stream(s)
            self._streams[limit] = s
            return s

    def _stream_key(self, limit, kind):
        bits = min(self.A1.precision_bits, self.A2.precision_bits)
        return f"{self.label()}_{self.pmax}_{bits}_{limit}_{kind}"

    def _cached_stream(self, limit):
        arrays = []
        for kind in ("vm", "lambda", "mu"):
            values = load_stream(self.cache_dir, self._stream_key(limit, kind))
            if values is None or len(values) != limit + 1:
                return None
            arrays.append(np.array(values))
        return CoefficientStream.from_arrays(self, limit, *arrays)

    def _store_stream(self, s):
        for kind in ("vm", "lambda", "mu"):
            meta = {"pair": self.label(), "pmax": self.pmax, "limit": s.limit, "kind": kind}
            store_stream(self.cache_dir, self._stream_key(s.limit, kind), meta, s.series(kind))


class CoefficientStream:
    """Arrays vm, lam, mu indexed by n = 0..limit (index 0 unused)."""

    def __init__(self, pair, limit):
        limit = int(limit)
        if limit > pair.pmax:
            raise CoverageError(f"limit {limit} beyond angle table coverage pmax={pair.pmax}")
        self.pair = pair
        self.limit = limit
        n1 = max(limit, 1) + 1
        vm = np.zeros(n1)
        lam = np.zeros(n1)
        mu = np.zeros(n1)
        lam[1] = mu[1] = 1.0
        local = {}
        for p in primes_up_to(limit):
            p = int(p)
            top = 0
            q = p
            while q <= limit:
                top += 1
                vm[q] = pair.local_vm(p, top) * log(p)
                q *= p
            local[p] = (pair.local_lambda(p, top), pair.local_mu(p, top))
        spf = smallest_prime_factor(limit) if limit >= 2 else np.zeros(2, dtype=np.int64)
        for n in range(2, limit + 1):
            p = int(spf[n])
            m, e = n, 0
            while m % p == 0:
                m //= p
                e += 1
            lp, mp = local[p]
            lam[n] = lam[m] * lp[e]
            mu[n] = mu[m] * mp[e]
        self.vm, self.lam, self.mu = vm, lam, mu

    @classmethod
    def from_arrays(cls, pair, limit, vm, lam, mu):
        s = cls.__new__(cls)
        s.pair, s.limit = pair, limit
        s.vm, s.lam, s.mu = vm, lam, mu
        return s

    def series(self, kind):
        return {"vm": self.vm, "lambda": self.lam, "mu": self.mu}[kind]


def _prime_support(pair, n):
    if n < 1:
        raise ParameterError("n must be >= 1")
    f = factorize(n) if n > 1 else []
    for p, _ in f:
        pair.check_coverage(p)
    return f


def vm_coefficient(pair, n):
    """Lambda_{pi x pi'}(n)."""
    f = _prime_support(pair, n)
    if len(f) != 1:
        return 0.0
    p, ell = f[0]
    return pair.local_vm(p, ell) * log(p)


def dirichlet_lambda(pair, n):
    out = 1.0
    for p, ell in _prime_support(pair, n):
        out *= pair.local_lambda(p, ell)[ell]
    return out


def dirichlet_mu(pair, n):
    out = 1.0
    for p, ell in _prime_support(pair, n):
        out *= pair.local_mu(p, ell)[ell]
    return out


def _expand_exponent_roots(exps, theta):
    """Coefficients of prod (1 - e^{i k theta} T) over k in ``exps`` (mpc list)."""
    c = [mpmath.mpc(1)]
    for k in exps:
        r = mpmath.expj(k * theta)
        c.append(mpmath.mpc(0))
        for i in range(len(c) - 1, 0, -1):
            c[i] -= r * c[i - 1]
    return c


def clebsch_gordan_check(m1, m2, theta, precision_bits=128):
    """Max coefficient gap between the Sym^m1 x Sym^m2 local polynomial and the
    product of the Sym^{|m1 - m2| + 2j} local polynomials at a single angle.

    Both sides are expanded in extended precision: the coefficients reach
    binom(25, 12) for m1 = m2 = 4, so double-precision expansion alone
    would leave ~1e-9 of rounding noise.
    """
    lhs_exps = [(m1 - 2 * j) + (m2 - 2 * jj) for j in range(m1 + 1) for jj in range(m2 + 1)]
    rhs_exps = []
    for j in range(min(m1, m2) + 1):
        D = abs(m1 - m2) + 2 * j
        rhs_exps.extend(D - 2 * r for r in range(D + 1))
    if len(lhs_exps) != len(rhs_exps):
        return float("inf")
    with mpmath.workprec(precision_bits):
        t = mpmath.mpf(theta)
        lhs = _expand_exponent_roots(lhs_exps, t)
        rhs = _expand_exponent_roots(rhs_exps, t)
        return float(max(abs(a - b) for a, b in zip(lhs, rhs)))


def vaughan_decompose(pair, n, params, stream=None):
    """(a1, a2, a3, a4) with a1 + a2 + a3 + a4 = Lambda_{pi x pi'}(n)."""
    if stream is None or stream.limit < n:
        stream = pair.stream(n)
    vm, lam, mu = stream.vm, stream.lam, stream.mu
    U, V = params.U, params.V
    divs = divisors(n)
    a1 = vm[n] if n <= U else 0.0
    a2 = 0.0
    for j in divs:
        if j > U or vm[j] == 0.0:
            continue
        rest = n // j
        for ell in divisors(rest):
            if ell <= V:
                a2 -= vm[j] * mu[ell] * lam[rest // ell]
    a3 = sum(mu[ell] * lam[n // ell] * log(n // ell) for ell in divs if ell <= V)
    a4 = 0.0
    for j in divs:
        k = n // j
        if k == 1 or j <= U or vm[j] == 0.0:
            continue
        inner = sum(lam[k // ell] * mu[ell] for ell in divisors(k) if ell <= V)
        a4 -= vm[j] * inner
    return a1, a2, a3, a4


def lambda_partial_sum(pair, x):
    """sum_{n <= x} lambda_{pi x pi'}(n)."""
    x = int(np.floor(x))
    if x < 1:
        return 0.0
    return float(np.sum(pair.stream(x).lam[1 : x + 1]))


def summatory_reference(x, m1, m2, theta):
    """x^(1 - c(theta)) with c(theta) = (2 - m m' theta) / (m m' + 1)."""
    mm = (m1 + 1) * (m2 + 1)
    c = (2.0 - mm * theta) / (mm + 1.0)
    return x ** (1.0 - c)


def vm_prime_powers(pair, x):
    """Sorted prime powers n <= x with their Lambda_{pi x pi'}(n), vectorised."""
    x = int(x)
    if x > pair.pmax:
        raise CoverageError(f"x={x} beyond angle table coverage pmax={pair.pmax}")
    primes = primes_up_to(x)
    t1 = np.nan_to_num(pair.A1.aligned(primes))
    t2 = np.nan_to_num(pair.A2.aligned(primes))
    good = np.array([not pair.ramified(int(p)) for p in primes]) if pair.bad_modulus > 1 else np.ones(len(primes), bool)
    ns, vals = [], []
    ell = 1
    pw = primes.astype(np.int64)
    while len(pw) and pw[0] <= x:
        keep = pw <= x
        p = primes[keep]
        v = chebyshev_u(pair.m1, np.cos(ell * t1[keep])) * chebyshev_u(pair.m2, np.cos(ell * t2[keep]))
        v = v * np.log(p) * good[keep]
        ns.append(pw[keep])
        vals.append(v)
        ell += 1
        pw = pw[keep] * primes[keep]
        primes, t1, t2, good = primes[keep], t1[keep], t2[keep], good[keep]
    if not ns:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    n = np.concatenate(ns)
    v = np.concatenate(vals)
    order = np.argsort(n, kind="stable")
    return n[order], v[order]
