"""Maynard-Tao sieve machinery at desk scale.

Covers admissible tuples, the parameter bundle (theta, delta, D0, R, W, U, u0),
the sieve weights lambda_d and w_n by exact enumeration, exact simplex
integrals of polynomial test functions, a Rayleigh-quotient lower bound for
M_k, r_k, the explicit gap-bound pipeline in log space, empirical S1/S2 sums
and the Pintz-set scanner.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, factorial, gcd, lcm, log, prod

import numpy as np
import scipy.linalg

from .arith import (
    divisors,
    euler_phi,
    is_prime,
    mobius,
    nth_primes,
    prime_mask,
    primes_up_to,
    smallest_prime_factor,
)
from .errors import CapacityError, CoverageError, ParameterError, StgapsError

MAX_R = 100_000
MAX_K = 4
EXACT_DIAM_LOG_K = log(1e6)


# ---------------------------------------------------------------------------
# admissible tuples


def missing_residue(h, p):
    """Smallest residue mod p avoided by every h_j, or None if all are hit."""
    hit = {x % p for x in h}
    for a in range(p):
        if a not in hit:
            return a
    return None


def is_admissible(h):
    """(admissible, witnesses) with witnesses[p] a residue missed by h mod p, p <= k."""
    h = list(h)
    if len(set(h)) != len(h):
        raise ParameterError("tuple entries must be distinct")
    witnesses = {}
    for p in primes_up_to(max(len(h), 1)):
        a = missing_residue(h, int(p))
        if a is None:
            return False, {}
        witnesses[int(p)] = a
    return True, witnesses


@dataclass(frozen=True)
class AdmissibleTuple:
    h: tuple
    witnesses: dict = field(compare=False)

    def __post_init__(self):
        if list(self.h) != sorted(set(self.h)) or not self.h or self.h[0] != 0:
            raise ParameterError("tuple must be strictly increasing and start at 0")

    @classmethod
    def from_iterable(cls, h):
        h = tuple(sorted(int(x) for x in h))
        shifted = tuple(x - h[0] for x in h)
        ok, wit = is_admissible(shifted)
        if not ok:
            raise ParameterError(f"{h} is not admissible")
        return cls(shifted, wit)

    @property
    def k(self):
        return len(self.h)

    @property
    def diam(self):
        return self.h[-1] - self.h[0]

    def witness(self, p):
        return self.witnesses.get(p, missing_residue(self.h, p))


def prime_tuple(k):
    """The k primes after p_{pi(k)}, shifted to start at 0."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    start = int(np.count_nonzero(prime_mask(k)))
    ps = nth_primes(start + k)[start:]
    return AdmissibleTuple.from_iterable(ps)


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class SieveConfig:
    theta: float
    delta: float
    D0: int
    x: float
    R: float
    W: int
    U: int
    u0: int
    bad_modulus: int
    H: AdmissibleTuple
    theta_tilde: float

    @property
    def k(self):
        return self.H.k


def theta_tilde(m1, m2):
    return 1.0 / ((m1 + 1) * (m2 + 1) + 2)


def sieve_setup(theta, delta, D0, x, bad_modulus, H, degrees=(27, 27), R=None):
    """Build a SieveConfig; u0 solves u0 = -a_p (mod p) for every p | U.

    ``R`` defaults to x^(theta/2 - delta); desk-scale experiments pass it
    explicitly.
    """
    if not isinstance(H, AdmissibleTuple):
        H = AdmissibleTuple.from_iterable(H)
    tt = theta_tilde(*degrees)
    if not 0 < theta < tt:
        raise ParameterError(f"theta={theta} must lie in (0, {tt})")
    if not 0 < delta < theta / 2:
        raise ParameterError(f"delta={delta} must lie in (0, theta/2)")
    if D0 is None:
        D0 = max(H.diam + 1, 12)
    if D0 < 2:
        raise ParameterError("D0 must be >= 2")
    if R is None:
        R = float(x) ** (theta / 2 - delta)
    small = [int(p) for p in primes_up_to(D0)]
    W = prod(small)
    good = [p for p in small if bad_modulus % p]
    U = prod(good)
    u0 = 0
    modulus = 1
    for p in good:
        a = H.witness(p)
        if a is None:
            raise ParameterError(f"tuple covers every residue mod {p}")
        target = (-a) % p
        # u0 + modulus * t = target (mod p)
        t = ((target - u0) * pow(modulus, -1, p)) % p
        u0 += modulus * t
        modulus *= p
    u0 %= U
    for h in H.h:
        if gcd(u0 + h, U) != 1:
            raise StgapsError(f"CRT postcondition failed for h={h}")
    return SieveConfig(theta, delta, D0, float(x), float(R), W, U, u0, bad_modulus, H, tt)


# ---------------------------------------------------------------------------
# polynomials on the simplex


@dataclass(frozen=True)
class PolynomialG:
    """Polynomial in t_1..t_k with exact rational coefficients.

    ``terms`` maps exponent tuples of length k to Fractions.
    """

    k: int
    terms: dict

    @classmethod
    def constant(cls, k, c=1):
        return cls(k, {(0,) * k: Fraction(c)})

    @classmethod
    def one_minus_sum(cls, k):
        terms = {(0,) * k: Fraction(1)}
        for i in range(k):
            e = [0] * k
            e[i] = 1
            terms[tuple(e)] = Fraction(-1)
        return cls(k, terms)

    @classmethod
    def monomial_symmetric(cls, partition, k):
        parts = tuple(sorted(partition, reverse=True)) + (0,) * (k - len(partition))
        if len(parts) > k:
            raise ParameterError("partition longer than the number of variables")
        return cls(k, {e: Fraction(1) for e in multiset_permutations(parts)})

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    @property
    def symmetric(self):
        return all(self.terms.get(tuple(e[i] for i in perm), 0) == c
                   for e, c in self.terms.items()
                   for perm in _adjacent_swaps(self.k))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return PolynomialG(self.k, {e: c for e, c in out.items() if c})

    def __mul__(self, other):
        if not isinstance(other, PolynomialG):
            return PolynomialG(self.k, {e: c * Fraction(other) for e, c in self.terms.items() if c * other})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return PolynomialG(self.k, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def evaluate(self, t):
        return float(sum(float(c) * prod(ti**ei for ti, ei in zip(t, e)) for e, c in self.terms.items()))

    def evaluate_many(self, pts):
        """Vectorised float evaluation at an (n, k) array."""
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(len(pts))
        powers = {}
        for e, c in self.terms.items():
            term = np.full(len(pts), float(c))
            for i, a in enumerate(e):
                if a:
                    if (i, a) not in powers:
                        powers[i, a] = pts[:, i] ** a
                    term *= powers[i, a]
            out += term
        return out


def _adjacent_swaps(k):
    for i in range(k - 1):
        perm = list(range(k))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        yield perm


@lru_cache(maxsize=None)
def _fact(n):
    return factorial(n)


def dirichlet_integral(exps, c=0):
    """Integral over {t >= 0, sum t <= 1} in len(exps) variables of prod t^a (1 - sum t)^c."""
    return Fraction(prod(_fact(a) for a in exps) * _fact(c), _fact(len(exps) + sum(exps) + c))


def _inner_integral(G, m):
    """int_0^{1 - sum_{i != m} t_i} G dt_m as {(exps without m, power of (1 - sum)): coeff}."""
    out = {}
    for e, c in G.terms.items():
        key = (e[:m] + e[m + 1 :], e[m] + 1)
        out[key] = out.get(key, 0) + c / (e[m] + 1)
    return out


def simplex_integrals(G, k=None):
    """Exact (I_k(G), [J_k^(1)(G), ..., J_k^(k)(G)]) for G supported on the simplex."""
    k = G.k if k is None else k
    if k != G.k:
        raise ParameterError("k does not match the polynomial's variable count")
    items = list(G.terms.items())
    I = Fraction(0)
    for e1, c1 in items:
        for e2, c2 in items:
            I += c1 * c2 * dirichlet_integral(tuple(a + b for a, b in zip(e1, e2)))
    J = []
    for m in range(k):
        H = list(_inner_integral(G, m).items())
        total = Fraction(0)
        for (e1, p1), c1 in H:
            for (e2, p2), c2 in H:
                total += c1 * c2 * dirichlet_integral(tuple(a + b for a, b in zip(e1, e2)), p1 + p2)
        J.append(total)
    return I, J


def partitions_up_to(degree, max_len):
    """All integer partitions with size <= degree and at most max_len parts."""
    out = [()]

    def grow(prefix, remaining, cap):
        for part in range(min(remaining, cap), 0, -1):
            nxt = prefix + (part,)
            if len(nxt) <= max_len:
                out.append(nxt)
                grow(nxt, remaining - part, part)

    grow((), degree, degree)
    return out


def multiset_permutations(items):
    """Distinct orderings of a multiset, in lexicographic order."""
    counts = Counter(items)
    values = sorted(counts)
    n = len(items)

    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in values:
            if counts[v]:
                counts[v] -= 1
                prefix.append(v)
                yield from rec(prefix)
                prefix.pop()
                counts[v] += 1

    yield from rec([])


def _orbit(partition, k):
    return list(multiset_permutations(tuple(partition) + (0,) * (k - len(partition))))


def symmetric_gram(k, degree_cap):
    """Exact Gram matrices (A, B) of the monomial symmetric basis:
    A_ij = I-form of (b_i, b_j), B_ij = sum over m of the J^(m)-form."""
    basis = partitions_up_to(degree_cap, k)
    orbits = [_orbit(lam, k) for lam in basis]
    n = len(basis)
    L = lcm(*range(1, degree_cap + 2)) ** 2
    A = [[Fraction(0)] * n for _ in range(n)]
    B = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        sigma = orbits[i][0]
        for j in range(i, n):
            # both sums are invariant under simultaneous permutation, so fix sigma
            a_sum = 0
            b_sum = 0
            for tau in orbits[j]:
                s = [x + y for x, y in zip(sigma, tau)]
                P = prod(_fact(v) for v in s)
                a_sum += P
                # dropping t_m and integrating it out turns s_m! into (s_m + 2)!
                b_sum += P * sum(
                    (v + 1) * (v + 2) * (L // ((a + 1) * (b + 1))) for v, a, b in zip(s, sigma, tau)
                )
            size = sum(sigma) + sum(orbits[j][0])
            mult = len(orbits[i])
            A[i][j] = A[j][i] = Fraction(mult * a_sum, _fact(k + size))
            B[i][j] = B[j][i] = Fraction(mult * b_sum, L * _fact(k + 1 + size))
    return basis, A, B


def _rayleigh_exact(v, A, B):
    vf = [Fraction(float(x)) for x in v]
    n = len(vf)
    num = sum(vf[i] * B[i][j] * vf[j] for i in range(n) for j in range(n))
    den = sum(vf[i] * A[i][j] * vf[j] for i in range(n) for j in range(n))
    return num / den


def mk_lower_bound(k, degree_cap, return_details=False):
    """Best sum_m J_k^(m)(G) / I_k(G) over symmetric G of degree <= degree_cap.

    The returned value is the exact Rayleigh quotient of the float eigenvector,
    so it is attained by an explicit polynomial.
    """
    if k < 2 or degree_cap < 1:
        raise ParameterError("need k >= 2 and degree_cap >= 1")
    basis, A, B = symmetric_gram(k, degree_cap)
    Af = np.array([[float(x) for x in row] for row in A])
    Bf = np.array([[float(x) for x in row] for row in B])
    try:
        w, V = scipy.linalg.eigh(Bf, Af)
        v = V[:, -1]
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        # restrict to the numerically nonsingular part of A
        evals, evecs = np.linalg.eigh(Af)
        keep = evals > 1e-12 * evals.max()
        if not keep.any():
            raise StgapsError("Gram matrix is singular after basis reduction")
        P = evecs[:, keep] / np.sqrt(evals[keep])
        w2, V2 = np.linalg.eigh(P.T @ Bf @ P)
        v = P @ V2[:, -1]
    value = float(_rayleigh_exact(v, A, B))
    if return_details:
        return value, {"basis": basis, "vector": v.tolist()}
    return value


def witness_ratio(k):
    """sum J / I for G = 1 - sum t, which is 3k / (k + 3)."""
    return Fraction(3 * k, k + 3)


# ---------------------------------------------------------------------------
# sieve weights


def maynard_lambda(d, G, cfg):
    """lambda_{d_1..d_k} by exact enumeration of the r-sum over prod r < R."""
    d = tuple(int(x) for x in d)
    k = len(d)
    if k != G.k:
        raise ParameterError("d and G have different dimensions")
    R = cfg.R
    if R > MAX_R or k > MAX_K:
        raise CapacityError(f"exact enumeration needs R <= {MAX_R} and k <= {MAX_K}")
    dd = prod(d)
    if dd >= R or mobius(dd) == 0 or gcd(dd, cfg.W) != 1:
        return 0.0
    logR = log(R)
    sign = prod(mobius(x) * x for x in d)
    total = 0.0
    for r in _r_tuples(d, R, cfg.W):
        total += G.evaluate([log(x) / logR for x in r]) / prod(euler_phi(x) for x in r)
    return sign * total


def _r_tuples(d, R, W):
    """Tuples r with d_j | r_j, (r_j, W) = 1 and prod r squarefree and < R."""
    k = len(d)

    def rec(j, acc, used):
        if j == k:
            yield ()
            return
        step = d[j]
        r = step
        while acc * r < R:
            if gcd(r, W) == 1 and gcd(r, used) == 1 and mobius(r) != 0:
                for rest in rec(j + 1, acc * r, used * r):
                    yield (r,) + rest
            r += step

    yield from rec(0, 1, 1)


class LambdaProvider:
    """Memoised lambda_d for fixed G and configuration."""

    def __init__(self, G, cfg):
        self.G, self.cfg = G, cfg
        self._memo = {}

    def __call__(self, d):
        d = tuple(d)
        if d not in self._memo:
            self._memo[d] = maynard_lambda(d, self.G, self.cfg)
        return self._memo[d]


def _divisor_tuples(values, R, W):
    """Tuples d with d_j | values_j, squarefree pairwise coprime, (d_j, W) = 1, prod < R."""
    options = [[x for x in divisors(v) if gcd(x, W) == 1 and mobius(x) != 0] for v in values]

    def rec(j, acc):
        if j == len(options):
            yield ()
            return
        for x in options[j]:
            if acc * x < R and gcd(x, acc) == 1:
                for rest in rec(j + 1, acc * x):
                    yield (x,) + rest

    yield from rec(0, 1)


def weight_w(n, cfg, lam, H=None):
    """w_n: squared sum of lambda_d over d_j | n + h_j, or 0 off the class u0 mod U."""
    H = cfg.H if H is None else H
    if n % cfg.U != cfg.u0 % cfg.U:
        return 0.0
    s = sum(lam(d) for d in _divisor_tuples([n + h for h in H.h], cfg.R, cfg.W))
    return s * s


def s_sums_empirical(x, cfg, H, F, tables, rho, lam=None):
    """(S1, S2, S2 - rho S1) by direct summation over x < n <= 2x, n = u0 (mod U).

    Primes dividing N1 N2 carry no angle and contribute nothing to S2.
    """
    H = cfg.H if H is None else H
    A1, A2 = tables
    top = int(2 * x) + H.h[-1]
    for A in (A1, A2):
        if top > A.pmax:
            raise CoverageError(f"{A.label}: need angles up to {top}, table stops at {A.pmax}")
    if lam is None:
        lam = LambdaProvider(_default_G(H.k), cfg)
    mask = prime_mask(top)
    S1 = S2 = 0.0
    start = int(x) + 1
    first = start + ((cfg.u0 - start) % cfg.U)
    for n in range(first, int(2 * x) + 1, cfg.U):
        w = weight_w(n, cfg, lam, H)
        if w == 0.0:
            continue
        S1 += w
        hits = 0.0
        for h in H.h:
            p = n + h
            if mask[p] and cfg.bad_modulus % p and p in A1.entries and p in A2.entries:
                hits += float(F.evaluate(A1.float_angle(p), A2.float_angle(p)))
        S2 += hits * w
    return S1, S2, S2 - rho * S1


def _default_G(k):
    return PolynomialG.one_minus_sum(k)


def rho_default(bad_modulus, fhat00, theta, Mk, eps=0.01):
    return euler_phi(bad_modulus) / bad_modulus * fhat00 * theta * Mk / 2 - eps


# ---------------------------------------------------------------------------
# r_k and the explicit bound


def rk_value(bad_modulus, fhat00, Mk, theta):
    """ceil(phi(N)/N * fhat00 * M_k * theta / 2)."""
    if fhat00 <= 0:
        raise ParameterError("fhat00 must be positive")
    return ceil(euler_phi(bad_modulus) / bad_modulus * fhat00 * Mk * theta / 2)


def explicit_gap_bound(m, N1, N2, fhat00, M1, M2, c1=3.0):
    """Log-space evaluation of the explicit bounded-gap recipe.

    c1 stands in for the unspecified absolute constant in M_k >= log k - c1;
    the default 3 is a placeholder, not a proven value.
    """
    if fhat00 <= 0:
        raise ParameterError("fhat00 must be positive")
    N = N1 * N2
    inv_tt = (M1 + 1) * (M2 + 1) + 2
    core = 2 * N * m * inv_tt / (euler_phi(N) * fhat00)
    log_k = max(log(3), core + c1 + 1)
    tt = 1.0 / inv_tt
    out = {
        "log_k": log_k,
        "theta_tilde": tt,
        "theta": (1 - 1 / log_k) * tt,
        "log_diam_bound": log_k + log(log_k + log(log_k) + 1),
        "c1": c1,
        "k": None,
        "diam_exact": None,
    }
    if log_k <= EXACT_DIAM_LOG_K:
        k = max(3, ceil(np.exp(core + c1 + 1)))
        H = prime_tuple(k)
        out["k"] = k
        out["diam_exact"] = H.diam
    return out


# ---------------------------------------------------------------------------
# Pintz-set scanner


def joint_membership(A1, A2, I1, I2):
    """Callable p -> bool for membership in the joint Sato-Tate prime set."""
    level = A1.spec.level * A2.spec.level

    def member(p):
        if p > A1.pmax or p > A2.pmax:
            raise CoverageError(f"prime {p} beyond angle table coverage")
        if not is_prime(p) or level % p == 0:
            return False
        t1, t2 = A1.float_angle(p), A2.float_angle(p)
        return I1.a <= t1 <= I1.b and I2.a <= t2 <= I2.b

    return member


def pintz_scan(x, H, gamma1, m, member):
    """n in [x, 2x] with P^-(prod (n + h_j)) >= n^gamma1 and at least m + 1 members."""
    if not 0 < gamma1 < 1:
        raise ParameterError("gamma1 must lie in (0, 1)")
    h = H.h if isinstance(H, AdmissibleTuple) else tuple(H)
    if m + 1 > len(h):
        return []
    lo, hi = int(np.ceil(x)), int(np.floor(2 * x))
    spf = smallest_prime_factor(hi + max(h))
    out = []
    for n in range(max(lo, 1), hi + 1):
        least = min(int(spf[n + hj]) if n + hj > 1 else 1 for hj in h)
        if least < n**gamma1:
            continue
        if sum(1 for hj in h if member(n + hj)) >= m + 1:
            out.append(n)
    return out
