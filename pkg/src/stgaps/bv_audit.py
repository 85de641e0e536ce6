"""Desk-scale Bombieri-Vinogradov audits by direct summation over residue classes.

Two shapes are audited:

* ``bv_sum_vm``: sum over q <= x^theta of max over y <= x and (a, q) = 1 of
  |psi_{pi x pi'}(y; q, a)|, with no main term subtracted.
* ``bv_sum_trig``: sum over q <= x^theta of max over (a, q) = 1 of the error in
  sum_{x < p <= 2x, p = a (q)} F(theta_1(p), theta_2(p)) against
  fhat00 (pi(2x) - pi(x)) / phi(q).

The modulus condition (q, N1 N2) = 1 uses rad(N1 N2) for both audits.
"""

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .arith import euler_phi, primes_up_to, rad
from .errors import ParameterError
from .rankin_selberg import vm_prime_powers
from .sato_tate import chebyshev_u_table


@dataclass(frozen=True)
class BVReport:
    x: float
    theta: float
    ident: str
    per_q: dict = field(default_factory=dict)

    @property
    def total(self):
        return float(sum(self.per_q[q] for q in sorted(self.per_q)))

    @property
    def normalized(self):
        return self.total / self.x

    def as_dict(self):
        return {
            "x": self.x,
            "theta": self.theta,
            "ident": self.ident,
            "per_q": {str(q): self.per_q[q] for q in sorted(self.per_q)},
            "total": self.total,
            "normalized": self.normalized,
        }


def moduli(x, theta, bad_modulus):
    """q <= x^theta coprime to bad_modulus (with a small guard against x^theta round-off)."""
    Q = int(np.floor(x**theta * (1 + 1e-12)))
    return [q for q in range(1, Q + 1) if gcd(q, bad_modulus) == 1]


def psi_in_progression(pair, y, q, a):
    """sum over n <= y, n = a (mod q) of Lambda_{pi x pi'}(n)."""
    if q < 1 or gcd(a, q) != 1:
        raise ParameterError("need q >= 1 and gcd(a, q) = 1")
    n, v = vm_prime_powers(pair, int(y))
    return float(np.sum(v[n % q == a % q]))


def _class_running_max(n, v, q):
    """max over prefixes (including the empty one) of |cumulative sum| for each class mod q."""
    cls = n % q
    order = np.argsort(cls, kind="stable")  # n is already sorted, so each class stays ordered
    cls, vals = cls[order], v[order]
    out = {a: 0.0 for a in range(q) if gcd(a, q) == 1}
    if not len(cls):
        return out
    starts = np.flatnonzero(np.r_[True, cls[1:] != cls[:-1]])
    for s, e in zip(starts, np.r_[starts[1:], len(cls)]):
        a = int(cls[s])
        if a in out:
            out[a] = float(np.max(np.abs(np.cumsum(vals[s:e]))))
    return out


def bv_sum_vm(x, theta, pair):
    """BVReport for the Rankin-Selberg von Mangoldt coefficients of ``pair``."""
    m, mp = pair.m1 + 1, pair.m2 + 1
    top = 2.0 / (2 * m * mp + 1)
    if not 0 < theta < top:
        raise ParameterError(f"theta={theta} must lie in (0, {top})")
    n, v = vm_prime_powers(pair, int(x))
    per_q = {}
    for q in moduli(x, theta, pair.bad_modulus):
        per_q[q] = max(_class_running_max(n, v, q).values())
    return BVReport(float(x), float(theta), pair.label(), per_q)


def _window_primes(x, tables):
    """Primes in (x, 2x] not dividing the levels, with both angle arrays."""
    A1, A2 = tables
    top = int(np.floor(2 * x))
    A1.check_coverage(top)
    A2.check_coverage(top)
    ps = primes_up_to(top)
    ps = ps[ps > x]
    t1, t2 = A1.aligned(ps), A2.aligned(ps)
    good = ~np.isnan(t1) & ~np.isnan(t2)
    return ps, t1, t2, good


def trig_class_errors(x, q, F, tables, decomposed=False):
    """Signed error per class a mod q, (a, q) = 1.

    ``decomposed=True`` uses the coefficientwise expansion: fhat00 times the
    classical error plus sum over (m1, m2) != (0, 0) of fhat[m1, m2] times the
    U_m1 U_m2-weighted class sums.
    """
    ps, t1, t2, good = _window_primes(x, tables)
    count = len(ps)
    fhat = F.fhat
    main = F.fhat00 * count / euler_phi(q)
    cls = ps % q
    out = {}
    if decomposed:
        u1 = chebyshev_u_table(F.degrees[0], np.cos(np.where(good, t1, 0.0)))
        u2 = chebyshev_u_table(F.degrees[1], np.cos(np.where(good, t2, 0.0)))
        for a in range(q):
            if gcd(a, q) != 1:
                continue
            sel = cls == a
            classical = np.count_nonzero(sel & good) - count / euler_phi(q)
            W = u1[sel & good].T @ u2[sel & good]
            W[0, 0] = 0.0
            out[a] = float(F.fhat00 * classical + np.sum(fhat * W))
        return out
    vals = np.zeros(count)
    vals[good] = F.evaluate(t1[good], t2[good])
    for a in range(q):
        if gcd(a, q) == 1:
            out[a] = float(np.sum(vals[cls == a]) - main)
    return out


def bv_sum_trig(x, theta, F, tables):
    """BVReport for the minorant-weighted prime sums over (x, 2x]."""
    M1, M2 = F.degrees
    top = 2.0 / (2 * (M1 + 1) * (M2 + 1) + 1)
    if not 0 < theta < top:
        raise ParameterError(f"theta={theta} must lie in (0, {top})")
    A1, A2 = tables
    bad = rad(A1.spec.level * A2.spec.level)
    per_q = {}
    for q in moduli(x, theta, bad):
        errs = trig_class_errors(x, q, F, tables)
        per_q[q] = max(abs(v) for v in errs.values())
    ident = f"minorant{M1}x{M2}:{A1.label},{A2.label}"
    return BVReport(float(x), float(theta), ident, per_q)


__all__ = [
    "BVReport",
    "bv_sum_trig",
    "bv_sum_vm",
    "moduli",
    "psi_in_progression",
    "trig_class_errors",
]
