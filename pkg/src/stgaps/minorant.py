"""Two-dimensional Chebyshev minorants of boxes in [0, pi]^2.

Construction, bottom up:

* ``selberg_pair_1d`` builds the Beurling-Selberg minorant/majorant of an arc
  J of R/Z from Vaaler's approximation V_K of the sawtooth psi(x) = {x} - 1/2
  and the Fejer kernel: with |psi - V_K| <= Fejer_{K+1} / (2K + 2),

      s(x) = |J| + V_K(alpha - x) + V_K(x - beta)
             -/+ (Fejer_{K+1}(alpha - x) + Fejer_{K+1}(x - beta)) / (2K + 2).

* ``box_minorant`` combines two such pairs into
  S = s1- (x) s2+ + s1+ (x) s2- - s1+ (x) s2+, which lies below the indicator of
  J1 x J2 whenever s- <= 1_J <= s+. S is kept in this rank-3 factored form so
  high degrees never materialise the full (2M1+1) x (2M2+1) coefficient grid.

* ``fold_to_chebyshev`` sums S over the four sign reflections of
  (theta1 / 2 pi, theta2 / 2 pi) and rewrites cos(n theta) in the basis
  U_n(cos theta).
"""

from dataclasses import dataclass, field
from math import ceil, pi

import numpy as np

from .errors import DegeneracyError, ParameterError
from .sato_tate import Interval, chebyshev_u_table, st_measure

DOMINANCE_TOL = 1e-9
COR_CONSTANT = 4581.0
DEGREE_CONSTANT = 27.8


def e(x):
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


def indicator_fourier(alpha, beta, n):
    """Fourier coefficient at n of the indicator of [alpha, beta] within [0, 1]."""
    if not (0.0 <= alpha <= beta <= 1.0):
        raise ParameterError(f"[{alpha}, {beta}] is not inside [0, 1]")
    if n == 0:
        return complex(beta - alpha)
    return complex((e(-n * alpha) - e(-n * beta)) / (2j * pi * n))


def indicator_fourier_vector(alpha, beta, degree):
    """indicator_fourier for k = -degree..degree as an array."""
    k = np.arange(-degree, degree + 1)
    out = np.empty(2 * degree + 1, dtype=complex)
    nz = k != 0
    out[nz] = (e(-k[nz] * alpha) - e(-k[nz] * beta)) / (2j * np.pi * k[nz])
    out[degree] = beta - alpha
    return out


# ---------------------------------------------------------------------------
# one dimension


@dataclass(frozen=True)
class TrigPoly1D:
    """Real trigonometric polynomial sum_{|k| <= N} c_k e(k x) on R/Z.

    ``coeffs[k + N]`` holds c_k.
    """

    degree: int
    coeffs: np.ndarray = field(repr=False)

    def coeff(self, k):
        if abs(k) > self.degree:
            return 0j
        return complex(self.coeffs[k + self.degree])

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        k = np.arange(1, self.degree + 1)
        pos = self.coeffs[self.degree + 1 :]
        phase = np.exp(2j * np.pi * np.multiply.outer(x, k))
        return self.coeffs[self.degree].real + 2.0 * (phase @ pos).real

    def is_conjugate_symmetric(self, tol=1e-15):
        return bool(np.allclose(self.coeffs, np.conj(self.coeffs[::-1]), rtol=0, atol=tol))

    def even_cosine_coeffs(self):
        """c with g(t / 2 pi) + g(-t / 2 pi) = sum_n c_n cos(n t)."""
        pos = self.coeffs[self.degree :]
        neg = self.coeffs[self.degree :: -1]
        c = 2.0 * (pos + neg).real
        c[0] = 2.0 * self.coeffs[self.degree].real
        return c


def vaaler_taper(u):
    """pi u (1 - u) cot(pi u) + u on (0, 1)."""
    u = np.asarray(u, dtype=float)
    return np.pi * u * (1.0 - u) / np.tan(np.pi * u) + u


def selberg_pair_1d(alpha, beta, degree):
    """Selberg minorant and majorant of the indicator of [alpha, beta], degree N.

    Returns (minorant, majorant) as TrigPoly1D.
    """
    if not (0.0 <= alpha <= beta <= 1.0):
        raise ParameterError(f"[{alpha}, {beta}] is not inside [0, 1]")
    if degree < 1:
        raise ParameterError("degree must be >= 1")
    K = degree
    k = np.arange(-K, K + 1)
    absk = np.abs(k)
    taper = np.ones(2 * K + 1)
    nz = k != 0
    taper[nz] = vaaler_taper(absk[nz] / (K + 1))
    fejer = 1.0 - absk / (K + 1)
    ea, eb = e(-k * alpha), e(-k * beta)
    # V(alpha - x) + V(x - beta) has coefficient taper(k) * indicator_fourier(k)
    core = taper * indicator_fourier_vector(alpha, beta, K)
    core[K] = beta - alpha
    bump = fejer * (ea + eb) / (2 * K + 2)
    lo = TrigPoly1D(K, core - bump)
    hi = TrigPoly1D(K, core + bump)
    return lo, hi


# ---------------------------------------------------------------------------
# two dimensions


@dataclass(frozen=True)
class TrigPoly2D:
    """Real trigonometric polynomial in two variables.

    Stored either as a sum of weighted products ``terms = ((w, g, h), ...)``
    with S(x1, x2) = sum w g(x1) h(x2), or as a dense coefficient array
    ``dense[m1 + M1, m2 + M2]``.
    """

    degrees: tuple
    terms: tuple = ()
    dense: np.ndarray = field(default=None, repr=False)

    def coeff(self, m1, m2):
        M1, M2 = self.degrees
        if abs(m1) > M1 or abs(m2) > M2:
            return 0j
        if self.dense is not None:
            return complex(self.dense[m1 + M1, m2 + M2])
        return sum(w * g.coeff(m1) * h.coeff(m2) for w, g, h in self.terms)

    def coeff_matrix(self):
        if self.dense is not None:
            return self.dense
        return sum(w * np.outer(g.coeffs, h.coeffs) for w, g, h in self.terms)

    def evaluate_grid(self, x1, x2):
        """Values on the product grid x1 (rows) by x2 (columns)."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        if self.dense is None:
            return sum(w * np.outer(g.evaluate(x1), h.evaluate(x2)) for w, g, h in self.terms)
        M1, M2 = self.degrees
        e1 = np.exp(2j * np.pi * np.multiply.outer(x1, np.arange(-M1, M1 + 1)))
        e2 = np.exp(2j * np.pi * np.multiply.outer(x2, np.arange(-M2, M2 + 1)))
        return (e1 @ self.dense @ e2.T).real

    def is_conjugate_symmetric(self, tol=1e-14):
        c = self.coeff_matrix()
        return bool(np.allclose(c, np.conj(c[::-1, ::-1]), rtol=0, atol=tol))


def box_minorant(j1, j2, m1, m2):
    """Cochrane-type minorant of the indicator of J1 x J2 (each a pair (alpha, beta))."""
    lo1, hi1 = selberg_pair_1d(j1[0], j1[1], m1)
    lo2, hi2 = selberg_pair_1d(j2[0], j2[1], m2)
    terms = ((1.0, lo1, hi2), (1.0, hi1, lo2), (-1.0, hi1, hi2))
    return TrigPoly2D((m1, m2), terms)


def cochrane_bound(j1, j2, m1, m2):
    len1, len2 = j1[1] - j1[0], j2[1] - j2[0]
    return len2 / (m1 + 1) + len1 / (m2 + 1) + 3.0 / ((m1 + 1) * (m2 + 1))


# ---------------------------------------------------------------------------
# Chebyshev form


def cos_to_chebyshev(c):
    """Coefficients u with sum c_n cos(n t) = sum u_n U_n(cos t).

    Uses cos(n t) = (U_n - U_{n-2}) / 2 with U_{-1} = 0 and U_{-2} = -1.
    """
    c = np.asarray(c, dtype=float)
    u = np.zeros_like(c)
    u[0] += c[0]
    if len(c) > 1:
        u[1:] += 0.5 * c[1:]
        u[:-2] -= 0.5 * c[2:]
    return u


def _cos_to_chebyshev_axis(a, axis):
    return np.apply_along_axis(cos_to_chebyshev, axis, a)


@dataclass(frozen=True)
class ChebyshevMinorant:
    """F(t1, t2) = sum fhat[m1, m2] U_m1(cos t1) U_m2(cos t2)."""

    degrees: tuple
    fhat: np.ndarray = field(repr=False)
    intervals: tuple = None

    @property
    def fhat00(self):
        return float(self.fhat[0, 0])

    def evaluate_grid(self, t1, t2):
        u1 = chebyshev_u_table(self.degrees[0], np.cos(np.asarray(t1, dtype=float)))
        u2 = chebyshev_u_table(self.degrees[1], np.cos(np.asarray(t2, dtype=float)))
        return u1 @ self.fhat @ u2.T

    def evaluate(self, t1, t2):
        """Pointwise values at paired angle arrays."""
        u1 = chebyshev_u_table(self.degrees[0], np.cos(np.asarray(t1, dtype=float)))
        u2 = chebyshev_u_table(self.degrees[1], np.cos(np.asarray(t2, dtype=float)))
        return np.einsum("...i,ij,...j->...", u1, self.fhat, u2)


def fold_to_chebyshev(S, intervals=None):
    """Four-fold reflection of S rewritten in the U_m1 U_m2 basis."""
    M1, M2 = S.degrees
    if S.dense is None:
        fhat = np.zeros((M1 + 1, M2 + 1))
        for w, g, h in S.terms:
            fhat += w * np.outer(
                cos_to_chebyshev(g.even_cosine_coeffs()), cos_to_chebyshev(h.even_cosine_coeffs())
            )
    else:
        d = S.dense
        # cosine coefficients: 4 * Re of the sum over distinct sign choices
        c = np.zeros((M1 + 1, M2 + 1), dtype=complex)
        for s1 in (1, -1):
            for s2 in (1, -1):
                block = d[M1 + s1 * np.arange(M1 + 1)][:, M2 + s2 * np.arange(M2 + 1)]
                c += block
        c[0, :] /= 2
        c[:, 0] /= 2
        fhat = _cos_to_chebyshev_axis(_cos_to_chebyshev_axis(4.0 * c.real, 0), 1)
    return ChebyshevMinorant((M1, M2), fhat, intervals)


def fhat00_from_box(S):
    """Constant coefficient of the folded polynomial, read off S directly."""
    c = S.coeff
    return (
        4 * c(0, 0).real
        - 4 * c(2, 0).real
        - 4 * c(0, 2).real
        + 2 * (c(2, 2).real + c(2, -2).real)
    )


def choose_degrees(i1, i2):
    """(M1, M2) = (ceil(27.8 mu1^-1 mu2^-2/3 - 1), ceil(27.8 mu1^-2/3 mu2^-1 - 1))."""
    mu1, mu2 = st_measure(i1), st_measure(i2)
    if mu1 <= 0 or mu2 <= 0:
        raise DegeneracyError("intervals must have positive Sato-Tate measure")
    m1 = ceil(DEGREE_CONSTANT / mu1 / mu2 ** (2.0 / 3.0) - 1.0)
    m2 = ceil(DEGREE_CONSTANT / mu1 ** (2.0 / 3.0) / mu2 - 1.0)
    return max(m1, 1), max(m2, 1)


def to_unit_interval(interval):
    return (interval.a / (2 * pi), interval.b / (2 * pi))


def chebyshev_minorant(i1, i2, m1=None, m2=None):
    """F_{I1, I2} with degrees from ``choose_degrees`` unless given."""
    if m1 is None or m2 is None:
        d1, d2 = choose_degrees(i1, i2)
        m1 = d1 if m1 is None else m1
        m2 = d2 if m2 is None else m2
    S = box_minorant(to_unit_interval(i1), to_unit_interval(i2), m1, m2)
    return fold_to_chebyshev(S, (i1, i2))


def deviation_bound(mu1, mu2, m1, m2):
    return 8.0 * (
        mu2 ** (1.0 / 3.0) / (m1 + 1) + mu1 ** (1.0 / 3.0) / (m2 + 1) + 6.0 / ((m1 + 1) * (m2 + 1))
    )


def quality_report(F):
    i1, i2 = F.intervals
    m1, m2 = F.degrees
    mu1, mu2 = st_measure(i1), st_measure(i2)
    f00 = F.fhat00
    dev = abs(f00 - mu1 * mu2)
    dev_bound = deviation_bound(mu1, mu2, m1, m2)
    numer = 2 * (m1 + 1) * (m2 + 1) + 1
    cor_ratio = numer / f00 if f00 > 0 else float("inf")
    cor_bound = COR_CONSTANT * (mu1 * mu2) ** (-8.0 / 3.0) if mu1 * mu2 > 0 else float("inf")
    return {
        "mu1": mu1,
        "mu2": mu2,
        "degrees": [m1, m2],
        "fhat00": f00,
        "deviation": dev,
        "deviation_bound": dev_bound,
        "cor_ratio": cor_ratio,
        "cor_bound": cor_bound,
        "ok": bool(dev <= dev_bound and f00 > 0 and cor_ratio <= cor_bound),
    }


def dominance_margin(F, grid=512, chunk=128):
    """max over a grid x grid mesh of [0, pi]^2 of F - 1_{I1 x I2}."""
    i1, i2 = F.intervals
    t = np.linspace(0.0, pi, grid)
    in2 = i2.contains(t)
    u2 = chebyshev_u_table(F.degrees[1], np.cos(t))
    right = F.fhat @ u2.T
    worst = -np.inf
    for start in range(0, grid, chunk):
        rows = t[start : start + chunk]
        vals = chebyshev_u_table(F.degrees[0], np.cos(rows)) @ right
        ind = np.outer(i1.contains(rows), in2)
        worst = max(worst, float(np.max(vals - ind)))
    return worst


def random_interval_pairs(count, seed=0, min_measure=0.05):
    """Seeded interval pairs with Sato-Tate measure at least ``min_measure`` each."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        pair = []
        while len(pair) < 2:
            a, b = np.sort(rng.uniform(0.0, pi, size=2))
            iv = Interval(float(a), float(b))
            if st_measure(iv) >= min_measure:
                pair.append(iv)
        out.append(tuple(pair))
    return out


__all__ = [
    "ChebyshevMinorant",
    "TrigPoly1D",
    "TrigPoly2D",
    "box_minorant",
    "choose_degrees",
    "chebyshev_minorant",
    "dominance_margin",
    "fold_to_chebyshev",
    "indicator_fourier",
    "quality_report",
    "selberg_pair_1d",
]
