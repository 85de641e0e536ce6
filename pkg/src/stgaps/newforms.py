"""Exact Hecke eigenvalues of level-one newforms and their Sato-Tate angles.

Eigenvalues are kept as Python integers throughout. The q-expansions are built
with Kronecker substitution: a truncated power series with signed integer
coefficients is packed into one big integer, multiplied with GMP, and unpacked.
Only the final arccos is inexact.
"""

from dataclasses import dataclass, field
from pathlib import Path

import gmpy2
import mpmath
import numpy as np

from .arith import is_prime, primes_up_to
from .errors import (
    CapacityError,
    CoefficientParseError,
    CoverageError,
    DataIntegrityError,
    ParameterError,
    UnsupportedFormError,
)
from .sato_tate import Interval

DEFAULT_PMAX = 200_000
DEFAULT_PRECISION = 128
MAX_EXPANSION = 2_000_000

# weight -> (power of E4, power of E6) multiplying Delta
BUILTIN_WEIGHTS = {12: (0, 0), 16: (1, 0), 18: (0, 1), 20: (2, 0), 22: (1, 1), 26: (2, 1)}
BUILTIN_LABELS = {12: "delta", 16: "w16", 18: "w18", 20: "w20", 22: "w22", 26: "w26"}


# ---------------------------------------------------------------------------
# truncated integer power series


def _offset(nbytes, count):
    half = 1 << (8 * nbytes - 1)
    return int.from_bytes(half.to_bytes(nbytes, "little") * count, "little")


def _pack(coeffs, nbytes):
    half = 1 << (8 * nbytes - 1)
    buf = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(buf, "little") - _offset(nbytes, len(coeffs))


def _unpack(value, nbytes, count):
    half = 1 << (8 * nbytes - 1)
    value = (value + _offset(nbytes, count)) & ((1 << (8 * nbytes * count)) - 1)
    buf = value.to_bytes(nbytes * count, "little")
    return [int.from_bytes(buf[i : i + nbytes], "little") - half for i in range(0, len(buf), nbytes)]


def series_mul(a, b, n):
    """First ``n`` coefficients of the product of two integer power series."""
    a = list(a[:n])
    b = list(b[:n])
    if not a or not b:
        return [0] * n
    bound = max(abs(c) for c in a) * max(abs(c) for c in b) * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    prod = gmpy2.mpz(_pack(a, nbytes)) * gmpy2.mpz(_pack(b, nbytes))
    return _unpack(int(prod), nbytes, n)


def euler_product_series(n):
    """First n coefficients of prod_{m>=1} (1 - q^m), from the pentagonal theorem."""
    out = [0] * n
    k = 0
    while True:
        hit = False
        for g in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2):
            if g < n:
                out[g] = -1 if k % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def expand_delta(max_n, cap=MAX_EXPANSION):
    """tau(1), ..., tau(max_n): coefficients of q * prod (1 - q^m)^24."""
    if max_n < 1:
        raise ParameterError("max_n must be >= 1")
    if max_n > cap:
        raise CapacityError(f"expansion to {max_n} terms exceeds cap {cap}")
    p1 = euler_product_series(max_n)
    p2 = series_mul(p1, p1, max_n)
    p4 = series_mul(p2, p2, max_n)
    p8 = series_mul(p4, p4, max_n)
    p16 = series_mul(p8, p8, max_n)
    return series_mul(p16, p8, max_n)


def divisor_power_sums(n, power):
    """sigma_power(m) for 0 <= m < n as Python ints (sigma(0) = 0)."""
    sig = np.zeros(n, dtype=object)
    for d in range(1, n):
        sig[d::d] += d**power
    return [int(s) for s in sig]


def eisenstein_e4(n):
    s = divisor_power_sums(n, 3)
    return [1] + [240 * v for v in s[1:]]


def eisenstein_e6(n):
    s = divisor_power_sums(n, 5)
    return [1] + [-504 * v for v in s[1:]]


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class NewformSpec:
    label: str
    weight: int
    level: int = 1
    source: str = "builtin"

    def __post_init__(self):
        if self.weight < 2 or self.weight % 2:
            raise ParameterError(f"weight must be even and >= 2, got {self.weight}")
        if self.level < 1:
            raise ParameterError(f"level must be >= 1, got {self.level}")
        if self.source == "builtin" and (self.level != 1 or self.weight not in BUILTIN_WEIGHTS):
            raise UnsupportedFormError(f"no built-in form of weight {self.weight}, level {self.level}")


def deligne_ok(ap, p, k):
    """|a(p)| <= 2 p^((k-1)/2), checked exactly as a(p)^2 <= 4 p^(k-1)."""
    return ap * ap <= 4 * p ** (k - 1)


@dataclass(frozen=True)
class CoefficientTable:
    spec: NewformSpec
    entries: dict
    pmax: int

    def __post_init__(self):
        k, level = self.spec.weight, self.spec.level
        for p, ap in self.entries.items():
            if p > self.pmax:
                raise DataIntegrityError(f"prime {p} beyond declared pmax {self.pmax}")
            if level % p and not deligne_ok(ap, p, k):
                raise DataIntegrityError(f"Deligne bound violated at p={p}: a(p)={ap}")

    def __getitem__(self, p):
        return self.entries[p]

    def __len__(self):
        return len(self.entries)


def builtin_form(weight, pmax=DEFAULT_PMAX, cap=MAX_EXPANSION):
    """Coefficient table of the unique level-1 newform of the given weight."""
    if weight not in BUILTIN_WEIGHTS:
        raise UnsupportedFormError(
            f"weight {weight} unsupported; choose from {sorted(BUILTIN_WEIGHTS)}"
        )
    if pmax < 2:
        raise ParameterError("pmax must be >= 2")
    n = pmax + 1
    tau = expand_delta(pmax, cap=cap)
    series = [0] + tau
    a4, a6 = BUILTIN_WEIGHTS[weight]
    if a4 or a6:
        factor = [1] + [0] * (n - 1)
        if a4:
            e4 = eisenstein_e4(n)
            for _ in range(a4):
                factor = series_mul(factor, e4, n)
        if a6:
            factor = series_mul(factor, eisenstein_e6(n), n)
        series = series_mul(series, factor, n)
    entries = {int(p): series[p] for p in primes_up_to(pmax)}
    spec = NewformSpec(BUILTIN_LABELS[weight], weight, 1, "builtin")
    return CoefficientTable(spec, entries, pmax)


def builtin_by_label(label, pmax=DEFAULT_PMAX):
    for w, lab in BUILTIN_LABELS.items():
        if lab == label:
            return builtin_form(w, pmax)
    raise UnsupportedFormError(f"unknown built-in form {label!r}; choose from {sorted(BUILTIN_LABELS.values())}")


def ingest_coefficients(path, weight, level, label=None):
    """Read a ``p,ap`` CSV file into a CoefficientTable."""
    path = Path(path)
    text = path.read_text()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != "p,ap":
        raise CoefficientParseError(1, "expected header 'p,ap'")
    spec = NewformSpec(label or path.stem, weight, level, str(path))
    entries = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise CoefficientParseError(lineno, f"expected two fields, got {line!r}")
        try:
            p, ap = int(parts[0]), int(parts[1])
        except ValueError:
            raise CoefficientParseError(lineno, f"non-integer field in {line!r}") from None
        if parts[0] != str(p) or parts[1] != str(ap):
            raise CoefficientParseError(lineno, f"non-canonical integer in {line!r}")
        if not is_prime(p):
            raise CoefficientParseError(lineno, f"{p} is not prime")
        if p in entries:
            raise CoefficientParseError(lineno, f"duplicate prime {p}")
        if level % p and not deligne_ok(ap, p, weight):
            raise DataIntegrityError(f"Deligne bound violated at p={p}: a(p)={ap}")
        entries[p] = ap
    pmax = max(entries) if entries else 1
    return CoefficientTable(spec, entries, pmax)


def write_coefficients(table, path):
    lines = ["p,ap"] + [f"{p},{table.entries[p]}" for p in sorted(table.entries)]
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# angles


def hecke_angle(ap, p, k, precision_bits=DEFAULT_PRECISION):
    """theta in [0, pi] with ap = 2 p^((k-1)/2) cos(theta), as an mpf."""
    with mpmath.workprec(precision_bits + 32):
        ratio = mpmath.mpf(ap) / (2 * mpmath.sqrt(p) ** (k - 1))
        ratio = min(max(ratio, mpmath.mpf(-1)), mpmath.mpf(1))
        theta = mpmath.acos(ratio)
    with mpmath.workprec(precision_bits):
        return +theta


@dataclass(frozen=True)
class AngleTable:
    spec: NewformSpec
    entries: dict
    precision_bits: int
    pmax: int
    primes: np.ndarray = field(repr=False, compare=False, default=None)
    theta: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        ps = np.array(sorted(self.entries), dtype=np.int64)
        object.__setattr__(self, "primes", ps)
        object.__setattr__(self, "theta", np.array([float(self.entries[p]) for p in ps]))

    def __getitem__(self, p):
        return self.entries[p]

    def __len__(self):
        return len(self.entries)

    @property
    def label(self):
        return self.spec.label

    def check_coverage(self, x):
        if x > self.pmax:
            raise CoverageError(f"{self.label}: x={x} beyond table coverage pmax={self.pmax}")

    def aligned(self, primes):
        """Float angles for ``primes``; NaN where no angle exists (p | N)."""
        idx = np.searchsorted(self.primes, primes)
        idx = np.minimum(idx, max(len(self.primes) - 1, 0))
        out = np.full(len(primes), np.nan)
        if len(self.primes):
            hit = self.primes[idx] == primes
            out[hit] = self.theta[idx[hit]]
        return out

    def float_angle(self, p):
        return float(self.entries[p])


def angle_table(table, precision_bits=DEFAULT_PRECISION):
    """Sato-Tate angles for every prime p not dividing the level."""
    k, level = table.spec.weight, table.spec.level
    entries = {
        p: hecke_angle(ap, p, k, precision_bits)
        for p, ap in sorted(table.entries.items())
        if level % p
    }
    return AngleTable(table.spec, entries, precision_bits, table.pmax)


def roundtrip_error(angles, table):
    """max over p of |2 p^((k-1)/2) cos(theta) - a(p)| / (2 p^((k-1)/2))."""
    k = table.spec.weight
    worst = mpmath.mpf(0)
    with mpmath.workprec(angles.precision_bits + 32):
        for p, theta in angles.entries.items():
            scale = 2 * mpmath.sqrt(p) ** (k - 1)
            worst = max(worst, abs(scale * mpmath.cos(theta) - table.entries[p]) / scale)
    return worst


def joint_prime_count(a1, a2, i1, i2, x):
    """(#{p <= x : p does not divide N1 N2, theta_1 in I1, theta_2 in I2}, pi(x))."""
    a1.check_coverage(x)
    a2.check_coverage(x)
    x = int(x)
    primes = primes_up_to(x)
    t1 = a1.aligned(primes)
    t2 = a2.aligned(primes)
    good = ~np.isnan(t1) & ~np.isnan(t2)
    inside = good & (t1 >= i1.a) & (t1 <= i1.b) & (t2 >= i2.a) & (t2 <= i2.b)
    return int(np.count_nonzero(inside)), len(primes)


__all__ = [
    "AngleTable",
    "CoefficientTable",
    "Interval",
    "NewformSpec",
    "angle_table",
    "builtin_form",
    "expand_delta",
    "ingest_coefficients",
    "joint_prime_count",
]
