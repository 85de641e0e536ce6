"""Sato-Tate measure, Chebyshev polynomials of the second kind, and the
length/measure inequality |I| <= pi * mu_ST(I)^(1/3)."""

from dataclasses import dataclass
from math import cos, pi, sin

import numpy as np

from .errors import ParameterError

TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """Closed subinterval [a, b] of [0, pi]."""

    a: float
    b: float

    def __post_init__(self):
        if not (0.0 <= self.a <= self.b <= pi):
            raise ParameterError(f"interval [{self.a}, {self.b}] is not inside [0, pi]")

    @classmethod
    def parse(cls, text):
        """Parse ``"a,b"``. Endpoints within 1e-12 of 0 or pi are clamped."""
        try:
            a, b = (float(s) for s in text.split(","))
        except ValueError as exc:
            raise ParameterError(f"cannot parse interval {text!r}") from exc
        return cls(_clamp(a), _clamp(b))

    @property
    def length(self):
        return self.b - self.a

    def contains(self, theta):
        theta = np.asarray(theta)
        return (theta >= self.a) & (theta <= self.b)

    def __str__(self):
        return f"[{self.a!r}, {self.b!r}]"


FULL = Interval(0.0, pi)


def _clamp(v):
    if -TOL <= v < 0.0:
        return 0.0
    if pi < v <= pi + TOL:
        return pi
    return v


def st_measure(interval):
    """Sato-Tate mass (2/pi) * integral of sin^2 over the interval."""
    a, b = interval.a, interval.b
    value = ((b - a) - sin(b) * cos(b) + sin(a) * cos(a)) / pi
    return min(max(value, 0.0), 1.0)


def chebyshev_u(m, t):
    """U_m(t) by the three-term recurrence, with U_{-2} = -1 and U_{-1} = 0.

    ``t`` may be a scalar or an array.
    """
    if m < -2:
        raise ParameterError("chebyshev_u is defined for m >= -2")
    if m == -2:
        return -np.ones_like(t, dtype=float) if isinstance(t, np.ndarray) else -1.0
    prev, cur = 0.0 * t, 1.0 + 0.0 * t
    if m == -1:
        return prev
    for _ in range(m):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur


def chebyshev_u_table(max_m, t):
    """Array ``out[..., j] = U_j(t)`` for 0 <= j <= max_m."""
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape + (max_m + 1,))
    out[..., 0] = 1.0
    if max_m >= 1:
        out[..., 1] = 2.0 * t
    for j in range(2, max_m + 1):
        out[..., j] = 2.0 * t * out[..., j - 1] - out[..., j - 2]
    return out


def v_function(y):
    """2 pi^2 * integral_0^y sin^2 - y^3; nonnegative on [0, pi]."""
    return pi * pi * (y - sin(y) * cos(y)) - y**3


def cuberoot_check(interval):
    """Return (|I|, pi * mu_ST(I)^(1/3), ok)."""
    lhs = interval.length
    rhs = pi * st_measure(interval) ** (1.0 / 3.0)
    return lhs, rhs, lhs <= rhs + TOL
