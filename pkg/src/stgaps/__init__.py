"""Sato-Tate angles, Chebyshev box minorants, symmetric-power Rankin-Selberg
coefficients, Maynard-Tao sieve machinery and desk-scale Bombieri-Vinogradov
audits."""

__version__ = "0.1.0"
