from math import comb, factorial, log, pi

import numpy as np
import pytest

from stgaps.arith import divisors, dk, factorize
from stgaps.errors import CoverageError, ParameterError
from stgaps.newforms import AngleTable, NewformSpec
from stgaps.rankin_selberg import (
    SymPair,
    VaughanParams,
    clebsch_gordan_check,
    dirichlet_lambda,
    dirichlet_mu,
    lambda_partial_sum,
    summatory_reference,
    vaughan_decompose,
    vm_coefficient,
    vm_prime_powers,
)

PAIRS = [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2)]


@pytest.fixture(scope="module")
def tables(small_tables):
    return small_tables


def compositions(total):
    """Ordered tuples of positive integers summing to total."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def lambda_literal(pair, p, ell):
    """sum_r 1/r! sum_{j1+..+jr = ell} prod Lambda(p^ji) / (ji log p)."""
    total = 0.0
    for comp in compositions(ell):
        r = len(comp)
        term = 1.0 / factorial(r)
        for j in comp:
            term *= vm_coefficient(pair, p**j) / (j * log(p))
        total += term
    return total


def mu_newton(pair, p, ell):
    """(-1)^ell e_ell of the Satake roots via Newton's identities from power sums."""
    roots = pair.satake(p)
    d = len(roots)
    power = [sum(r**k for r in roots) for k in range(d + 1)]
    e = [1.0 + 0j]
    for k in range(1, d + 1):
        e.append(sum((-1) ** (i - 1) * e[k - i] * power[i] for i in range(1, k + 1)) / k)
    return 0.0 if ell > d else ((-1) ** ell * e[ell]).real


def test_vm_examples(tables):
    A1, A2 = tables
    P = SymPair(1, 1, A1, A2)
    assert vm_coefficient(P, 12) == 0.0
    assert vm_coefficient(P, 1) == 0.0
    for p in (2, 3, 101):
        t1, t2 = A1.float_angle(p), A2.float_angle(p)
        assert vm_coefficient(P, p) == pytest.approx(2 * np.cos(t1) * 2 * np.cos(t2) * log(p), abs=1e-12)


def test_vm_equals_satake_power_sums(tables):
    A1, A2 = tables
    P = SymPair(2, 1, *tables)
    for p in (2, 5, 13):
        for ell in (1, 2, 3):
            s = sum(r**ell for r in P.satake(p)).real * log(p)
            assert vm_coefficient(P, p**ell) == pytest.approx(s, abs=1e-10)


def test_lambda_against_composition_formula(tables):
    for m1, m2 in PAIRS:
        P = SymPair(m1, m2, *tables)
        for p in (2, 3, 7):
            for ell in range(1, 7):
                assert dirichlet_lambda(P, p**ell) == pytest.approx(lambda_literal(P, p, ell), abs=1e-10)
    P = SymPair(1, 1, *tables)
    p = 5
    L1, L2 = vm_coefficient(P, p), vm_coefficient(P, p * p)
    assert dirichlet_lambda(P, p * p) == pytest.approx(L2 / (2 * log(p)) + L1**2 / (2 * log(p) ** 2), abs=1e-12)
    assert dirichlet_lambda(P, 1) == 1.0


def test_mu_against_newton(tables):
    for m1, m2 in PAIRS:
        P = SymPair(m1, m2, *tables)
        for p in (2, 3, 11):
            for ell in range(1, P.degree + 3):
                assert dirichlet_mu(P, p**ell) == pytest.approx(mu_newton(P, p, ell), abs=1e-10)
    P = SymPair(1, 1, *tables)
    assert dirichlet_mu(P, 3**5) == 0.0
    Q = SymPair(1, 0, *tables)
    assert dirichlet_mu(Q, 7) == pytest.approx(-2 * np.cos(tables[0].float_angle(7)), abs=1e-14)


def test_dirichlet_inverse_and_log_identity(tables):
    P = SymPair(1, 1, *tables)
    s = P.stream(2000)
    for n in range(1, 2001):
        conv = sum(s.mu[d] * s.lam[n // d] for d in divisors(n))
        assert conv == pytest.approx(1.0 if n == 1 else 0.0, abs=1e-9)
        lhs = sum(s.vm[d] * s.lam[n // d] for d in divisors(n))
        assert lhs == pytest.approx(s.lam[n] * log(n), abs=1e-8)


def test_stream_matches_pointwise(tables):
    P = SymPair(2, 1, *tables)
    s = P.stream(3000)
    for n in list(range(1, 200)) + [1024, 2187, 2310, 2999]:
        assert s.vm[n] == pytest.approx(vm_coefficient(P, n), abs=1e-12)
        assert s.lam[n] == pytest.approx(dirichlet_lambda(P, n), abs=1e-10)
        assert s.mu[n] == pytest.approx(dirichlet_mu(P, n), abs=1e-12)
    assert P.stream(1000) is s
    n, v = vm_prime_powers(P, 3000)
    nz = np.flatnonzero(s.vm)
    np.testing.assert_array_equal(n, nz)
    np.testing.assert_allclose(v, s.vm[nz], atol=1e-12)


def test_multiplicativity(tables):
    P = SymPair(1, 1, *tables)
    s = P.stream(5000)
    rng = np.random.default_rng(5)
    for _ in range(300):
        a, b = rng.integers(1, 70, 2)
        if np.gcd(a, b) == 1:
            assert s.lam[a * b] == pytest.approx(s.lam[a] * s.lam[b], abs=1e-10)
            assert s.mu[a * b] == pytest.approx(s.mu[a] * s.mu[b], abs=1e-10)


@pytest.mark.parametrize("pair", PAIRS)
def test_bound_suite(tables, pair):
    P = SymPair(*pair, *tables)
    s = P.stream(10_000)
    d = P.degree
    for n in range(2, 10_001):
        f = factorize(n)
        if len(f) == 1:
            assert abs(s.vm[n]) <= d * log(f[0][0]) + 1e-9
            assert abs(s.mu[n]) <= comb(d, f[0][1]) + 1e-9
        else:
            assert s.vm[n] == 0.0
        assert abs(s.lam[n]) <= dk(n, d) + 1e-9


def test_ramified_primes_vanish(tables):
    A1, A2 = tables
    spec = NewformSpec("delta-l6", 12, 6, "synthetic")
    entries = {p: t for p, t in A1.entries.items() if p not in (2, 3)}
    B = AngleTable(spec, entries, A1.precision_bits, A1.pmax)
    P = SymPair(1, 1, B, A2)
    assert P.bad_modulus == 6
    for n in (2, 4, 3, 9, 6, 12):
        assert vm_coefficient(P, n) == 0.0
        assert dirichlet_lambda(P, n) == (1.0 if n == 1 else 0.0)
    s = P.stream(100)
    assert s.vm[8] == 0.0 and s.lam[10] == pytest.approx(0.0) and s.mu[15] == 0.0
    n, v = vm_prime_powers(P, 100)
    assert np.all(v[(n % 2 == 0) | (n % 3 == 0)] == 0.0)


def test_coverage_and_parameters(tables):
    P = SymPair(1, 1, *tables)
    with pytest.raises(CoverageError):
        vm_coefficient(P, 20_011)
    with pytest.raises(CoverageError):
        P.stream(30_000)
    with pytest.raises(ParameterError):
        SymPair(0, 0, *tables)
    with pytest.raises(ParameterError):
        VaughanParams(0.5, 2)


def test_clebsch_gordan():
    assert clebsch_gordan_check(1, 0, 0.37) == 0.0
    assert clebsch_gordan_check(1, 1, pi / 5) <= 1e-10
    rng = np.random.default_rng(0)
    for m1 in range(5):
        for m2 in range(5):
            for theta in rng.uniform(0, pi, 50):
                assert clebsch_gordan_check(m1, m2, theta) <= 1e-9


def test_vaughan(tables):
    P = SymPair(1, 1, *tables)
    s = P.stream(5000)
    for U, V in [(1, 1), (10, 10), (30, 5)]:
        params = VaughanParams(U, V)
        for n in range(1, 5001):
            a = vaughan_decompose(P, n, params, s)
            assert sum(a) == pytest.approx(s.vm[n], abs=1e-8)
    params = VaughanParams(1, 1)
    for p in (101, 103):
        a1, a2, a3, a4 = vaughan_decompose(P, p, params, s)
        assert (a1, a2, a4) == (0.0, 0.0, 0.0)
        assert a3 == pytest.approx(s.vm[p], abs=1e-12)
    params = VaughanParams(50, 7)
    for n in (2, 4, 8, 27, 49):
        a1, a2, a3, a4 = vaughan_decompose(P, n, params, s)
        assert a1 == s.vm[n]
        assert a2 + a3 + a4 == pytest.approx(0.0, abs=1e-10)


def test_lambda_partial_sum(tables):
    P = SymPair(1, 1, *tables)
    assert lambda_partial_sum(P, 0.5) == 0.0
    direct = 0.0
    for n in range(1, 1001):
        term = 1.0
        for p, e in factorize(n):
            term *= dirichlet_lambda(P, p**e)
        direct += term
    assert lambda_partial_sum(P, 1000) == pytest.approx(direct, abs=1e-9)
    assert abs(lambda_partial_sum(P, 1000)) <= sum(dk(n, 4) for n in range(1, 1001))
    assert summatory_reference(1000, 1, 1, 0.0) == pytest.approx(1000 ** (1 - 2 / 5))
