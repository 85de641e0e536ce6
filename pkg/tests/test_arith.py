from math import comb, gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from stgaps.arith import (
    divisors,
    dk,
    euler_phi,
    factorize,
    is_prime,
    mobius,
    nth_primes,
    prime_pi,
    primes_up_to,
    rad,
    smallest_prime_factor,
)


def naive_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def test_primes_match_trial_division():
    assert list(primes_up_to(2000)) == [n for n in range(2001) if naive_is_prime(n)]
    assert prime_pi(10**4) == 1229
    assert nth_primes(5) == (2, 3, 5, 7, 11)


def test_smallest_prime_factor():
    spf = smallest_prime_factor(3000)
    for n in range(2, 3001):
        assert spf[n] == min(d for d in range(2, n + 1) if n % d == 0)


@given(st.integers(min_value=1, max_value=10**6))
def test_factorize_roundtrip(n):
    f = factorize(n)
    prod = 1
    for p, e in f:
        assert is_prime(p)
        prod *= p**e
    assert prod == n


@settings(max_examples=60)
@given(st.integers(min_value=1, max_value=3000))
def test_multiplicative_functions_against_definitions(n):
    divs = [d for d in range(1, n + 1) if n % d == 0]
    assert divisors(n) == divs
    assert euler_phi(n) == sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)
    assert sum(mobius(d) for d in divs) == (1 if n == 1 else 0)
    assert rad(n) == max(d for d in divs if mobius(d) != 0)


def test_dk_examples_and_recursion():
    assert dk(6, 2) == 4
    assert dk(4, 3) == 6
    assert dk(1, 7) == 1
    # d_k = 1 * d_{k-1} convolution
    for n in range(1, 200):
        assert dk(n, 3) == sum(dk(d, 2) for d in divisors(n))
        assert dk(n, 4) == sum(dk(d, 3) for d in divisors(n))
    assert dk(2**5, 4) == comb(8, 3)
