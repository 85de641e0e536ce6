from math import pi, sin, sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from stgaps.errors import ParameterError
from stgaps.sato_tate import (
    FULL,
    Interval,
    chebyshev_u,
    chebyshev_u_table,
    cuberoot_check,
    st_measure,
    v_function,
)

angle = st.floats(min_value=0.0, max_value=pi, allow_nan=False)


def quad_measure(a, b):
    return quad(lambda t: 2 / pi * sin(t) ** 2, a, b, epsabs=1e-14)[0]


def test_measure_examples():
    assert st_measure(FULL) == pytest.approx(1.0, abs=1e-15)
    assert st_measure(Interval(0, pi / 2)) == pytest.approx(0.5, abs=1e-15)
    third = Interval(pi / 3, 2 * pi / 3)
    assert st_measure(third) == pytest.approx(1 / 3 + sqrt(3) / (2 * pi), abs=1e-14)
    assert st_measure(third) == pytest.approx(quad_measure(pi / 3, 2 * pi / 3), abs=1e-12)
    assert abs(st_measure(third) - 0.6089977) < 1e-7


@given(angle, angle)
def test_measure_matches_quadrature(a, b):
    a, b = min(a, b), max(a, b)
    assert st_measure(Interval(a, b)) == pytest.approx(quad_measure(a, b), abs=1e-12)


@given(angle, angle, angle)
def test_measure_additive(a, b, c):
    a, b, c = sorted((a, b, c))
    whole = st_measure(Interval(a, c))
    parts = st_measure(Interval(a, b)) + st_measure(Interval(b, c))
    assert abs(whole - parts) <= 1e-14


def test_interval_validation_and_parse():
    with pytest.raises(ParameterError):
        Interval(1.0, 0.5)
    with pytest.raises(ParameterError):
        Interval(0.0, 4.0)
    with pytest.raises(ParameterError):
        Interval.parse("x,1")
    assert Interval.parse("0,3.1415926535897936").b == pi
    I = Interval(0.5, 1.0)
    assert I.contains(0.5) and I.contains(1.0) and not I.contains(1.0000001)


def test_chebyshev_examples():
    assert chebyshev_u(1, 0.3) == pytest.approx(0.6)
    assert chebyshev_u(3, 0.0) == 0.0
    for m in range(12):
        assert chebyshev_u(m, 1.0) == m + 1
    assert chebyshev_u(-1, 0.4) == 0.0
    assert chebyshev_u(-2, 0.4) == -1.0


def test_chebyshev_grid_identities():
    theta = np.linspace(0, pi, 10_000)
    table = chebyshev_u_table(64, np.cos(theta))
    for m in range(65):
        u = table[:, m]
        assert np.all(np.abs(u) <= m + 1 + 1e-9)
        assert np.max(np.abs(u * np.sin(theta) - np.sin((m + 1) * theta))) <= 1e-12
        np.testing.assert_array_equal(u, chebyshev_u(m, np.cos(theta)))


def test_chebyshev_sum_of_exponentials():
    theta = 0.731
    for m in range(10):
        direct = sum(np.exp(1j * (m - 2 * j) * theta) for j in range(m + 1)).real
        assert chebyshev_u(m, np.cos(theta)) == pytest.approx(direct, abs=1e-12)


def test_cuberoot_check():
    lhs, rhs, ok = cuberoot_check(FULL)
    assert ok and lhs == pytest.approx(pi) and rhs == pytest.approx(pi)
    for y in np.linspace(0, pi, 66)[1:-1]:
        assert cuberoot_check(Interval(0, y))[2]
    assert abs(v_function(2.148) - 15.80) < 0.05
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a, b = np.sort(rng.uniform(0, pi, 2))
        assert cuberoot_check(Interval(a, b))[2]
