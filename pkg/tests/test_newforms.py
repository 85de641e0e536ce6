import math
import random
from math import pi

import mpmath
import numpy as np
import pytest

from stgaps.arith import primes_up_to
from stgaps.errors import (
    CapacityError,
    CoefficientParseError,
    CoverageError,
    DataIntegrityError,
    UnsupportedFormError,
)
from stgaps.newforms import (
    BUILTIN_WEIGHTS,
    CoefficientTable,
    NewformSpec,
    angle_table,
    builtin_form,
    divisor_power_sums,
    eisenstein_e4,
    eisenstein_e6,
    expand_delta,
    hecke_angle,
    ingest_coefficients,
    joint_prime_count,
    roundtrip_error,
    series_mul,
    write_coefficients,
)
from stgaps.sato_tate import FULL, Interval, st_measure


def naive_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def naive_delta(max_n):
    """Dense product q * prod_{n <= max_n} (1 - q^n)^24, truncated."""
    n = max_n
    series = [1] + [0] * (n - 1)
    for k in range(1, n):
        factor = [0] * n
        factor[0] = 1
        factor[k] = -1
        for _ in range(24):
            series = naive_mul(series, factor, n)
    return series  # series[i] = tau(i + 1)


def test_delta_against_dense_oracle():
    oracle = naive_delta(40)
    assert expand_delta(40) == oracle
    assert expand_delta(1) == [1]
    tau = expand_delta(5)
    assert tau[1] == -24 and tau[2] == 252 and tau[4] == 4830


def test_delta_against_eisenstein_identity():
    n = 300
    e4, e6 = eisenstein_e4(n), eisenstein_e6(n)
    e4c = series_mul(series_mul(e4, e4, n), e4, n)
    e6s = series_mul(e6, e6, n)
    delta = [(x - y) // 1728 for x, y in zip(e4c, e6s)]
    assert all((x - y) % 1728 == 0 for x, y in zip(e4c, e6s))
    assert delta[1:] == expand_delta(n - 1)


def test_series_mul_matches_naive():
    rng = random.Random(3)
    for _ in range(20):
        a = [rng.randint(-(10**30), 10**30) for _ in range(50)] + [-(10**40)]
        b = [rng.randint(-1000, 1000) for _ in range(37)]
        assert series_mul(a, b, 60) == naive_mul(a, b, 60)


def test_eisenstein_weight_eight_relation():
    n = 200
    e8 = [1] + [480 * s for s in divisor_power_sums(n, 7)[1:]]
    assert series_mul(eisenstein_e4(n), eisenstein_e4(n), n) == e8


def test_hecke_multiplicativity():
    tau = [0] + expand_delta(1000)
    assert tau[6] == tau[2] * tau[3]
    for m in range(2, 32):
        for n in range(2, 32):
            if math.gcd(m, n) == 1 and m * n <= 1000:
                assert tau[m * n] == tau[m] * tau[n]
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        assert tau[p * p] == tau[p] ** 2 - p**11


@pytest.mark.parametrize("weight", sorted(BUILTIN_WEIGHTS))
def test_builtins_are_hecke_eigenforms(weight):
    """a(p^2) = a(p)^2 - p^(k-1) and a(mn) = a(m)a(n), read from the full series."""
    t = builtin_form(weight, 600)
    a = {p: t[p] for p in t.entries}
    assert a[2] ** 2 - 2 ** (weight - 1) == _coefficient(weight, 4)
    assert a[2] * a[3] == _coefficient(weight, 6)
    assert a[3] ** 2 - 3 ** (weight - 1) == _coefficient(weight, 9)
    for p in primes_up_to(600):
        assert t[int(p)] ** 2 <= 4 * int(p) ** (weight - 1)


def _coefficient(weight, n):
    from stgaps.newforms import BUILTIN_WEIGHTS, eisenstein_e4, eisenstein_e6

    size = n + 1
    series = [0] + expand_delta(n)
    a4, a6 = BUILTIN_WEIGHTS[weight]
    for _ in range(a4):
        series = naive_mul(series, eisenstein_e4(size), size)
    for _ in range(a6):
        series = naive_mul(series, eisenstein_e6(size), size)
    return series[n]


def test_builtin_examples():
    assert builtin_form(12, 100)[2] == -24
    assert builtin_form(16, 100)[2] == 216
    with pytest.raises(UnsupportedFormError):
        builtin_form(14, 100)
    with pytest.raises(UnsupportedFormError):
        NewformSpec("x", 12, 11)


def test_deligne_for_all_builtins_up_to_1e4():
    for w in BUILTIN_WEIGHTS:
        t = builtin_form(w, 10**4)
        assert len(t) == 1229
        for p, ap in t.entries.items():
            assert ap * ap <= 4 * p ** (w - 1)


def test_capacity_error():
    with pytest.raises(CapacityError):
        expand_delta(101, cap=100)


def test_ingest(tmp_path):
    f = tmp_path / "f.csv"
    f.write_text("p,ap\n2,-24\n3,252")
    t = ingest_coefficients(f, 12, 1)
    assert t.entries == {2: -24, 3: 252}
    for body, line in [("p,ap\n4,10\n", 2), ("p,ap\n2,1\n2,1\n", 3), ("p,ap\n2, 5\n", 2),
                       ("p,ap\n2\n", 2), ("p,ap\n3,x\n", 2), ("pp,ap\n", 1), ("p,ap\n02,1\n", 2)]:
        f.write_text(body)
        with pytest.raises(CoefficientParseError) as exc:
            ingest_coefficients(f, 12, 1)
        assert exc.value.lineno == line
        assert str(exc.value).startswith(f"line {line}:")
    f.write_text("p,ap\n2,1000\n")
    with pytest.raises(DataIntegrityError, match="p=2"):
        ingest_coefficients(f, 12, 1)
    # primes dividing the level are not held to the bound
    f.write_text("p,ap\n2,1000\n3,1\n")
    assert ingest_coefficients(f, 12, 2).entries[2] == 1000


def test_write_ingest_roundtrip(tmp_path):
    t = builtin_form(18, 500)
    path = tmp_path / "w18.csv"
    write_coefficients(t, path)
    back = ingest_coefficients(path, 18, 1, "w18")
    assert back.entries == t.entries


def test_hecke_angles():
    theta = hecke_angle(-24, 2, 12)
    assert float(theta) == pytest.approx(math.acos(-24 / 2**6.5), abs=1e-15)
    assert abs(float(theta) - 1.839171) < 1e-6
    assert float(hecke_angle(0, 7, 12)) == pytest.approx(pi / 2, abs=1e-15)
    # synthetic a(p) = 2 p^((k-1)/2) exactly (odd weight only for this check)
    assert float(hecke_angle(2 * 3**5, 3, 11)) == 0.0
    assert float(hecke_angle(-2 * 3**5, 3, 11)) == pytest.approx(pi, abs=1e-15)


def test_angle_table_roundtrip_and_skip():
    t = builtin_form(12, 3000)
    A = angle_table(t, 128)
    assert len(A) == len(t)
    assert roundtrip_error(A, t) < mpmath.mpf(2) ** -120
    spec = NewformSpec("delta-l2", 12, 2, "synthetic")
    t2 = CoefficientTable(spec, dict(t.entries), t.pmax)
    A2 = angle_table(t2)
    assert 2 not in A2.entries and len(A2) == len(t) - 1
    assert np.isnan(A2.aligned(np.array([2, 3]))[0])


def test_joint_prime_count(small_tables):
    A1, A2 = small_tables
    count, pix = joint_prime_count(A1, A2, FULL, FULL, 10_000)
    assert count == pix == 1229
    last = 0
    for x in range(100, 20_000, 997):
        c, _ = joint_prime_count(A1, A2, FULL, FULL, x)
        assert c >= last
        last = c
    c, _ = joint_prime_count(A1, A2, FULL, Interval(1.0, 1.0), 10_000)
    assert c == 0
    with pytest.raises(CoverageError):
        joint_prime_count(A1, A2, FULL, FULL, 20_001)


def test_joint_count_at_1e5(big_tables):
    A1, A2 = big_tables
    I = Interval(pi / 3, 2 * pi / 3)
    count, pix = joint_prime_count(A1, A2, I, I, 10**5)
    target = st_measure(I) ** 2
    assert target == pytest.approx(0.37089, abs=2e-5)
    assert abs(count / pix - target) <= 0.05
