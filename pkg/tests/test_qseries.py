import pytest
from hypothesis import given, strategies as st

from rigidcy.ffield import primes_in
from rigidcy.qseries import (
    EtaQuotientSpec, IntSeries, NEWFORM_6, SeriesError, check_hecke_relations, eta_quotient_expansion,
    euler_factor_series, newform_coefficients,
)


def naive_eta_product(factors, order):
    """Multiply out (1 - q^{dn}) one factor at a time, copying the list each step."""
    c = [1] + [0] * order
    for d, r in factors:
        for _ in range(r):
            for n in range(1, order // d + 1):
                new = list(c)
                for k in range(d * n, order + 1):
                    new[k] -= c[k - d * n]
                c = new
    return c


def pentagonal(order):
    c = [0] * (order + 1)
    k = 0
    while True:
        hit = False
        for m in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2):
            if m <= order:
                c[m] = (-1) ** k
                hit = True
        if not hit:
            break
        k += 1
    return c


def test_euler_factor_examples():
    assert euler_factor_series(1, 7).coeffs == (1, -1, -1, 0, 0, 1, 0, 1)
    assert euler_factor_series(6, 5).coeffs == (1, 0, 0, 0, 0, 0)
    assert euler_factor_series(2, 2).coeffs == (1, 0, -1)


def test_euler_factor_is_pentagonal():
    assert list(euler_factor_series(1, 200).coeffs) == pentagonal(200)


@pytest.mark.parametrize("d", [1, 2, 3, 6, 7])
def test_euler_factor_times_inverse_is_one(d):
    f = euler_factor_series(d, 60)
    assert (f * f.inverse()).coeffs == IntSeries.one(60).coeffs


def test_eta_examples():
    f = eta_quotient_expansion(NEWFORM_6, 7)
    assert f.coeffs == (0, 1, -2, -3, 4, 6, 6, -16)
    assert eta_quotient_expansion([], 5).coeffs == (1, 0, 0, 0, 0, 0)
    assert eta_quotient_expansion([(1, 24)], 2).coeffs == (0, 1, -24)


def test_newform_matches_naive_product():
    f = newform_coefficients(100)
    naive = naive_eta_product(NEWFORM_6, 99)
    assert list(f.coeffs[1:]) == naive
    assert f[0] == 0 and f[1] == 1


def test_delta_matches_tau():
    tau = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643]
    f = eta_quotient_expansion([(1, 24)], 9)
    assert list(f.coeffs[1:]) == tau


def test_non_integral_leading_power_rejected():
    with pytest.raises(SeriesError):
        eta_quotient_expansion([(1, 1)], 5)


def test_weight_and_leading_power():
    spec = EtaQuotientSpec(NEWFORM_6)
    assert spec.weight == 4
    assert spec.leading_power == 1


def test_hecke_examples():
    a = newform_coefficients(25)
    assert a[6] == a[2] * a[3] == 6
    assert a[4] == a[2] ** 2 == 4
    assert a[25] == a[5] ** 2 - 5**3 == -89


def test_hecke_relations_clean_to_100():
    rep = check_hecke_relations(newform_coefficients(100), nmax=100)
    assert rep.ok, rep.violations
    assert rep.checked > 80


def test_hecke_reports_corruption():
    f = newform_coefficients(30)
    bad = IntSeries(f.coeffs[:10] + (f.coeffs[10] + 1,) + f.coeffs[11:])
    rep = check_hecke_relations(bad, nmax=30)
    assert not rep.ok
    assert any("a_10" in v for v in rep.violations)


def test_hecke_bounds_error():
    with pytest.raises(IndexError):
        check_hecke_relations(newform_coefficients(20), nmax=50)


def test_ramanujan_bound():
    f = newform_coefficients(100)
    for p in primes_in(2, 97):
        assert f[p] ** 2 <= 4 * p**3


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=12), st.lists(st.integers(-5, 5), min_size=1, max_size=12))
def test_series_product_commutes(a, b):
    n = min(len(a), len(b)) - 1
    x, y = IntSeries(tuple(a[: n + 1])), IntSeries(tuple(b[: n + 1]))
    assert (x * y).coeffs == (y * x).coeffs
