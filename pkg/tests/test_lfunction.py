import pytest

from rigidcy.ffield import primes_in
from rigidcy.lfunction import EulerFactor, RHBoundError, dirichlet_from_euler, euler_factor, rh_check
from rigidcy.qseries import newform_coefficients


def test_euler_factor_examples():
    assert euler_factor(5, 6).coeffs == (1, -6, 125)
    assert str(euler_factor(5, 6)) == "1 - 6T + 125T^2"
    assert euler_factor(2, -2).coeffs == (1, 2)
    with pytest.raises(RHBoundError):
        euler_factor(7, 100)


def test_single_bad_factor():
    a = dirichlet_from_euler({2: EulerFactor(2, (1, 2)), 3: EulerFactor(3, (1,))}, 4)
    assert a[1:] == [1, -2, 0, 4]


def test_trivial_good_factors():
    factors = {p: euler_factor(p, 0, bad_primes=()) for p in (2, 3, 5)}
    a = dirichlet_from_euler(factors, 5)
    assert a[1:] == [1, 0, 0, -8, 0]


def test_missing_factor():
    with pytest.raises(KeyError):
        dirichlet_from_euler({2: euler_factor(2, -2)}, 5)


def test_roundtrip_against_eta():
    f = newform_coefficients(100)
    factors = [euler_factor(p, f[p]) for p in primes_in(2, 100)]
    assert dirichlet_from_euler(factors, 100)[1:] == list(f.coeffs[1:])


def test_prime_square_coefficients():
    f = newform_coefficients(60)
    a = dirichlet_from_euler([euler_factor(p, f[p]) for p in primes_in(2, 60)], 60)
    for p in (5, 7):
        assert a[p * p] == f[p] ** 2 - p**3 == f[p * p]


def test_rh_check():
    assert rh_check(7, -16)
    assert not rh_check(5, 23)
    assert rh_check(5, 0)


def test_discriminant_bound_holds():
    f = newform_coefficients(100)
    for p in primes_in(5, 97):
        assert euler_factor(p, f[p]).coeffs[2] == p**3
