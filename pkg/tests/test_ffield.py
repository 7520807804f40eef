import pytest
from hypothesis import given, strategies as st

from rigidcy.ffield import (
    PrimeModulus, enumerate_points, inv, is_prime, normalize, point_array, primes_in, projective_count,
)


def test_inv_examples():
    assert inv(1, 7) == 1
    assert inv(3, 7) == 5
    with pytest.raises(ZeroDivisionError):
        inv(0, 5)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 97, 2**31 - 1])
def test_inv_is_involution(p):
    q = min(p, 200)
    for a in range(1, q):
        b = inv(a, p)
        assert a * b % p == 1
        assert inv(b, p) == a


def test_prime_modulus_validation():
    assert PrimeModulus(7).p == 7
    for bad in (1, 4, 91, 2**31 + 11):
        with pytest.raises(ValueError):
            PrimeModulus(bad)


@given(st.integers(min_value=0, max_value=5000))
def test_is_prime_matches_trial_division(n):
    trial = n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))
    assert is_prime(n) == trial


@pytest.mark.parametrize("space,p,count", [([1], 5, 6), ([3], 5, 156), ([3, 1], 7, 3200)])
def test_enumerate_counts(space, p, count):
    pts = list(enumerate_points(space, p))
    assert len(pts) == count
    assert len(set(pt.coords for pt in pts)) == count


def test_projective_counts_up_to_97():
    for p in primes_in(2, 97):
        for n in (1, 2, 3):
            assert point_array(n, p).shape[0] == projective_count(n, p) == (p ** (n + 1) - 1) // (p - 1)


@pytest.mark.parametrize("n,p", [(1, 5), (2, 3), (2, 5), (3, 3)])
def test_point_array_matches_brute_force(projective_points, n, p):
    arr = [tuple(int(c) for c in row) for row in point_array(n, p)]
    assert arr == sorted(projective_points(n, p))
    enum = [pt.coords[0] for pt in enumerate_points([n], p)]
    assert enum == arr


def test_enumeration_is_canonical():
    for pt in enumerate_points([2, 1], 5):
        for factor in pt.coords:
            assert next(c for c in factor if c) == 1
            assert normalize(factor, 5) == factor


def test_bad_dimension():
    with pytest.raises(ValueError):
        list(enumerate_points([0], 5))
