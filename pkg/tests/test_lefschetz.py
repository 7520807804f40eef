import pytest

from rigidcy import lefschetz
from rigidcy.geometry import resolved_square_sum
from rigidcy.lefschetz import (
    BadPrimeError, CalibrationError, calibrate, prime_counts, t3_from_counts, verify_modularity,
)
from rigidcy.qseries import ap_table

AP = ap_table(100)


@pytest.mark.parametrize("p,N2,R", [(5, 1390, 46), (7, 2810, 50)])
def test_t3_examples(p, N2, R):
    assert resolved_square_sum(p) == N2
    assert t3_from_counts(p, N2, R, 50) == AP[p]


def test_t3_symbolic_zero():
    # N2 + pR equal to 1 + p^3 + (1+p) p sigma gives trace 0
    p, sigma, R = 11, 50, 46
    N2 = 1 + p**3 + (1 + p) * p * sigma - p * R
    assert t3_from_counts(p, N2, R, sigma) == 0


@pytest.mark.parametrize("p", [2, 3])
def test_bad_primes(p):
    with pytest.raises(BadPrimeError):
        t3_from_counts(p, 0, 0, 0)


def test_raw_counts():
    c = prime_counts(5)
    assert (c.N2_singular, c.N2, c.R) == (715, 1390, 46)
    c = prime_counts(7)
    assert (c.N2_singular, c.N2, c.R) == (1487, 2810, 50)


def test_calibration_values():
    assert calibrate((5, 7, 11, 13), AP) == {1: (50, 50), 2: (50, 46)}


def test_calibration_needs_two_primes_per_class():
    with pytest.raises(CalibrationError):
        calibrate((5, 7, 11), AP)
    with pytest.raises(CalibrationError):
        calibrate((3, 5, 7, 11, 13), AP)


def test_headline_pass():
    rep = verify_modularity(97)
    assert rep.verdict == "PASS"
    held = [r.p for r in rep.holdout]
    assert held == [17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
    assert all(r.match and r.rh_ok and r.t2_ok for r in rep.records)
    assert any("sigma != R" in f for f in rep.findings)


def test_held_out_fault_detected():
    bad = dict(AP)
    bad[17] += 1
    rep = verify_modularity(31, oracle=bad)
    assert rep.verdict == "FAIL"
    assert any(f.startswith("p=17:") for f in rep.failures)
    assert [r.p for r in rep.holdout if not r.match] == [17]


def test_fit_prime_fault_detected():
    # 7 is one of only two class-1 primes <= 13, so it can never be held out;
    # corrupting it must break the calibration instead
    bad = dict(AP)
    bad[7] += 1
    rep = verify_modularity(31, oracle=bad)
    assert rep.verdict == "FAIL"
    assert rep.failures and rep.failures[0].startswith("calibration")


def test_no_heldout_primes():
    with pytest.raises(ValueError):
        verify_modularity(5)
    with pytest.raises(ValueError):
        verify_modularity(13)


def test_report_schema():
    d = verify_modularity(23).as_dict()
    assert {"range", "calibration", "primes", "verdict"} <= set(d)
    assert d["calibration"] == {"class1": {"sigma": 50, "R": 50}, "class2": {"sigma": 50, "R": 46}}
    assert {"p", "N2", "R", "t2", "t3", "ap", "match"} <= set(d["primes"][0])


def test_workers_agree():
    a = verify_modularity(41).as_dict()
    b = verify_modularity(41, workers=2).as_dict()
    assert a == b
