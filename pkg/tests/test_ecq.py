import random
from math import gcd

import pytest

from ssz.arith import legendre, primes_up_to
from ssz.ecq import (
    CurveQ, an_series, ap, count_points, disc_sign, find_odd_anomalous_prime,
    has_rational_two_torsion, node_tangent_sign, root_number, torsion_order,
)
from ssz.errors import InternalConsistencyError, SearchFailureError, ValidationError

E11 = CurveQ(0, -1, 1, -10, -20, 11, "11a1")
E37 = CurveQ(0, 0, 1, -1, 0, 37, "37a1")
E83 = CurveQ(1, 1, 1, 1, 0, 83, "e83")


def brute_count(E, ell):
    a1, a2, a3, a4, a6 = E.ainvs
    n = 1
    for x in range(ell):
        for y in range(ell):
            if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % ell == 0:
                n += 1
    return n


def test_invariants_identity(corpus):
    for rec in corpus:
        E = rec.curve()
        assert E.c4 ** 3 - E.c6 ** 2 == 1728 * E.disc


def test_known_discriminants():
    assert E11.disc == -11 ** 5
    assert E37.disc == 37
    assert E83.disc == -83


@pytest.mark.parametrize("E", [E11, E37, E83], ids=lambda e: e.label)
def test_ap_against_brute_force(E):
    for ell in primes_up_to(150):
        if ell == E.p:
            continue
        assert count_points(E, ell) == brute_count(E, ell)
        assert ap(E, ell) == ell + 1 - brute_count(E, ell)


def test_ap_examples():
    assert ap(E83, 2) == -1
    assert an_series(E11, 10) == (1, -2, -1, 2, 1, 2, -2, 0, -2, -2)


def test_hasse_bound_on_corpus(corpus):
    for rec in corpus:
        E = rec.curve()
        for ell in primes_up_to(1000):
            if ell != E.p:
                a = ap(E, ell)
                assert a * a <= 4 * ell


@pytest.mark.parametrize("E", [E11, E83], ids=lambda e: e.label)
def test_an_multiplicative(E):
    a = an_series(E, 10 ** 4)
    rng = random.Random(7)
    pairs = 0
    while pairs < 200:
        m, n = rng.randint(1, 100), rng.randint(1, 100)
        if gcd(m, n) != 1:
            continue
        assert a[m * n - 1] == a[m - 1] * a[n - 1]
        pairs += 1


def test_an_prime_power_recurrence():
    a = an_series(E37, 200)
    for ell in (2, 3, 5, 7):
        for r in range(1, 4):
            if ell ** (r + 1) <= 200:
                assert a[ell ** (r + 1) - 1] == a[ell - 1] * a[ell ** r - 1] - ell * (
                    a[ell ** (r - 1) - 1])
    # bad prime: a_{p^r} = a_p^r
    assert a[37 - 1] == root_number(E37)


def test_root_number_calibration():
    assert root_number(E11) == 1
    assert root_number(E37) == -1
    assert root_number(E83) == -1


def test_node_sign_matches_c6(corpus):
    """Split multiplicative iff -c6 is a square mod p."""
    for rec in corpus:
        E = rec.curve()
        assert node_tangent_sign(E) == legendre(-E.c6, E.p)


def test_root_number_matches_rank_parity(corpus):
    for rec in corpus:
        E = rec.curve()
        assert root_number(E) == (-1) ** rec.rank


def test_torsion_examples(by_label):
    assert torsion_order(E11).order == 5
    t = torsion_order(by_label["11a2"])
    assert (t.order, t.gcd_bound, t.certified) == (1, 5, True)
    assert torsion_order(E37).order == 1
    assert torsion_order(by_label["37b3"]).order == 3
    assert torsion_order(E83).order == 1
    assert torsion_order(by_label["e83"]).certified


def test_torsion_divides_point_counts(corpus):
    for rec in corpus:
        E = rec.curve()
        t = torsion_order(E)
        assert t.certified
        for ell in primes_up_to(60):
            if ell != E.p:
                assert count_points(E, ell) % t.order == 0


def test_two_torsion_and_disc_sign():
    assert (has_rational_two_torsion(E11), disc_sign(E11)) == (False, -1)
    assert (has_rational_two_torsion(E37), disc_sign(E37)) == (False, 1)
    E = CurveQ(0, 0, 0, -1, 0)  # y^2 = x^3 - x, no conductor asserted
    assert (has_rational_two_torsion(E), disc_sign(E)) == (True, 1)


def test_two_torsion_matches_even_point_counts(corpus):
    """Rational 2-torsion forces 2 | #E(F_l) for all good odd l."""
    for rec in corpus:
        E = rec.curve()
        if has_rational_two_torsion(E):
            assert all(count_points(E, ell) % 2 == 0 for ell in primes_up_to(200) if ell != E.p)
        assert has_rational_two_torsion(E) == (torsion_order(E).order % 2 == 0)


def test_odd_anomalous_prime_37a1():
    ell = find_odd_anomalous_prime(E37)
    scan = next(l for l in primes_up_to(1000)
                if l > 2 and l != 37 and legendre(-37, l) == -1 and ap(E37, l) % 2)
    assert ell == scan == 3


def test_odd_anomalous_prime_fails_without_positive_disc():
    # disc = -83: sqrt(-83) lies in the 2-division field, so every inert l has even a_l
    with pytest.raises(SearchFailureError):
        find_odd_anomalous_prime(E83, bound=2000)


def test_odd_anomalous_prime_fails_with_two_torsion(by_label):
    E = by_label["c17n1"]
    assert has_rational_two_torsion(E)
    with pytest.raises(SearchFailureError):
        find_odd_anomalous_prime(E, bound=500)


def test_validation_errors():
    with pytest.raises(ValidationError):
        CurveQ(0, 0, 0, 0, 0)  # singular
    with pytest.raises(ValidationError):
        CurveQ(0, -1, 1, -10, -20, 37)  # wrong conductor
    with pytest.raises(ValidationError):
        CurveQ(0, 0, 0, -1, 0, 5)  # disc = 64
    with pytest.raises(ValidationError):
        CurveQ(0, 0, 0, 0, 1, 3)  # p too small
    with pytest.raises(ValidationError):
        CurveQ(0, 0, 1, -1, 0, 37, rank=-1)


def test_bad_prime_request_rejected():
    E = CurveQ(0, 0, 0, -1, 0)
    with pytest.raises(InternalConsistencyError):
        ap(E, 2)
