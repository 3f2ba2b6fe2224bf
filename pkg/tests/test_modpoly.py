import mpmath
import pytest

from ssz.errors import UnsupportedIndexError
from ssz.modpoly import (
    _phi_generic, modular_polynomial, modular_polynomial_mod, supported_prime,
)

PHI2 = {
    (3, 0): 1, (0, 3): 1, (2, 2): -1, (2, 1): 1488, (1, 2): 1488,
    (2, 0): -162000, (0, 2): -162000, (1, 1): 40773375,
    (1, 0): 8748000000, (0, 1): 8748000000, (0, 0): -157464000000000,
}

PHI5_CONSTANT = 141359947154721358697753474691071362751004672000


def evaluate(phi, x, y):
    return sum(c * x ** i * y ** j for (i, j), c in phi.items())


def test_phi2_literal():
    assert modular_polynomial(2) == PHI2


@pytest.mark.parametrize("ell", [2, 3])
def test_generic_matches_embedded(ell):
    assert dict(_phi_generic(ell, None)) == modular_polynomial(ell)


@pytest.mark.parametrize("ell", [2, 3, 5, 7])
def test_shape(ell):
    phi = modular_polynomial(ell)
    assert all(phi.get((j, i)) == c for (i, j), c in phi.items())
    assert phi[(ell + 1, 0)] == 1
    assert max(i for i, _ in phi) == ell + 1
    assert phi[(ell, ell)] == -1


def test_phi5_constant_term():
    assert modular_polynomial(5)[(0, 0)] == PHI5_CONSTANT


@pytest.mark.parametrize("ell", [2, 3, 5, 7])
def test_kronecker_congruence(ell):
    """Phi_l(X, Y) = (X^l - Y)(X - Y^l) mod l."""
    want = {(ell + 1, 0): 1, (0, ell + 1): 1, (ell, ell): -1, (1, 1): -1}
    got = {k: c % ell for k, c in modular_polynomial(ell).items() if c % ell}
    assert got == {k: c % ell for k, c in want.items()}


@pytest.mark.parametrize("ell", [2, 3, 5])
@pytest.mark.parametrize("tau", [mpmath.mpc(0.13, 1.05), mpmath.mpc(-0.31, 0.92)])
def test_vanishes_on_isogenous_pairs(ell, tau):
    """Phi_l(j(tau), j(l tau)) = 0, evaluated numerically."""
    mpmath.mp.dps = 250
    x = 1728 * mpmath.kleinj(tau)
    y = 1728 * mpmath.kleinj(ell * tau)
    phi = modular_polynomial(ell)
    scale = max(abs(c * x ** i * y ** j) for (i, j), c in phi.items())
    assert abs(evaluate(phi, x, y)) / scale < mpmath.mpf(10) ** -150


@pytest.mark.parametrize("ell,p", [(5, 11), (5, 389), (7, 83), (11, 83), (13, 101)])
def test_mod_p_matches_exact_reduction(ell, p):
    rows = modular_polynomial_mod(ell, p)
    exact = modular_polynomial(ell)
    for i in range(ell + 2):
        for j in range(ell + 2):
            assert rows[i][j] == exact.get((i, j), 0) % p


def test_embedded_mod_p():
    rows = modular_polynomial_mod(2, 5)
    assert rows[0][0] == PHI2[(0, 0)] % 5
    assert rows[3][0] == 1


def test_unsupported():
    with pytest.raises(UnsupportedIndexError):
        modular_polynomial_mod(4, 11)
    with pytest.raises(UnsupportedIndexError):
        modular_polynomial_mod(11, 11)
    with pytest.raises(UnsupportedIndexError):
        modular_polynomial_mod(7, 7)
    with pytest.raises(UnsupportedIndexError):
        modular_polynomial_mod(5, 5)
    with pytest.raises(UnsupportedIndexError):
        modular_polynomial_mod(11, 7)  # needs l + 1 < p
    with pytest.raises(UnsupportedIndexError):
        modular_polynomial(9)
    assert supported_prime(2, 5) and supported_prime(3, 5)
    assert not supported_prime(5, 5) and not supported_prime(7, 7)
    assert supported_prime(11, 7) is False and supported_prime(11, 13) and supported_prime(7, 11)
