"""Truncated q-expansions mod p of level-1 forms and divisor polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import PolyFp, check_prime, mul_coeffs, series_inverse
from .errors import InvalidInputError, NotAModularFormError

PRECISION_BUFFER = 5


class QSeries:
    """Laurent series sum_{n >= start} c_n q^n mod p, known for n < prec.

    ``coeffs[i]`` is the coefficient of q^(start + i) and ``prec`` is the
    absolute precision (first unknown exponent).  The product of A and B is
    known below min(A.prec + val(B), B.prec + val(A)).
    """

    __slots__ = ("p", "start", "coeffs", "weight")

    def __init__(self, p: int, start: int, coeffs, weight: int | None = None):
        self.p = p
        self.start = start
        self.coeffs = tuple(int(c) % p for c in coeffs)
        self.weight = weight

    @property
    def prec(self) -> int:
        return self.start + len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        if n >= self.prec:
            raise IndexError(f"q^{n} is beyond the precision O(q^{self.prec})")
        if n < self.start:
            return 0
        return self.coeffs[n - self.start]

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return self.start + i
        return self.prec

    def normalized(self) -> QSeries:
        v = self.valuation()
        return QSeries(self.p, v, self.coeffs[v - self.start:], self.weight)

    def truncate(self, prec: int) -> QSeries:
        if prec > self.prec:
            raise InvalidInputError("cannot raise precision by truncation")
        return QSeries(self.p, self.start, self.coeffs[:max(0, prec - self.start)], self.weight)

    def shift(self, k: int) -> QSeries:
        """Multiply by q^k (weight unchanged)."""
        return QSeries(self.p, self.start + k, self.coeffs, self.weight)

    def with_weight(self, k: int | None) -> QSeries:
        return QSeries(self.p, self.start, self.coeffs, k)

    def _check(self, other):
        if not isinstance(other, QSeries):
            return False
        if other.p != self.p:
            raise InvalidInputError("moduli differ")
        return True

    def _addsub(self, other, sign):
        prec = min(self.prec, other.prec)
        start = min(self.start, other.start)
        out = [0] * max(0, prec - start)
        for i, c in enumerate(self.coeffs):
            n = self.start + i
            if n < prec:
                out[n - start] += c
        for i, c in enumerate(other.coeffs):
            n = other.start + i
            if n < prec:
                out[n - start] += sign * c
        w = self.weight if self.weight == other.weight else None
        return QSeries(self.p, start, out, w)

    def __add__(self, other):
        if isinstance(other, int):
            other = QSeries(self.p, 0, [other] + [0] * max(0, self.prec - 1))
        if not self._check(other):
            return NotImplemented
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = QSeries(self.p, 0, [other] + [0] * max(0, self.prec - 1))
        if not self._check(other):
            return NotImplemented
        return self._addsub(other, -1)

    def __neg__(self):
        return QSeries(self.p, self.start, [-c for c in self.coeffs], self.weight)

    def scale(self, c: int) -> QSeries:
        return QSeries(self.p, self.start, [c * x for x in self.coeffs], self.weight)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not self._check(other):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        prec = min(a.prec + b.start, b.prec + a.start)
        start = a.start + b.start
        n = max(0, prec - start)
        prod = mul_coeffs(list(a.coeffs[:n]), list(b.coeffs[:n]), self.p)[:n]
        prod += [0] * (n - len(prod))
        w = None if self.weight is None or other.weight is None else self.weight + other.weight
        return QSeries(self.p, start, prod, w)

    __rmul__ = __mul__

    def inverse(self) -> QSeries:
        a = self.normalized()
        if not a.coeffs:
            raise ZeroDivisionError("series is zero to its known precision")
        n = len(a.coeffs)
        inv = series_inverse(list(a.coeffs), n, self.p)
        w = None if self.weight is None else -self.weight
        return QSeries(self.p, -a.start, inv, w)

    def __truediv__(self, other):
        if not self._check(other):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, e: int) -> QSeries:
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            n = len(self.normalized().coeffs)
            return QSeries(self.p, 0, [1] + [0] * (n - 1), None if self.weight is None else 0)
        result, base = None, self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.p != other.p or self.prec != other.prec:
            return False
        lo = min(self.start, other.start)
        return all(self[n] == other[n] for n in range(lo, self.prec))

    def agrees_with(self, other: QSeries) -> bool:
        """Equal on the common range of known coefficients."""
        prec = min(self.prec, other.prec)
        lo = min(self.start, other.start)
        return all(self[n] == other[n] for n in range(lo, prec))

    def __hash__(self):
        s = self.normalized()
        return hash((s.p, s.start, s.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:8]):
            if c:
                terms.append(f"{c}*q^{self.start + i}")
        body = " + ".join(terms) or "0"
        return f"QSeries({body} + O(q^{self.prec}) mod {self.p}, weight={self.weight})"


# -- arithmetic functions -------------------------------------------------------

def _sigma_mod(k: int, N: int, p: int) -> list[int]:
    s = [0] * N
    for d in range(1, N):
        dk = pow(d, k, p)
        for n in range(d, N, d):
            s[n] += dk
    return [x % p for x in s]


_tangent_cache: list[int] = [0, 1]


def _tangent_numbers(n: int) -> list[int]:
    global _tangent_cache
    if n < len(_tangent_cache):
        return _tangent_cache
    N = max(n, 2 * (len(_tangent_cache) - 1))
    T = [0] * (N + 1)
    T[1] = 1
    for k in range(2, N + 1):
        T[k] = (k - 1) * T[k - 1]
    for k in range(2, N + 1):
        for j in range(k, N + 1):
            T[j] = (j - k) * T[j - 1] + (j - k + 2) * T[j]
    _tangent_cache = T
    return T


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k (Brent-Harvey tangent-number recurrence)."""
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(-1, 2)
    if k % 2:
        return Fraction(0)
    n = k // 2
    T = _tangent_numbers(n)[n]
    sign = 1 if n % 2 else -1
    return Fraction(sign * 2 * n * T, 4 ** n * (4 ** n - 1))


# -- classical level-1 q-expansions --------------------------------------------

def eisenstein(weight: int, p: int, N: int) -> QSeries:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n mod p to O(q^N).

    Any even k >= 4 whose normalizing constant is p-integral is accepted;
    for k = p - 1 the constant vanishes mod p and E_{p-1} reduces to 1.
    """
    check_prime(p)
    if N < 1:
        raise InvalidInputError("precision must be >= 1")
    if not isinstance(weight, int) or weight < 4 or weight % 2:
        raise InvalidInputError(f"unsupported Eisenstein weight {weight!r}")
    c = Fraction(-2 * weight) / bernoulli(weight)
    if c.denominator % p == 0:
        raise InvalidInputError(f"E_{weight} is not p-integral for p = {p}")
    cm = c.numerator * pow(c.denominator, -1, p) % p
    if cm == 0:
        return QSeries(p, 0, [1] + [0] * (N - 1), weight)
    sig = _sigma_mod(weight - 1, N, p)
    return QSeries(p, 0, [1] + [cm * s for s in sig[1:]], weight)


@lru_cache(maxsize=64)
def _eta_cubed_coeffs(N: int) -> tuple[int, ...]:
    # prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}
    c = [0] * N
    k = 0
    while k * (k + 1) // 2 < N:
        c[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return tuple(c)


def delta(p: int, N: int) -> QSeries:
    """Delta = q prod (1 - q^n)^24 mod p to O(q^N)."""
    if N < 2:
        raise InvalidInputError("delta needs precision >= 2")
    u = QSeries(p, 0, _eta_cubed_coeffs(N - 1))
    u = u * u
    u = u * u
    u = u * u
    return QSeries(p, 1, u.coeffs[:N - 1], 12)


_TILDE_E = {0: (0, 0), 2: (2, 1), 4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1)}
_H_ROOTS = {0: (), 2: (0, 0, 1728), 4: (0,), 6: (1728,), 8: (0, 0), 10: (0, 1728)}


def _check_weight(k):
    if not isinstance(k, int) or k % 2 or k < 0 or (k < 4 and k % 12):
        raise InvalidInputError(f"weight must be even with k >= 4 or k = 0 mod 12, got {k!r}")


def tilde_e_exponents(k: int) -> tuple[int, int]:
    """(a, b) with tilde E_k = E4^a E6^b."""
    _check_weight(k)
    return _TILDE_E[k % 12]


def tilde_e(k: int, p: int, N: int) -> QSeries:
    a, b = tilde_e_exponents(k)
    out = QSeries(p, 0, [1] + [0] * (N - 1), 0)
    if a:
        out = out * eisenstein(4, p, N) ** a
    if b:
        out = out * eisenstein(6, p, N)
    return out.with_weight(4 * a + 6 * b)


def m_of(k: int) -> int:
    _check_weight(k)
    return k // 12 - (1 if k % 12 == 2 else 0)


def h_poly(k: int, p: int) -> PolyFp:
    _check_weight(k)
    return PolyFp.from_roots(_H_ROOTS[k % 12], p)


def default_precision(k: int) -> int:
    return m_of(k) + h_poly(k, 5).degree() + PRECISION_BUFFER


@lru_cache(maxsize=32)
def _j_unit(p: int, N: int) -> tuple[int, ...]:
    """J with j = q^{-1} J, as a power series mod p to O(q^N)."""
    e4 = eisenstein(4, p, N)
    u = delta(p, N + 1).shift(-1)
    return (e4 * e4 * e4 / u).coeffs[:N]


def j_series(p: int, N: int) -> QSeries:
    """j = E4^3/Delta = q^{-1} + 744 + ...: N coefficients from q^{-1}."""
    check_prime(p)
    if N < 1:
        raise InvalidInputError("precision must be >= 1")
    return QSeries(p, -1, _j_unit(p, N), 0)


@lru_cache(maxsize=16)
def _j_unit_powers(p: int, N: int, m: int) -> tuple[tuple[int, ...], ...]:
    J = list(_j_unit(p, N))
    powers = [tuple([1] + [0] * (N - 1))]
    cur = [1] + [0] * (N - 1)
    for _ in range(m):
        cur = mul_coeffs(cur, J, p)[:N]
        powers.append(tuple(cur))
    return tuple(powers)


# -- divisor polynomials ---------------------------------------------------------

@dataclass(frozen=True)
class DivisorPoly:
    """F(g, x) = h_k(x) * Ftilde(g, x) mod p, kept in factored form."""

    p: int
    weight: int
    m: int
    ftilde: PolyFp
    h: PolyFp

    @property
    def poly(self) -> PolyFp:
        return self.h * self.ftilde

    @property
    def ftilde_degree(self) -> int:
        return self.ftilde.degree()

    def monomials(self) -> list[tuple[int, int, int, int]]:
        """Nonzero terms (coeff, Delta-exp, E4-exp, E6-exp) of
        g = tilde E_k * sum_i c_i E4^(3i) Delta^(m-i), Delta exponent ascending."""
        a, b = tilde_e_exponents(self.weight)
        out = []
        for i in range(self.m, -1, -1):
            c = self.ftilde.coeffs[i] if i < len(self.ftilde.coeffs) else 0
            if c:
                out.append((c, self.m - i, 3 * i + a, b))
        return out


def expand_monomials(terms, p: int, N: int, weight: int | None = None) -> QSeries:
    """Re-expand sum c * Delta^d E4^a E6^b as a q-series to O(q^N)."""
    e4, e6, dl = eisenstein(4, p, N), eisenstein(6, p, N), delta(p, N)
    total = QSeries(p, 0, [0] * N, weight)
    for c, d, a, b in terms:
        term = QSeries(p, 0, [c] + [0] * (N - 1), 0)
        if d:
            term = term * dl ** d
        if a:
            term = term * e4 ** a
        if b:
            term = term * e6 ** b
        total = total + term.truncate(N)
    return total.with_weight(weight)


def divisor_polynomial(g: QSeries, p: int | None = None) -> DivisorPoly:
    """Solve g = Delta^m tilde E_k Ftilde(j) exactly and return F = h_k Ftilde.

    Ftilde is peeled off greedily from the pole at infinity of
    g / (Delta^m tilde E_k); every coefficient known beyond q^0 is then an
    extra equation that must vanish.
    """
    k = g.weight
    if k is None:
        raise InvalidInputError("q-series carries no weight tag")
    p = g.p if p is None else p
    if p != g.p:
        raise InvalidInputError("modulus mismatch")
    check_prime(p)
    m = m_of(k)
    h = h_poly(k, p)
    if g.start < 0:
        raise NotAModularFormError("negative exponents in a holomorphic form")
    N = g.prec
    if N < m + h.degree() + PRECISION_BUFFER:
        raise InvalidInputError(
            f"precision {N} below m(k) + deg h_k + {PRECISION_BUFFER} = "
            f"{m + h.degree() + PRECISION_BUFFER}")

    unit = delta(p, N + 1).shift(-1)
    denom = tilde_e(k, p, N) * unit ** m
    gg = QSeries(p, 0, [g[n] for n in range(N)])
    quot = gg / denom
    R = [quot[n] for n in range(N)]  # R[n] is the coefficient of q^(n - m)

    powers = _j_unit_powers(p, N, m)
    ft = [0] * (m + 1)
    for i in range(m, -1, -1):
        c = R[m - i]
        if c:
            ft[i] = c
            off = m - i
            Ji = powers[i]
            R[off:] = [(x - c * y) % p for x, y in zip(R[off:], Ji)]
    bad = [n - m for n in range(N) if R[n] % p]
    if bad:
        raise NotAModularFormError(
            f"linear system inconsistent at q^{bad[0]} (weight tag {k}); "
            "wrong weight or insufficient precision")
    return DivisorPoly(p, k, m, PolyFp(ft, p), h)


def supersingular_poly(p: int) -> PolyFp:
    """Monic F(E_{p-1}, x) mod p; its roots are the supersingular j-invariants."""
    check_prime(p)
    k = p - 1
    N = default_precision(k)
    return divisor_polynomial(eisenstein(k, p, N)).poly.monic()
