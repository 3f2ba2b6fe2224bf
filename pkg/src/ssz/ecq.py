"""Rational elliptic curves of prime conductor.

Point counts are naive O(l) sums of a quadratic character table; the bad
prime is handled through the tangent cone at the node.  Ranks are never
computed here: they are carried along from the input as plain data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt

from .arith import (
    check_prime, divmod_coeffs, gcd_coeffs, is_prime, legendre, primes_up_to, trim,
)
from .errors import InternalConsistencyError, SearchFailureError, ValidationError
from .qseries import QSeries

ANOMALOUS_SEARCH_BOUND = 10 ** 4
TORSION_GCD_PRIMES = 20


@dataclass(frozen=True)
class CurveQ:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with conductor p.

    ``p`` is ingested, then checked: the discriminant must be +-p^k and the
    reduction at p multiplicative (p does not divide c4).  ``p=None`` skips
    the conductor checks; used only for exercising the predicates.
    """

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    p: int | None = None
    label: str = ""
    rank: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.disc == 0:
            raise ValidationError(f"curve {self.name}: singular model")
        if self.c4 ** 3 - self.c6 ** 2 != 1728 * self.disc:
            raise InternalConsistencyError("c4^3 - c6^2 != 1728 disc")
        if self.p is not None:
            self._validate_conductor()
        if self.rank is not None and self.rank < 0:
            raise ValidationError(f"curve {self.name}: negative rank")

    @property
    def name(self) -> str:
        return self.label or str(self.ainvs)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c4(self) -> int:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def c6(self) -> int:
        b2, b4, b6, _ = self.b_invariants
        return -b2 ** 3 + 36 * b2 * b4 - 216 * b6

    @cached_property
    def disc(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def _validate_conductor(self):
        p = self.p
        try:
            check_prime(p)
        except Exception as exc:
            raise ValidationError(f"curve {self.name}: conductor {p!r} is not a prime >= 5") from exc
        d = abs(self.disc)
        if d % p:
            raise ValidationError(f"curve {self.name}: p = {p} does not divide the discriminant")
        while d % p == 0:
            d //= p
        if d != 1:
            raise ValidationError(
                f"curve {self.name}: discriminant {self.disc} has prime factors other than {p}")
        if self.c4 % p == 0:
            raise ValidationError(f"curve {self.name}: reduction at {p} is not multiplicative")

    def reduce(self, ell: int) -> tuple[int, ...]:
        return tuple(a % ell for a in self.ainvs)


def count_points(E: CurveQ, ell: int) -> int:
    """#E(F_ell) including the point at infinity (E must be good at ell)."""
    return ell + 1 - _ap_good(E.ainvs, ell)


@lru_cache(maxsize=None)
def _ap_good(ainvs, ell):
    a1, a2, a3, a4, a6 = ainvs
    if ell == 2:
        count = 1
        for x in (0, 1):
            for y in (0, 1):
                if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    count += 1
        return ell + 1 - count
    b2 = (a1 * a1 + 4 * a2) % ell
    b4 = (2 * a4 + a1 * a3) % ell
    b6 = (a3 * a3 + 4 * a6) % ell
    chi = [-1] * ell
    chi[0] = 0
    for y in range(1, (ell + 1) // 2):
        chi[y * y % ell] = 1
    s = 0
    c4, c2, c1, c0 = 4 % ell, b2, 2 * b4 % ell, b6
    for x in range(ell):
        s += chi[(((c4 * x + c2) * x + c1) * x + c0) % ell]
    return -s


def node_tangent_sign(E: CurveQ) -> int:
    """+1 if the tangent slopes at the node mod p are in F_p (split), else -1."""
    p = E.p
    b2, b4, b6, _ = (b % p for b in E.b_invariants)
    g = trim([b6, 2 * b4 % p, b2, 4 % p])
    dg = trim([2 * b4 % p, 2 * b2 % p, 12 % p])
    common = gcd_coeffs(g, dg, p)
    if len(common) != 2:
        raise InternalConsistencyError(f"curve {E.name}: reduction at {p} is not a node")
    x0 = -common[0] % p
    s = legendre(12 * x0 + b2, p)
    if s == 0:
        raise InternalConsistencyError(f"curve {E.name}: cusp at {p}")
    return s


def ap(E: CurveQ, ell: int) -> int:
    if ell == E.p:
        return node_tangent_sign(E)
    if E.disc % ell == 0:
        raise InternalConsistencyError(f"{ell} is a bad prime for {E.name}")
    return _ap_good(E.ainvs, ell)


def _spf_table(N):
    spf = list(range(N + 1))
    for i in range(2, isqrt(N) + 1):
        if spf[i] == i:
            for j in range(i * i, N + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def an_series(E: CurveQ, N: int) -> tuple[int, ...]:
    """(a_1, ..., a_N) of the attached newform."""
    if N < 1:
        raise ValueError("N must be >= 1")
    a = [0] * (N + 1)
    a[1] = 1
    spf = _spf_table(N)
    for n in range(2, N + 1):
        q = spf[n]
        m, e = n, 0
        while m % q == 0:
            m //= q
            e += 1
        if m > 1:
            a[n] = a[n // m] * a[m]
        elif e == 1:
            a[n] = ap(E, q)
        elif q == E.p or E.disc % q == 0:
            a[n] = a[q] * a[n // q]
        else:
            a[n] = a[q] * a[n // q] - q * a[n // (q * q)]
    return tuple(a[1:])


def newform_series(E: CurveQ, N: int, p: int | None = None) -> QSeries:
    """sum a_n q^n mod p to O(q^N), tagged with weight p + 1 (Serre's congruence)."""
    p = E.p if p is None else p
    a = an_series(E, max(N - 1, 1))
    return QSeries(p, 0, (0,) + a[:N - 1], p + 1)


def root_number(E: CurveQ) -> int:
    """Sign of the functional equation: W_p acts as -a_p, and eps = -W_p."""
    return ap(E, E.p)


def disc_sign(E: CurveQ) -> int:
    return 1 if E.disc > 0 else -1


def _integer_roots_monic_cubic(a, b, c):
    """Integer roots of x^3 + a x^2 + b x + c by exact bisection."""
    def f(x):
        return ((x + a) * x + b) * x + c

    R = 1 + max(abs(a), abs(b), abs(c))
    marks = [-R, R]
    disc = a * a - 3 * b
    if disc >= 0:
        s = isqrt(disc)
        for num in (-a - s, -a + s):
            base = num // 3
            marks.extend(range(base - 2, base + 4))
    marks = sorted({m for m in marks if -R <= m <= R})
    roots = {x for x in marks if f(x) == 0}
    for lo, hi in zip(marks, marks[1:]):
        if hi - lo < 2:
            continue
        flo, fhi = f(lo), f(hi)
        if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
            continue
        # f monotone on (lo, hi): find the sign change
        while hi - lo > 1:
            mid = (lo + hi) // 2
            fm = f(mid)
            if fm == 0:
                roots.add(mid)
                break
            if (fm > 0) == (flo > 0):
                lo = mid
            else:
                hi = mid
    return sorted(roots)


def has_rational_two_torsion(E: CurveQ) -> bool:
    """True iff 4x^3 + b2 x^2 + 2 b4 x + b6 has a rational root (x = u/4)."""
    b2, b4, b6, _ = E.b_invariants
    return bool(_integer_roots_monic_cubic(b2, 8 * b4, 16 * b6))


def _short_add(P, Q, A):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 == -y2:
            return None
        lam = (3 * x1 * x1 + A) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def _finite_order(P, A, bound=12):
    Q = P
    for n in range(1, bound + 1):
        if Q is None:
            return n
        Q = _short_add(Q, P, A)
    return 0 if Q is not None else bound + 1


@dataclass(frozen=True)
class TorsionInfo:
    order: int
    gcd_bound: int
    certified: bool
    witness_orders: tuple[int, ...] = ()


def torsion_gcd_bound(E: CurveQ, count: int = TORSION_GCD_PRIMES) -> int:
    g = 0
    got = 0
    for ell in primes_up_to(10 ** 5):
        if ell <= 3 or E.disc % ell == 0:
            continue
        g = gcd(g, count_points(E, ell))
        got += 1
        if got == count:
            break
    return g


def torsion_order(E: CurveQ) -> TorsionInfo:
    """#E(Q)_tors.

    The gcd of #E(F_l) over good primes bounds it from above.  On the short
    model Y^2 = X^3 - 27 c4 X - 54 c6 torsion points are integral with Y = 0 or
    Y^2 | 4A^3 + 27B^2 (Nagell-Lutz); when that number factors over {2, 3, p}
    every candidate is enumerated and the count is exact (certified).
    Otherwise the gcd is returned uncertified.
    """
    bound = torsion_gcd_bound(E)
    A, B = -27 * E.c4, -54 * E.c6
    D = 4 * A ** 3 + 27 * B * B
    primes = [2, 3] + ([E.p] if E.p else [])
    rest = abs(D)
    exps = {}
    for q in primes:
        while rest % q == 0:
            rest //= q
            exps[q] = exps.get(q, 0) + 1
    if rest != 1:
        return TorsionInfo(bound, bound, False)

    ys = [1]
    for q, e in exps.items():
        ys = [y * q ** i for y in ys for i in range(e // 2 + 1)]
    ys = [0] + sorted(ys)
    points = []
    for y in ys:
        for x in _integer_roots_monic_cubic(0, A, B - y * y):
            points.append((Fraction(x), Fraction(y)))
            if y:
                points.append((Fraction(x), Fraction(-y)))
    orders = []
    for P in points:
        n = _finite_order(P, Fraction(A))
        if n:
            orders.append(n)
    t = 1 + len(orders)
    if bound % t:
        raise InternalConsistencyError(
            f"curve {E.name}: torsion {t} does not divide #E(F_l) gcd {bound}")
    return TorsionInfo(t, bound, True, tuple(sorted(orders)))


def find_odd_anomalous_prime(E: CurveQ, bound: int = ANOMALOUS_SEARCH_BOUND) -> int:
    """Smallest odd prime l != p with (-p/l) = -1 and a_l odd."""
    p = E.p
    for ell in primes_up_to(bound):
        if ell == 2 or ell == p:
            continue
        if legendre(-p, ell) == -1 and ap(E, ell) % 2:
            return ell
    raise SearchFailureError(
        f"curve {E.name}: no odd prime l <= {bound} with (-{p}/l) = -1 and a_l odd")
