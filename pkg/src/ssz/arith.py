"""Exact arithmetic over F_p and F_p^2, dense polynomials, and integer kernels.

Field elements and polynomials are small immutable wrappers around Python
ints.  The heavy kernels (``mul_coeffs``, ``ModRing``) work on plain lists of
residues so the wrappers stay out of the hot loops.  Arbitrary-precision
integers and rationals are Python ``int`` and ``fractions.Fraction``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import InvalidInputError

DEFAULT_SEED = 20240601

# deterministic for n < 3.3 * 10**24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin on a fixed base set."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    """Return ``p`` if it is a prime >= 5, else raise InvalidInputError."""
    if not isinstance(p, int) or p < 5 or not is_prime(p):
        raise InvalidInputError(f"expected a prime p >= 5, got {p!r}")
    return p


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    if not isinstance(p, int) or p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidInputError(f"legendre symbol needs an odd prime, got {p!r}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> int | None:
    """Tonelli-Shanks.  Returns the smaller square root of a mod p, or None."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = nonresidue(p)
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


@lru_cache(maxsize=None)
def nonresidue(p: int) -> int:
    """Smallest positive quadratic nonresidue mod p; defines F_p^2 = F_p(sqrt t)."""
    t = 2
    while legendre(t, p) != -1:
        t += 1
    return t


class FieldElem:
    """A residue mod an odd prime p >= 5."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        check_prime(p)
        self.value = int(value) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise InvalidInputError("moduli differ")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def inverse(self) -> FieldElem:
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return FieldElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FieldElem(o, self.p).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElem(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElem({self.value}, {self.p})"

    def legendre(self) -> int:
        return legendre(self.value, self.p)


def sqrt_mod_p(a: FieldElem) -> FieldElem | None:
    r = sqrt_mod(a.value, a.p)
    return None if r is None else FieldElem(r, a.p)


# -- F_p^2 on raw pairs: (a, b) stands for a + b*sqrt(t) -----------------------

def fp2_mul(x, y, p, t):
    a, b = x
    c, d = y
    return ((a * c + b * d * t) % p, (a * d + b * c) % p)


def fp2_add(x, y, p):
    return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)


def fp2_sub(x, y, p):
    return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)


def fp2_pow(x, e, p, t):
    r = (1, 0)
    while e:
        if e & 1:
            r = fp2_mul(r, x, p, t)
        x = fp2_mul(x, x, p, t)
        e >>= 1
    return r


class Fp2Elem:
    """a + b*sqrt(t) in F_p^2, t the smallest nonresidue mod p."""

    __slots__ = ("a", "b", "p")

    def __init__(self, a, b, p: int):
        check_prime(p)
        self.a = int(a) % p
        self.b = int(b) % p
        self.p = p

    @property
    def t(self) -> int:
        return nonresidue(self.p)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)

    @classmethod
    def from_pair(cls, pair, p):
        return cls(pair[0], pair[1], p)

    def _coerce(self, other):
        if isinstance(other, Fp2Elem):
            if other.p != self.p:
                raise InvalidInputError("moduli differ")
            return other.pair
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise InvalidInputError("moduli differ")
            return (other.value, 0)
        if isinstance(other, int):
            return (other % self.p, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem.from_pair(fp2_add(self.pair, o, self.p), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem.from_pair(fp2_sub(self.pair, o, self.p), self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem.from_pair(fp2_sub(o, self.pair, self.p), self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem.from_pair(fp2_mul(self.pair, o, self.p, self.t), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp2Elem(-self.a, -self.b, self.p)

    def norm(self) -> int:
        return (self.a * self.a - self.t * self.b * self.b) % self.p

    def conjugate(self) -> Fp2Elem:
        """Frobenius x -> x^p."""
        return Fp2Elem(self.a, -self.b, self.p)

    frobenius = conjugate

    def inverse(self) -> Fp2Elem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in F_p^2")
        ninv = pow(n, -1, self.p)
        return Fp2Elem(self.a * ninv, -self.b * ninv, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Fp2Elem.from_pair(o, self.p).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Fp2Elem.from_pair(fp2_pow(self.pair, e, self.p, self.t), self.p)

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        if isinstance(other, Fp2Elem):
            return self.p == other.p and self.pair == other.pair
        if isinstance(other, (int, FieldElem)):
            return self.pair == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.p))

    def sort_key(self):
        return (self.a, self.b)

    def __repr__(self):
        return f"Fp2Elem({self.a}, {self.b}, {self.p})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.t})"


# -- dense coefficient lists over F_p (low degree first) ------------------------

def trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


_KRONECKER_CUTOFF = 24


def mul_coeffs(a, b, p: int) -> list[int]:
    """Product of two reduced coefficient lists mod p (untrimmed, len la+lb-1).

    Long inputs go through Kronecker substitution: both operands are packed
    into a single big integer and multiplied by CPython's bigint kernel.
    """
    la, lb = len(a), len(b)
    if not la or not lb:
        return []
    if min(la, lb) < _KRONECKER_CUTOFF:
        res = [0] * (la + lb - 1)
        if la < lb:
            a, b = b, a
        for j, y in enumerate(b):
            if y:
                seg = res[j:j + len(a)]
                res[j:j + len(a)] = [u + y * x for u, x in zip(seg, a)]
        return [c % p for c in res]
    w = (2 * (p - 1).bit_length() + min(la, lb).bit_length() + 8) // 8
    A = int.from_bytes(b"".join(x.to_bytes(w, "little") for x in a), "little")
    B = int.from_bytes(b"".join(x.to_bytes(w, "little") for x in b), "little")
    n = la + lb - 1
    raw = (A * B).to_bytes(n * w, "little")
    return [int.from_bytes(raw[i * w:(i + 1) * w], "little") % p for i in range(n)]


def add_coeffs(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    res = list(a)
    for i, y in enumerate(b):
        res[i] = (res[i] + y) % p
    return trim(res)


def sub_coeffs(a, b, p):
    n = max(len(a), len(b))
    res = [0] * n
    for i, x in enumerate(a):
        res[i] = x
    for i, y in enumerate(b):
        res[i] = (res[i] - y) % p
    return trim(res)


def divmod_coeffs(a, f, p):
    """Long division a = q*f + r over F_p; f must be trimmed and nonzero."""
    d = len(f) - 1
    if d < 0:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    if len(a) <= d:
        return [], trim(a)
    inv = pow(f[-1], -1, p)
    low = f[:-1]
    q = [0] * (len(a) - d)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i] % p * inv % p
        if c:
            off = i - d
            q[off] = c
            a[off:i] = [x - c * y for x, y in zip(a[off:i], low)]
    return trim(q), trim([x % p for x in a[:d]])


def monic_coeffs(a, p):
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def gcd_coeffs(a, b, p):
    """Monic gcd over F_p."""
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, divmod_coeffs(a, b, p)[1]
    return monic_coeffs(a, p)


def eval_coeffs(c, x, p):
    acc = 0
    for y in reversed(c):
        acc = (acc * x + y) % p
    return acc


def eval_coeffs_fp2(c, x, p, t):
    """Horner evaluation of an F_p polynomial at a raw F_p^2 pair."""
    a, b = 0, 0
    xa, xb = x
    for y in reversed(c):
        a, b = (a * xa + b * xb * t + y) % p, (a * xb + b * xa) % p
    return (a, b)


class ModRing:
    """Arithmetic in F_p[x]/(f) for monic f.

    Reduction is Barrett-style for large moduli: the quotient comes from a
    cached power-series inverse of reversed f, so each reduction costs two
    Kronecker multiplications instead of a quadratic Python loop.
    """

    _BARRETT_MIN_DEGREE = 40

    def __init__(self, f, p):
        f = trim(list(f))
        if not f or f[-1] != 1:
            raise InvalidInputError("ModRing needs a monic modulus")
        self.f = f
        self.p = p
        self.d = len(f) - 1
        self._rinv = None
        if self.d >= self._BARRETT_MIN_DEGREE:
            self._rinv = series_inverse(f[::-1], self.d - 1, p)

    def reduce(self, a):
        d, p = self.d, self.p
        if len(a) <= d:
            return trim(list(a))
        if self._rinv is None or len(a) > 2 * d - 1:
            return divmod_coeffs(a, self.f, p)[1]
        k = len(a) - d  # quotient length
        ra = a[::-1][:k]
        q = mul_coeffs(ra, self._rinv[:k], p)[:k][::-1]
        qf = mul_coeffs(q, self.f, p)
        return trim([(x - y) % p for x, y in zip(a[:d], qf[:d])])

    def mul(self, a, b):
        return self.reduce(mul_coeffs(a, b, self.p))

    def pow(self, a, e: int):
        result = [1] if self.d > 0 else []
        base = self.reduce(list(a))
        for bit in bin(e)[2:]:
            result = self.mul(result, result)
            if bit == "1":
                result = self.mul(result, base)
        return result


def series_inverse(c, n, p):
    """1/c mod x^n for c[0] != 0 (Newton iteration)."""
    if n <= 0:
        return []
    inv0 = pow(c[0], -1, p)
    g = [inv0]
    k = 1
    while k < n:
        k = min(2 * k, n)
        cg = mul_coeffs(c[:k], g, p)[:k]
        e = [(-x) % p for x in cg]
        e[0] = (e[0] + 2) % p
        g = mul_coeffs(g, e, p)[:k]
    return g + [0] * (n - len(g))


class PolyFp:
    """Dense polynomial over F_p, coefficients low degree first."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs, p: int):
        check_prime(p)
        self.p = p
        self.coeffs = tuple(trim([int(c) % p for c in coeffs]))

    @classmethod
    def x(cls, p):
        return cls([0, 1], p)

    @classmethod
    def from_roots(cls, roots, p):
        c = [1]
        for r in roots:
            c = mul_coeffs(c, [(-int(r)) % p, 1], p)
        return cls(c, p)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _other(self, other):
        if isinstance(other, PolyFp):
            if other.p != self.p:
                raise InvalidInputError("moduli differ")
            return list(other.coeffs)
        if isinstance(other, (int, FieldElem)):
            return trim([int(other) % self.p])
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PolyFp(add_coeffs(list(self.coeffs), o, self.p), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PolyFp(sub_coeffs(list(self.coeffs), o, self.p), self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PolyFp(sub_coeffs(o, list(self.coeffs), self.p), self.p)

    def __neg__(self):
        return PolyFp([-c for c in self.coeffs], self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return PolyFp(mul_coeffs(list(self.coeffs), o, self.p), self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        r = PolyFp([1], self.p)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __divmod__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        q, r = divmod_coeffs(list(self.coeffs), o, self.p)
        return PolyFp(q, self.p), PolyFp(r, self.p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        if isinstance(x, Fp2Elem):
            return Fp2Elem.from_pair(
                eval_coeffs_fp2(self.coeffs, x.pair, self.p, x.t), self.p)
        return FieldElem(eval_coeffs(self.coeffs, int(x), self.p), self.p)

    def monic(self) -> PolyFp:
        return PolyFp(monic_coeffs(list(self.coeffs), self.p), self.p)

    def derivative(self) -> PolyFp:
        return PolyFp([i * c for i, c in enumerate(self.coeffs)][1:], self.p)

    def gcd(self, other: PolyFp) -> PolyFp:
        return PolyFp(gcd_coeffs(self.coeffs, other.coeffs, self.p), self.p)

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree() == 0

    def __eq__(self, other):
        if isinstance(other, PolyFp):
            return self.p == other.p and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __repr__(self):
        return f"PolyFp({list(self.coeffs)}, {self.p})"


class PolyFp2:
    """Dense polynomial over F_p^2 (coefficients stored as raw pairs)."""

    __slots__ = ("pairs", "p")

    def __init__(self, coeffs, p: int):
        check_prime(p)
        pairs = []
        for c in coeffs:
            if isinstance(c, Fp2Elem):
                pairs.append(c.pair)
            elif isinstance(c, tuple):
                pairs.append((c[0] % p, c[1] % p))
            else:
                pairs.append((int(c) % p, 0))
        while pairs and pairs[-1] == (0, 0):
            pairs.pop()
        self.pairs = tuple(pairs)
        self.p = p

    @property
    def coeffs(self) -> tuple[Fp2Elem, ...]:
        return tuple(Fp2Elem.from_pair(c, self.p) for c in self.pairs)

    def degree(self) -> int:
        return len(self.pairs) - 1

    def __call__(self, x) -> Fp2Elem:
        x = x if isinstance(x, Fp2Elem) else Fp2Elem(int(x), 0, self.p)
        p, t = self.p, nonresidue(self.p)
        acc = (0, 0)
        for c in reversed(self.pairs):
            acc = fp2_add(fp2_mul(acc, x.pair, p, t), c, p)
        return Fp2Elem.from_pair(acc, p)

    def root_multiplicity(self, r) -> int:
        return root_multiplicity_fp2(list(self.pairs), r.pair, self.p)


def synthetic_div_fp2(c, r, p, t):
    """Divide sum c_i X^i by (X - r) over F_p^2; returns (quotient, remainder)."""
    n = len(c)
    q = [(0, 0)] * (n - 1)
    acc = (0, 0)
    for i in range(n - 1, -1, -1):
        acc = fp2_add(fp2_mul(acc, r, p, t), c[i], p)
        if i:
            q[i - 1] = acc
    return q, acc


def root_multiplicity_fp2(c, r, p):
    """Multiplicity of r as a root of a nonzero F_p^2 polynomial (raw pairs)."""
    t = nonresidue(p)
    m = 0
    while len(c) > 1:
        q, rem = synthetic_div_fp2(c, r, p, t)
        if rem != (0, 0):
            break
        m += 1
        c = q
    return m


# -- roots in F_p^2 -------------------------------------------------------------

def _edf(g, d, p, rng):
    """Equal-degree (Cantor-Zassenhaus) splitting of a squarefree monic g whose
    irreducible factors all have degree d."""
    n = len(g) - 1
    if n <= 0:
        return []
    if n == d:
        return [g]
    ring = ModRing(g, p)
    e = (p ** d - 1) // 2
    while True:
        r = trim([rng.randrange(p) for _ in range(n)])
        if len(r) < 2:
            continue
        h = ring.pow(r, e)
        h = sub_coeffs(h, [1], p)
        u = gcd_coeffs(g, h, p)
        if 0 < len(u) - 1 < n:
            v = divmod_coeffs(g, u, p)[0]
            return _edf(u, d, p, rng) + _edf(monic_coeffs(v, p), d, p, rng)


def _multiplicity(f, g, p):
    m = 0
    while True:
        q, r = divmod_coeffs(f, g, p)
        if r:
            return m
        m += 1
        f = q


def roots_in_fp2(f: PolyFp, seed: int = DEFAULT_SEED) -> list[tuple[Fp2Elem, int]]:
    """All roots of f in F_p^2 with multiplicity, sorted by (a, b)."""
    if f.is_zero():
        raise InvalidInputError("roots of the zero polynomial")
    p = f.p
    c = monic_coeffs(list(f.coeffs), p)
    if len(c) == 1:
        return []
    ring = ModRing(c, p)
    x = [0, 1]
    xp = ring.pow(x, p)
    g1 = gcd_coeffs(c, sub_coeffs(xp, x, p), p)
    xp2 = ring.pow(xp, p)
    g12 = gcd_coeffs(c, sub_coeffs(xp2, x, p), p)
    g2 = monic_coeffs(divmod_coeffs(g12, g1, p)[0], p)

    rng = random.Random(seed)
    t = nonresidue(p)
    inv2 = pow(2, -1, p)
    out = []
    for lin in _edf(g1, 1, p, rng):
        out.append((Fp2Elem(-lin[0], 0, p), _multiplicity(c, lin, p)))
    for quad in _edf(g2, 2, p, rng):
        c0, c1 = quad[0], quad[1]
        disc = (c1 * c1 - 4 * c0) % p
        s = sqrt_mod(disc * pow(t, -1, p), p)
        m = _multiplicity(c, quad, p)
        re = -c1 * inv2
        out.append((Fp2Elem(re, s * inv2, p), m))
        out.append((Fp2Elem(re, -s * inv2, p), m))
    out.sort(key=lambda rm: rm[0].sort_key())
    return out


# -- exact rational kernels -----------------------------------------------------

def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return list(v)
    v = [x // g for x in v]
    for x in v:
        if x:
            if x < 0:
                v = [-y for y in v]
            break
    return v


def primitive_integer_kernel(M) -> list[list[int]]:
    """Basis of the right kernel of a rational matrix, as primitive integer
    vectors with positive first nonzero entry.

    Forward elimination is fraction-free (Bareiss) with first-nonzero
    pivoting; the free columns, taken in increasing order, index the basis.
    """
    rows = [list(r) for r in M]
    if not rows:
        return []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise InvalidInputError("ragged matrix")
    A = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        A.append([int(x * den) for x in fr])

    nrows = len(A)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        arc = A[r][c]
        rowr = A[r]
        for i in range(r + 1, nrows):
            rowi = A[i]
            aic = rowi[c]
            if aic == 0:
                if prev != 1 or arc != 1:
                    rowi[c + 1:] = [arc * x // prev for x in rowi[c + 1:]]
                continue
            rowi[c + 1:] = [(arc * x - aic * y) // prev
                            for x, y in zip(rowi[c + 1:], rowr[c + 1:])]
            rowi[c] = 0
        prev = arc
        pivots.append(c)
        r += 1

    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            pc = pivots[k]
            s = sum((A[k][j] * x[j] for j in range(pc + 1, ncols) if x[j]), Fraction(0))
            x[pc] = -s / A[k][pc]
        den = 1
        for v in x:
            den = den * v.denominator // gcd(den, v.denominator)
        basis.append(_primitive([int(v * den) for v in x]))
    return basis
