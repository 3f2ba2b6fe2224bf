"""The supersingular locus mod p with its weights and Frobenius involution."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .arith import Fp2Elem, check_prime, legendre
from .errors import InternalConsistencyError, InvalidInputError, UnsupportedDiscriminantError
from .qseries import supersingular_poly
from .arith import roots_in_fp2


@dataclass(frozen=True)
class SsClass:
    index: int
    j: Fp2Elem
    weight: int
    conj: int

    @property
    def rational(self) -> bool:
        return self.j.is_rational()


@dataclass(frozen=True)
class SsLocus:
    p: int
    classes: tuple[SsClass, ...]

    @property
    def n(self) -> int:
        return len(self.classes)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(c.weight for c in self.classes)

    @property
    def js(self) -> tuple[Fp2Elem, ...]:
        return tuple(c.j for c in self.classes)

    @property
    def conj(self) -> tuple[int, ...]:
        return tuple(c.conj for c in self.classes)

    @property
    def S_p(self) -> tuple[int, ...]:
        return tuple(c.index for c in self.classes if c.rational)

    def mass(self) -> Fraction:
        return sum((Fraction(1, w) for w in self.weights), Fraction(0))

    def index_of(self, j) -> int | None:
        j = j if isinstance(j, Fp2Elem) else Fp2Elem(j, 0, self.p)
        for c in self.classes:
            if c.j == j:
                return c.index
        return None

    def check(self):
        p = self.p
        if self.mass() != Fraction(p - 1, 12):
            raise InternalConsistencyError(f"p = {p}: mass {self.mass()} != (p-1)/12")
        for c in self.classes:
            other = self.classes[c.conj]
            if other.conj != c.index or other.j != c.j.conjugate():
                raise InternalConsistencyError(f"p = {p}: conjugation broken at {c.index}")
            if (c.conj == c.index) != c.rational:
                raise InternalConsistencyError(f"p = {p}: conj fixes a non-rational class")
            if c.weight != expected_weight(c.j, p):
                raise InternalConsistencyError(f"p = {p}: weight mismatch at j = {c.j}")


def expected_weight(j: Fp2Elem, p: int) -> int:
    if j == 0 and p % 3 == 2:
        return 3
    if j == 1728 and p % 4 == 3:
        return 2
    return 1


def _canonical_order(roots, p):
    rational = sorted((r for r in roots if r.is_rational()), key=lambda r: r.a)
    # one representative per pair: the one with b <= (p - 1) / 2
    reps = sorted((r for r in roots if not r.is_rational() and r.b <= (p - 1) // 2),
                  key=Fp2Elem.sort_key)
    ordered = list(rational)
    for r in reps:
        ordered += [r, r.conjugate()]
    return ordered


@lru_cache(maxsize=None)
def build_locus(p: int) -> SsLocus:
    check_prime(p)
    f = supersingular_poly(p)
    roots = roots_in_fp2(f)
    if any(m != 1 for _, m in roots):
        raise InternalConsistencyError(f"p = {p}: supersingular polynomial is not squarefree")
    js = [r for r, _ in roots]
    if len(js) != f.degree():
        raise InternalConsistencyError(f"p = {p}: supersingular polynomial does not split in F_p^2")
    ordered = _canonical_order(js, p)
    pos = {j: i for i, j in enumerate(ordered)}
    classes = tuple(
        SsClass(i, j, expected_weight(j, p), pos[j.conjugate()]) for i, j in enumerate(ordered))
    locus = SsLocus(p, classes)
    locus.check()
    return locus


def reduced_forms(disc: int) -> list[tuple[int, int, int]]:
    """Reduced primitive forms (a, b, c) of discriminant disc < 0."""
    from math import gcd
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InvalidInputError(f"{disc} is not a negative discriminant")
    D = -disc
    out = []
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def class_number(disc: int) -> int:
    """h(disc) for a negative discriminant, by counting reduced forms."""
    return len(reduced_forms(disc))


def s_p_formula(p: int) -> int:
    """Eichler's count of F_p-rational supersingular j-invariants."""
    check_prime(p)
    if p % 4 == 1:
        h = class_number(-4 * p)
        if h % 2:
            raise InternalConsistencyError(f"h(-4*{p}) = {h} is odd")
        return h // 2
    h = class_number(-p)
    return 2 * h if p % 8 == 3 else h


@dataclass(frozen=True)
class CMSeed:
    D: int
    j: int
    u: int


CM_SEEDS: dict[int, CMSeed] = {
    s.D: s for s in (
        CMSeed(3, 0, 3),
        CMSeed(4, 1728, 2),
        CMSeed(7, -3375, 1),
        CMSeed(8, 8000, 1),
        CMSeed(11, -32768, 1),
        CMSeed(19, -884736, 1),
        CMSeed(43, -884736000, 1),
        CMSeed(67, -147197952000, 1),
        CMSeed(163, -262537412640768000, 1),
    )
}


def cm_seed(D: int) -> CMSeed:
    try:
        return CM_SEEDS[D]
    except KeyError:
        raise UnsupportedDiscriminantError(f"-{D} is not a class-number-one discriminant") from None


def is_inert(p: int, D: int) -> bool:
    return legendre(-D, p) == -1


def cm_seed_class(locus: SsLocus, D: int) -> int | None:
    """Index of the class with j = j_D mod p, when p is inert in Q(sqrt(-D))."""
    seed = cm_seed(D)
    if not is_inert(locus.p, D):
        return None
    i = locus.index_of(seed.j)
    if i is None:
        raise InternalConsistencyError(
            f"p = {locus.p}: CM j-invariant for -{D} is not supersingular")
    return i
