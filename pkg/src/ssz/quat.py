"""Brandt matrices on the supersingular module and the quaternionic eigenform.

B_ij(l) is read off the Kronecker relation: the multiset of j(E_i/C) over
the l + 1 subgroups of order l is the root multiset of Phi_l(j_i, X), so
B_ij(l) is the multiplicity of j_j there.  Hecke operators act on divisors by
t_m e_i = sum_j B_ij(m) e_j; an eigenvector v = sum v_i e_i therefore solves
B(m)^T v = a_m v.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from operator import mul

from .arith import Fp2Elem, fp2_add, fp2_mul, fp2_pow, legendre, nonresidue, primitive_integer_kernel, primes_up_to
from .arith import root_multiplicity_fp2
from .ecq import CurveQ, an_series, ap
from .errors import (
    EigenformNotFoundError, InsufficientOperatorsError, InternalConsistencyError,
    InvalidInputError, UnsupportedIndexError,
)
from .modpoly import modular_polynomial, modular_polynomial_mod, supported_prime
from .ssloc import SsClass, SsLocus, build_locus, cm_seed, cm_seed_class, is_inert

VERIFY_UP_TO = 20
EXTRACTION_PRIME_BOUND = 100

__all__ = [
    "BrandtMatrix", "Eigenform", "HeckeModule", "b_divisor", "brandt_p", "brandt_prime",
    "extract_eigenform", "hecke_module", "modular_polynomial", "pairing", "parity_checks",
]


# -- small exact matrix helpers -------------------------------------------------

def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A, B):
    Bt = list(zip(*B))
    return tuple(tuple(sum(map(mul, row, col)) for col in Bt) for row in A)


def matsub(A, B, c=1):
    return tuple(tuple(x - c * y for x, y in zip(r, s)) for r, s in zip(A, B))


def transpose(A):
    return tuple(zip(*A))


def matvec(A, v):
    return tuple(sum(map(mul, row, v)) for row in A)


@dataclass(frozen=True)
class BrandtMatrix:
    p: int
    m: int
    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: BrandtMatrix) -> tuple:
        return matmul(self.entries, other.entries)

    @property
    def T(self):
        return transpose(self.entries)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(r) for r in self.entries)


def sigma_prime(m: int, p: int) -> int:
    return sum(d for d in range(1, m + 1) if m % d == 0 and d % p)


def check_brandt(B: BrandtMatrix, locus: SsLocus):
    """Row sums, weight symmetry, conjugation symmetry."""
    p, m, n = locus.p, B.m, locus.n
    w, conj = locus.weights, locus.conj
    if B.n != n:
        raise InternalConsistencyError(f"B({m}) has the wrong size")
    expected = sigma_prime(m, p)
    for i, s in enumerate(B.row_sums()):
        if s != expected:
            raise InternalConsistencyError(f"p = {p}: row {i} of B({m}) sums to {s}, not {expected}")
    for i in range(n):
        for j in range(n):
            if w[j] * B[i, j] != w[i] * B[j, i]:
                raise InternalConsistencyError(f"p = {p}: B({m}) fails weight symmetry at ({i}, {j})")
            if B[i, j] != B[conj[i], conj[j]]:
                raise InternalConsistencyError(f"p = {p}: B({m}) fails conjugation symmetry at ({i}, {j})")


def brandt_prime(locus: SsLocus, ell: int) -> BrandtMatrix:
    p = locus.p
    if ell == p:
        return brandt_p(locus)
    if not supported_prime(ell, p):
        raise UnsupportedIndexError(f"no Brandt matrix for l = {ell} at p = {p}")
    rows = modular_polynomial_mod(ell, p)
    t = nonresidue(p)
    js = [c.j.pair for c in locus.classes]
    entries = []
    for ji in js:
        powers = [fp2_pow(ji, b, p, t) for b in range(ell + 2)]
        poly = []
        for a in range(ell + 2):
            acc = (0, 0)
            for b, c in enumerate(rows[a]):
                if c:
                    acc = fp2_add(acc, fp2_mul((c, 0), powers[b], p, t), p)
            poly.append(acc)
        entries.append(tuple(root_multiplicity_fp2(poly, jj, p) for jj in js))
    B = BrandtMatrix(p, ell, tuple(entries))
    check_brandt(B, locus)
    return B


def brandt_p(locus: SsLocus) -> BrandtMatrix:
    """t_p e_i = e_conj(i): the permutation matrix of Frobenius."""
    n = locus.n
    entries = tuple(tuple(int(j == locus.conj[i]) for j in range(n)) for i in range(n))
    B = BrandtMatrix(locus.p, locus.p, entries)
    if matmul(entries, entries) != identity(n):
        raise InternalConsistencyError("B(p) is not an involution")
    return B


def factorize(m: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


class HeckeModule:
    """Per-p cache of the locus and Brandt matrices.

    Matrices are built under a lock and are read-only once published.
    """

    def __init__(self, locus: SsLocus):
        self.locus = locus
        self.p = locus.p
        self._primes: dict[int, BrandtMatrix] = {}
        self._composite: dict[int, BrandtMatrix] = {}
        self._lock = threading.RLock()

    @property
    def n(self) -> int:
        return self.locus.n

    def supports(self, m: int) -> bool:
        return all(q == self.p or supported_prime(q, self.p) for q, _ in factorize(m))

    def brandt(self, ell: int) -> BrandtMatrix:
        B = self._primes.get(ell)
        if B is not None:
            return B
        with self._lock:
            B = self._primes.get(ell)
            if B is None:
                B = brandt_prime(self.locus, ell)
                for other in self._primes.values():
                    if B @ other != other @ B:
                        raise InternalConsistencyError(
                            f"p = {self.p}: B({ell}) and B({other.m}) do not commute")
                self._primes[ell] = B
        return B

    def seed(self, ells=(2, 3)):
        for ell in ells:
            self.brandt(ell)
        self.brandt(self.p)
        return self

    def brandt_primes(self) -> dict[int, BrandtMatrix]:
        return dict(sorted(self._primes.items()))

    def _prime_power(self, ell, r):
        n = self.n
        B1 = self.brandt(ell).entries
        if ell == self.p:
            out = identity(n)
            for _ in range(r):
                out = matmul(out, B1)
            return out
        prev, cur = identity(n), B1
        for _ in range(r - 1):
            prev, cur = cur, matsub(matmul(B1, cur), prev, ell)
        return cur if r else identity(n)

    def hecke(self, m: int) -> BrandtMatrix:
        if m < 1:
            raise InvalidInputError("Hecke index must be positive")
        B = self._composite.get(m)
        if B is not None:
            return B
        fac = factorize(m)
        for q, _ in fac:
            if q != self.p and not supported_prime(q, self.p):
                raise UnsupportedIndexError(f"B({m}) needs Phi_{q}, unavailable at p = {self.p}")
        out = identity(self.n)
        for q, e in fac:
            out = matmul(out, self._prime_power(q, e))
        B = BrandtMatrix(self.p, m, out)
        check_brandt(B, self.locus)
        with self._lock:
            self._composite.setdefault(m, B)
        return B

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "classes": [[c.j.a, c.j.b, c.weight, c.conj] for c in self.locus.classes],
            "brandt": {str(ell): [list(r) for r in B.entries]
                       for ell, B in self.brandt_primes().items() if ell != self.p},
        }

    @classmethod
    def from_json(cls, data: dict) -> HeckeModule:
        """Rebuild from cached data; every invariant is re-checked on load."""
        p = int(data["p"])
        classes = tuple(SsClass(i, Fp2Elem(a, b, p), w, c)
                        for i, (a, b, w, c) in enumerate(data["classes"]))
        locus = SsLocus(p, classes)
        locus.check()
        mod = cls(locus)
        for ell, rows in sorted(data["brandt"].items(), key=lambda kv: int(kv[0])):
            B = BrandtMatrix(p, int(ell), tuple(tuple(r) for r in rows))
            check_brandt(B, locus)
            mod._primes[int(ell)] = B
        mod.brandt(p)
        return mod


_MODULES: dict[int, HeckeModule] = {}
_MODULES_LOCK = threading.Lock()


def hecke_module(p: int) -> HeckeModule:
    mod = _MODULES.get(p)
    if mod is None:
        with _MODULES_LOCK:
            mod = _MODULES.get(p)
            if mod is None:
                mod = HeckeModule(build_locus(p))
                _MODULES[p] = mod
    return mod


def install_module(mod: HeckeModule) -> HeckeModule:
    with _MODULES_LOCK:
        return _MODULES.setdefault(mod.p, mod)


def pairing(u, v, weights) -> Fraction:
    """<u, v> = sum w_i u_i v_i."""
    if not (len(u) == len(v) == len(weights)):
        raise InvalidInputError("pairing of vectors of different lengths")
    return sum((Fraction(w) * Fraction(x) * Fraction(y) for w, x, y in zip(weights, u, v)),
               Fraction(0))


@dataclass(frozen=True)
class Eigenform:
    p: int
    v: tuple[int, ...]
    eigenvalues: dict = field(compare=False)
    label: str = ""
    operators: tuple[int, ...] = ()

    def norm(self, weights) -> int:
        n = pairing(self.v, self.v, weights)
        return int(n)


def _extraction_primes(p):
    yield 2
    yield 3
    yield p
    for ell in primes_up_to(EXTRACTION_PRIME_BOUND):
        if ell > 3 and ell != p:
            yield ell


def extract_eigenform(locus: SsLocus, E: CurveQ, module: HeckeModule | None = None) -> Eigenform:
    """Primitive integer v with B(l)^T v = a_l v, for the curve's a_l."""
    p = locus.p
    if E.p != p:
        raise InvalidInputError(f"curve {E.name} has conductor {E.p}, locus is at {p}")
    module = module or hecke_module(p)
    n = locus.n
    rows = []
    used = {}
    kernel = None
    for ell in _extraction_primes(p):
        if ell != p and not supported_prime(ell, p):
            continue
        a = ap(E, ell)
        M = matsub(module.brandt(ell).T, identity(n), a)
        rows.extend(M)
        used[ell] = a
        kernel = primitive_integer_kernel(rows)
        if not kernel:
            raise EigenformNotFoundError(
                f"curve {E.name}: no common eigenvector for a_l at l in {sorted(used)}")
        if len(kernel) == 1:
            break
    if kernel is None or len(kernel) != 1:
        raise InsufficientOperatorsError(
            f"curve {E.name}: joint eigenspace has dimension {len(kernel or [])} after l in {sorted(used)}")
    v = tuple(kernel[0])
    operators = tuple(sorted(used))
    used.setdefault(p, ap(E, p))
    ef = Eigenform(p, v, dict(sorted(used.items())), E.label, operators)
    verify_eigenform(ef, E, module)
    return ef


def verify_eigenform(ef: Eigenform, E: CurveQ, module: HeckeModule, up_to: int = VERIFY_UP_TO):
    a = an_series(E, up_to)
    for m in range(1, up_to + 1):
        if not module.supports(m):
            continue
        B = module.hecke(m)
        if matvec(B.T, ef.v) != tuple(a[m - 1] * x for x in ef.v):
            raise InternalConsistencyError(f"curve {E.name}: B({m})^T v != a_{m} v")
        if pairing(matvec(B.T, ef.v), ef.v, module.locus.weights) != a[m - 1] * pairing(
                ef.v, ef.v, module.locus.weights):
            raise InternalConsistencyError(f"curve {E.name}: <t_{m} v, v> != a_{m} <v, v>")
    # orthogonal to the Eisenstein vector sum e_i / w_i
    if sum(ef.v) != 0:
        raise InternalConsistencyError(f"curve {E.name}: v is not cuspidal")


def b_divisor(locus: SsLocus, D: int) -> tuple[Fraction, ...]:
    """Optimal-embedding divisor for a class-number-one -D with p inert."""
    seed = cm_seed(D)
    if not is_inert(locus.p, D):
        raise InvalidInputError(f"p = {locus.p} is not inert in Q(sqrt(-{D}))")
    i = cm_seed_class(locus, D)
    out = [Fraction(0)] * locus.n
    out[i] = Fraction(2, seed.u)
    return tuple(out)


@dataclass
class CheckResult:
    name: str
    status: str  # pass, fail, skipped
    detail: str = ""
    index: object = None

    def as_dict(self):
        d = {"check": self.name, "status": self.status}
        if self.detail:
            d["detail"] = self.detail
        if self.index is not None:
            d["index"] = self.index
        return d


def parity_checks(locus: SsLocus, module: HeckeModule, eigenforms=(), ms=None,
                  ells=None) -> list[CheckResult]:
    """Evenness on S_p x S_p, conjugation symmetry, and v(e_j) = a_p v(e_conj j).

    Default operators: every supported prime l <= 20 and every supported m <= 20.
    """
    p = locus.p
    Sp = locus.S_p
    if ells is None:
        ells = [ell for ell in primes_up_to(VERIFY_UP_TO) if supported_prime(ell, p)]
    out = []
    for ell in ells:
        B = module.brandt(ell)
        name = f"even_on_rational_block[l={ell}]"
        if ell == 2 or legendre(-p, ell) != -1:
            out.append(CheckResult(name, "skipped", "needs an odd l with (-p/l) = -1"))
            continue
        odd = [(i, j) for i in Sp for j in Sp if B[i, j] % 2]
        out.append(CheckResult(name, "fail" if odd else "pass", "", list(odd[0]) if odd else None))
    ms = ms if ms is not None else [m for m in range(1, VERIFY_UP_TO + 1) if module.supports(m)]
    conj = locus.conj
    for m in ms:
        B = module.hecke(m)
        bad = [(i, j) for i in range(locus.n) for j in range(locus.n)
               if B[i, j] != B[conj[i], conj[j]]]
        out.append(CheckResult(f"conjugation_symmetry[m={m}]", "fail" if bad else "pass",
                               "", list(bad[0]) if bad else None))
    for ef in eigenforms:
        lam = ef.eigenvalues.get(p)
        bad = [j for j in range(locus.n) if ef.v[j] != lam * ef.v[conj[j]]]
        out.append(CheckResult(f"frobenius_sign[{ef.label}]", "fail" if bad else "pass",
                               f"lambda_p = {lam}", bad[0] if bad else None))
    return out
