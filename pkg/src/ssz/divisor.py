"""Per-curve pipeline: divisor polynomial of f_E mod p against the eigenform v_E."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ecq import CurveQ, disc_sign, has_rational_two_torsion, newform_series, root_number, torsion_order
from .errors import InternalConsistencyError, InvalidInputError
from .qseries import DivisorPoly, default_precision, divisor_polynomial
from .quat import Eigenform, b_divisor, pairing
from .ssloc import CM_SEEDS, SsLocus, is_inert

# extra coefficients beyond the minimum, each one an independent consistency equation
EXTRA_PRECISION = 10


@dataclass(frozen=True)
class CurveAnalysis:
    label: str
    p: int
    eps: int
    divisor_poly: DivisorPoly
    ss_zero_indices: tuple[int, ...]
    v_zero_indices: tuple[int, ...]
    S_p: tuple[int, ...]
    parity_on_Sp: bool

    @property
    def N_p(self) -> int:
        return len(set(self.ss_zero_indices) & set(self.S_p))

    @property
    def s_p(self) -> int:
        return len(self.S_p)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.N_p, self.s_p)

    @property
    def nonrational_zeros(self) -> int:
        return len(set(self.ss_zero_indices) - set(self.S_p))

    @property
    def zero_sets_agree(self) -> bool:
        return self.ss_zero_indices == self.v_zero_indices

    @property
    def rational_classes_vanish(self) -> bool:
        return set(self.S_p) <= set(self.ss_zero_indices)

    def verify(self):
        if not self.zero_sets_agree:
            raise InternalConsistencyError(
                f"{self.label}: divisor zeros {self.ss_zero_indices} != eigenform zeros {self.v_zero_indices}")
        if self.eps == -1 and not self.rational_classes_vanish:
            raise InternalConsistencyError(f"{self.label}: root number -1 but a rational class survives")
        if self.N_p > self.s_p:
            raise InternalConsistencyError(f"{self.label}: N_p > s_p")


def curve_divisor_poly(E: CurveQ) -> DivisorPoly:
    k = E.p + 1
    return divisor_polynomial(newform_series(E, default_precision(k) + EXTRA_PRECISION))


def analyze(E: CurveQ, locus: SsLocus, eigenform: Eigenform, strict: bool = True) -> CurveAnalysis:
    p = locus.p
    if E.p != p or eigenform.p != p:
        raise InvalidInputError(f"curve {E.name}: conductor does not match the locus at p = {p}")
    dp = curve_divisor_poly(E)
    F = dp.poly
    ss_zero = tuple(c.index for c in locus.classes if F(c.j) == 0)
    v_zero = tuple(i for i, x in enumerate(eigenform.v) if x % p == 0)
    parity = all(eigenform.v[i] % 2 == 0 for i in locus.S_p)
    a = CurveAnalysis(E.label or E.name, p, root_number(E), dp, ss_zero, v_zero, locus.S_p, parity)
    if strict:
        a.verify()
    return a


@dataclass(frozen=True)
class Verdict:
    status: str
    note: str = ""
    index: int | None = None

    def as_dict(self):
        d = {"status": self.status}
        if self.note:
            d["note"] = self.note
        if self.index is not None:
            d["index"] = self.index
        return d


def rank_positive_evenness_check(analysis: CurveAnalysis, eigenform: Eigenform, rank: int | None) -> Verdict:
    """Root number +1 and positive rank: v even on every F_p-rational class?"""
    if analysis.eps != 1:
        return Verdict("not-applicable", "root number -1")
    if rank is None:
        return Verdict("not-applicable", "rank unknown")
    if rank == 0:
        return Verdict("not-applicable", "rank 0")
    for i in analysis.S_p:
        if eigenform.v[i] % 2:
            return Verdict("counterexample", f"v is odd at class {i}", i)
    return Verdict("confirmed-even")


def theorem_even_check(E: CurveQ, eigenform: Eigenform, locus: SsLocus) -> Verdict:
    """Positive discriminant and no rational 2-torsion force v even on S_p."""
    if disc_sign(E) < 0:
        return Verdict("not-applicable", "negative discriminant")
    if has_rational_two_torsion(E):
        return Verdict("not-applicable", "rational 2-torsion")
    for i in locus.S_p:
        if eigenform.v[i] % 2:
            return Verdict("fail", f"v is odd at class {i}", i)
    return Verdict("pass")


def gross_waldspurger_check(E: CurveQ, eigenform: Eigenform, locus: SsLocus, Ds=None,
                            rank: int | None = None) -> list[dict]:
    """m_D = <v, b_D> for class-number-one -D inert at p; zero when L(E, 1) = 0."""
    Ds = sorted(CM_SEEDS) if Ds is None else Ds
    rank = E.rank if rank is None else rank
    must_vanish = root_number(E) == 1 and rank is not None and rank > 0
    out = []
    for D in Ds:
        if not is_inert(locus.p, D):
            continue
        mD = pairing(eigenform.v, b_divisor(locus, D), locus.weights)
        entry = {"D": D, "m_D": str(mD), "asserted": must_vanish}
        if must_vanish:
            entry["status"] = "pass" if mD == 0 else "fail"
        else:
            entry["status"] = "recorded"
        out.append(entry)
    return out


@dataclass(frozen=True)
class MestreData:
    norm: int
    torsion: int
    torsion_certified: bool
    degree: Fraction

    @property
    def integral(self) -> bool:
        return self.degree.denominator == 1 and self.degree > 0


def mestre_data(E: CurveQ, eigenform: Eigenform, locus: SsLocus) -> MestreData:
    """<v, v> = t * D_E with t the torsion order; D_E is emitted, not recomputed."""
    norm = pairing(eigenform.v, eigenform.v, locus.weights)
    tor = torsion_order(E)
    return MestreData(int(norm), tor.order, tor.certified, Fraction(norm) / tor.order)
