"""Command line interface: ss, brandt, eigenform, divisor, check, survey.

Ranks in the input are trusted data; nothing here verifies them.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .arith import roots_in_fp2
from .divisor import (
    analyze, rank_positive_evenness_check, gross_waldspurger_check, mestre_data, theorem_even_check,
)
from .ecq import CurveQ, disc_sign, has_rational_two_torsion
from .errors import InvalidInputError, ParseError, SSZError, ValidationError
from .quat import (
    HeckeModule, extract_eigenform, hecke_module, identity, install_module, matmul, parity_checks,
)
from .ssloc import s_p_formula

SCHEMA = 1
HEADER = ["label", "p", "a1", "a2", "a3", "a4", "a6", "rank"]
SURVEY_COLUMNS = [
    "label", "p", "rank", "eps", "s_p", "N_p", "ratio", "all_even_on_Sp", "disc_sign",
    "two_torsion", "pairing_norm", "torsion", "D_E", "flags",
]

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_CONJECTURE, EXIT_THEOREM = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class CurveRecord:
    label: str
    p: int
    ainvs: tuple[int, int, int, int, int]
    rank: int | None

    def curve(self) -> CurveQ:
        return CurveQ(*self.ainvs, p=self.p, label=self.label, rank=self.rank)


BUILTIN = {"e83": CurveRecord("e83", 83, (1, 1, 1, 1, 0), 1)}


def parse_curves_text(text: str) -> list[CurveRecord]:
    out = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if not header_seen:
            if fields != HEADER:
                raise ParseError(f"expected header {','.join(HEADER)}", lineno)
            header_seen = True
            continue
        if len(fields) != len(HEADER):
            raise ParseError(f"expected {len(HEADER)} fields, got {len(fields)}", lineno)
        try:
            p = int(fields[1])
            ainvs = tuple(int(x) for x in fields[2:7])
            rank = int(fields[7]) if fields[7] else None
        except ValueError as exc:
            raise ParseError(f"non-integer field ({exc})", lineno) from None
        rec = CurveRecord(fields[0], p, ainvs, rank)
        rec.curve()  # conductor check; raises ValidationError naming the curve
        out.append(rec)
    if not header_seen:
        raise ParseError("missing header")
    return out


def parse_curves(path) -> list[CurveRecord]:
    """Read a curve CSV; ``builtin:e83`` names the embedded record."""
    if str(path).startswith("builtin:"):
        name = str(path).split(":", 1)[1]
        if name not in BUILTIN:
            raise ValidationError(f"unknown built-in curve {name!r}")
        return [BUILTIN[name]]
    return parse_curves_text(Path(path).read_text())


# -- per-p cache -------------------------------------------------------------------

_CACHE_LOCK = threading.Lock()


def _cache_path(p):
    root = os.environ.get("SSZ_CACHE_DIR")
    return Path(root) / f"hecke-{p}.json" if root else None


def module_for(p: int) -> HeckeModule:
    path = _cache_path(p)
    if path is not None and path.exists():
        try:
            mod = HeckeModule.from_json(json.loads(path.read_text()))
            return install_module(mod)
        except (ValueError, KeyError, SSZError):
            pass  # stale or corrupt entry: rebuild
    mod = hecke_module(p).seed()
    if path is not None:
        with _CACHE_LOCK:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(mod.to_json(), sort_keys=True))
            tmp.replace(path)
    return mod


# -- per-curve work ------------------------------------------------------------------

def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def factored_form(poly) -> str | None:
    """Product of linear factors when the polynomial splits over F_p."""
    if poly.degree() == 0:
        return str(poly.coeffs[0])
    roots = roots_in_fp2(poly)
    if any(not r.is_rational() for r, _ in roots) or sum(m for _, m in roots) != poly.degree():
        return None
    parts = []
    for r, m in sorted(roots, key=lambda rm: (-rm[0].a) % poly.p):
        fac = "x" if r.a == 0 else f"(x+{(-r.a) % poly.p})"
        parts.append(fac + (f"^{m}" if m > 1 else ""))
    lead = poly.coeffs[-1]
    return ("" if lead == 1 else f"{lead}*") + "*".join(parts)


def curve_report(rec: CurveRecord, what: str) -> dict:
    E = rec.curve()
    mod = module_for(E.p)
    locus = mod.locus
    ef = extract_eigenform(locus, E, mod)
    out = {"label": rec.label, "p": rec.p, "ainvs": list(rec.ainvs), "rank": rec.rank}
    md = mestre_data(E, ef, locus)
    if what in ("eigenform", "check", "survey"):
        out["eigenform"] = {
            "v": list(ef.v),
            "eigenvalues": {str(k): a for k, a in ef.eigenvalues.items()},
            "pairing_norm": md.norm,
            "torsion": md.torsion,
            "torsion_certified": md.torsion_certified,
            "D_E": _frac(md.degree),
        }
    if what == "eigenform":
        return out
    A = analyze(E, locus, ef, strict=False)
    F = A.divisor_poly.poly
    out["divisor"] = {
        "weight": A.divisor_poly.weight,
        "coefficients": list(F.coeffs),
        "factored": factored_form(F),
        "eps": A.eps,
        "ss_zero_indices": list(A.ss_zero_indices),
        "v_zero_indices": list(A.v_zero_indices),
        "N_p": A.N_p,
        "s_p": A.s_p,
        "ratio": _frac(A.ratio),
        "nonrational_zeros": A.nonrational_zeros,
    }
    checks = []

    def proved(name, status, detail=""):
        checks.append({"check": name, "kind": "theorem", "status": status, "detail": detail})

    if A.eps == -1:
        vanish = len(set(A.S_p) & set(A.ss_zero_indices))
        proved("rational_supersingular_vanishing", "pass" if A.rational_classes_vanish else "fail",
               f"{vanish}/{A.s_p} rational classes vanish")
    else:
        proved("rational_supersingular_vanishing", "not-applicable", "root number +1")
    proved("zero_set_equivalence", "pass" if A.zero_sets_agree else "fail",
           f"divisor zeros {list(A.ss_zero_indices)}, eigenform zeros {list(A.v_zero_indices)}")
    if md.integral:
        # v_E is shared across the isogeny class while t is per curve, so D_E is the
        # modular degree only for the optimal curve; integrality is what is checked
        proved("mestre_integrality", "pass", f"D_E = <v,v>/t = {_frac(md.degree)}")
    elif md.torsion_certified:
        proved("mestre_integrality", "fail", f"D_E = {_frac(md.degree)}")
    else:
        proved("mestre_integrality", "inconclusive", "torsion order is heuristic")
    ev = theorem_even_check(E, ef, locus)
    proved("positive_discriminant_evenness", ev.status, ev.note)
    for c in parity_checks(locus, mod, [ef]):
        proved(c.name, c.status, c.detail)
    for g in gross_waldspurger_check(E, ef, locus, rank=rec.rank):
        proved(f"central_value_pairing[D={g['D']}]", g["status"], f"m_D = {g['m_D']}")
    conj = rank_positive_evenness_check(A, ef, rec.rank)
    checks.append({"check": "rank_positive_evenness", "kind": "conjecture",
                   "status": conj.status, "detail": conj.note})
    if what == "check":
        out["checks"] = checks
    out["_survey"] = {
        "eps": A.eps, "s_p": A.s_p, "N_p": A.N_p, "ratio": _frac(A.ratio),
        "all_even_on_Sp": A.parity_on_Sp, "disc_sign": disc_sign(E),
        "two_torsion": has_rational_two_torsion(E), "pairing_norm": md.norm,
        "torsion": md.torsion, "D_E": _frac(md.degree),
        "flags": ";".join(f for f in (
            "" if md.torsion_certified else "torsion-heuristic",
            "" if md.integral else "D_E-nonintegral",
            "" if A.zero_sets_agree else "zero-set-mismatch",
        ) if f),
        "checks": checks,
    }
    return out


def _work(args):
    rec, what = args
    return curve_report(rec, what)


def run_curves(records, what, workers=1):
    records = sorted(records, key=lambda r: (r.p, r.label))
    jobs = [(r, what) for r in records]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_work, jobs))
    return [_work(j) for j in jobs]


# -- subcommands ---------------------------------------------------------------------

def _emit(obj, stream):
    stream.write(json.dumps(obj, indent=2, sort_keys=True))
    stream.write("\n")


def cmd_ss(args, out):
    mod = module_for(args.p)
    L = mod.locus
    mass = L.mass()
    _emit({
        "schema": SCHEMA,
        "p": L.p,
        "n": L.n,
        "classes": [{"index": c.index, "j": str(c.j), "weight": c.weight, "conj": c.conj,
                     "rational": c.rational} for c in L.classes],
        "S_p": list(L.S_p),
        "mass": _frac(mass),
        "mass_ok": mass == Fraction(L.p - 1, 12),
        "s_p_count": len(L.S_p),
        "s_p_formula": s_p_formula(L.p),
    }, out)
    return EXIT_OK


def cmd_brandt(args, out):
    mod = module_for(args.p)
    L = mod.locus
    ells = [int(x) for x in args.ell.split(",") if x.strip()]
    mats = {str(ell): [list(r) for r in mod.brandt(ell).entries] for ell in ells}
    Bp = mod.brandt(L.p)
    report = {
        "row_sums": "pass", "weight_symmetry": "pass", "conjugation_symmetry": "pass",
        "commutation": "pass",
        "frobenius_permutation": "pass" if matmul(Bp.entries, Bp.entries) == identity(L.n) else "fail",
    }
    doc = {"schema": SCHEMA, "p": L.p, "weights": list(L.weights), "matrices": mats,
           "invariants": report,
           "parity": [c.as_dict() for c in parity_checks(L, mod, ms=[], ells=ells)]}
    if args.m:
        doc["hecke"] = {str(args.m): [list(r) for r in mod.hecke(args.m).entries]}
    _emit(doc, out)
    return EXIT_OK


def _strip(rep):
    rep = dict(rep)
    rep.pop("_survey", None)
    return rep


def cmd_curves(args, out, what):
    reports = run_curves(load_records(args), what, args.workers)
    _emit({"schema": SCHEMA, "curves": [_strip(r) for r in reports]}, out)
    return EXIT_OK


def cmd_check(args, out):
    reports = run_curves(load_records(args), "check", args.workers)
    theorem_fail = [(r["label"], c["check"]) for r in reports for c in r["checks"]
                    if c["kind"] == "theorem" and c["status"] == "fail"]
    counter = [r["label"] for r in reports for c in r["checks"]
               if c["kind"] == "conjecture" and c["status"] == "counterexample"]
    _emit({"schema": SCHEMA, "curves": [_strip(r) for r in reports],
           "summary": {"theorem_failures": [list(t) for t in theorem_fail],
                       "conjecture_counterexamples": counter}}, out)
    if theorem_fail:
        return EXIT_THEOREM
    if counter:
        print(f"CONJECTURE COUNTEREXAMPLE: {', '.join(counter)}", file=sys.stderr)
        return EXIT_CONJECTURE
    return EXIT_OK


def survey_rows(reports):
    rows = []
    for r in reports:
        s = r["_survey"]
        rows.append({"label": r["label"], "p": r["p"],
                     "rank": "" if r["rank"] is None else r["rank"],
                     **{k: s[k] for k in SURVEY_COLUMNS if k in s}})
    return rows


def write_survey(rows, stream):
    w = csv.DictWriter(stream, fieldnames=SURVEY_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in row.items()})


def cmd_survey(args, out):
    reports = run_curves(load_records(args), "survey", args.workers)
    buf = io.StringIO()
    write_survey(survey_rows(reports), buf)
    if args.out and args.out != "-":
        Path(args.out).write_text(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def load_records(args):
    return parse_curves(args.curves)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ssz",
        description="Supersingular zeros of divisor polynomials of prime-conductor elliptic "
                    "curves, checked against quaternionic eigenforms.",
        epilog="Ranks in curve files are trusted input and are never verified. "
               "Set SSZ_CACHE_DIR to persist per-p Brandt data as JSON.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("ss", help="supersingular locus mod p")
    s.add_argument("p", type=int)
    b = sub.add_parser("brandt", help="Brandt matrices and their invariants")
    b.add_argument("p", type=int)
    b.add_argument("--ell", default="2,3")
    b.add_argument("--m", type=int, default=None)
    for name, hlp in (("eigenform", "quaternionic eigenform per curve"),
                      ("divisor", "divisor polynomial and zero sets per curve"),
                      ("check", "full verification battery per curve"),
                      ("survey", "one CSV row per curve, ordered by (p, label)")):
        c = sub.add_parser(name, help=hlp)
        c.add_argument("--curves", default="builtin:e83",
                       help="CSV with header label,p,a1,a2,a3,a4,a6,rank (default: builtin:e83)")
        c.add_argument("--workers", type=int, default=1)
        if name == "survey":
            c.add_argument("--out", default="-")
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "workers", 1) < 1:
        print("ssz: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    handlers = {
        "ss": cmd_ss, "brandt": cmd_brandt, "check": cmd_check, "survey": cmd_survey,
        "eigenform": lambda a, o: cmd_curves(a, o, "eigenform"),
        "divisor": lambda a, o: cmd_curves(a, o, "divisor"),
    }
    try:
        return handlers[args.cmd](args, out)
    except (ParseError, ValidationError, InvalidInputError, OSError) as exc:
        print(f"ssz: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SSZError as exc:
        print(f"ssz: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
