"""Supersingular zeros of divisor polynomials of prime-conductor elliptic curves."""

from .arith import Fp2Elem, FieldElem, PolyFp, legendre, roots_in_fp2
from .divisor import CurveAnalysis, analyze
from .ecq import CurveQ, an_series, ap, root_number
from .qseries import QSeries, delta, divisor_polynomial, eisenstein, supersingular_poly
from .quat import BrandtMatrix, Eigenform, extract_eigenform, hecke_module
from .ssloc import SsLocus, build_locus, class_number, s_p_formula

__version__ = "0.1.0"
