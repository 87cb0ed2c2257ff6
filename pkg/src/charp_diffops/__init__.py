"""Exact derivations and differential operators on affine varieties over F_p."""

from .der import (Derivation, LocDerivation, apply_derivation, build_det_derivation, check_descends,
                  det_derivation, membership_der, rewrite_P3, verify_derel)
from .dop import (Chart, ExponentSchedule, LocalOp, build_dk, coeff_a, coeff_b_c, compute_schedule, in_DA,
                  local_op_mul, op_equal, verify_R, verify_R5, verify_rel_rpC)
from .field import FieldElement, PrimeField, binomial_mod_p
from .fixtures import FIXTURES, Variety, VarietySpec, fixture
from .hs import (HSFamily, TruncSeries, check_commute, check_iterative, check_jacobian_invariance,
                 check_nilpotent, extdix_eval, hom_validate, hs_lift)
from .poly import Ambient, PolyMatrix, Polynomial, divided_partial, jacobian, parse_poly, print_poly
from .ring import (Ideal, JacobianData, LocElem, LocRing, QuotElem, critical_set, groebner, ideal_member,
                   jacobian_rank, loc_equal, nonsingular_tuples, normal_form, regular_check)
from .weyl import WeylOp, parse_weyl, print_weyl, weyl_apply, weyl_dual, weyl_mul

__version__ = "0.1.0"

__all__ = [
    "Derivation", "LocDerivation", "apply_derivation", "build_det_derivation", "check_descends",
    "det_derivation", "membership_der", "rewrite_P3", "verify_derel", "Chart", "ExponentSchedule",
    "LocalOp", "build_dk", "coeff_a", "coeff_b_c", "compute_schedule", "in_DA", "local_op_mul",
    "op_equal", "verify_R", "verify_R5", "verify_rel_rpC", "FieldElement", "PrimeField",
    "binomial_mod_p", "FIXTURES", "Variety", "VarietySpec", "fixture", "HSFamily", "TruncSeries",
    "check_commute", "check_iterative", "check_jacobian_invariance", "check_nilpotent",
    "extdix_eval", "hom_validate", "hs_lift", "Ambient", "PolyMatrix", "Polynomial",
    "divided_partial", "jacobian", "parse_poly", "print_poly", "Ideal", "JacobianData", "LocElem",
    "LocRing", "QuotElem", "critical_set", "groebner", "ideal_member", "jacobian_rank", "loc_equal",
    "nonsingular_tuples", "normal_form", "regular_check", "WeylOp", "parse_weyl", "print_weyl",
    "weyl_apply", "weyl_dual", "weyl_mul",
]
