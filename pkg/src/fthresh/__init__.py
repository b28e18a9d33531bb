"""Exact Frobenius-power invariants over prime fields: nu-functions, certified
F-threshold brackets, critical points of h-tuples, and the minimal-threshold
classification."""

from .algebra import (FieldElement, LocalOrder, Polynomial, Root, initial_term, ord_m, parse_poly,
                      parse_poly_list, restrict, sth_root, weierstrass_prepare)
from .classify import Verdict, classify_minimal, factor_d, in_bracket_m
from .errors import (BadS, FthreshError, NoRoot, NotInUpper, NotYRegular, OrdOfZero, ParseError,
                     PreconditionViolated, ResourceLimit)
from .frobenius import (MonomialIdeal, ThresholdBracket, bracket_power, ft_bracket, ft_lower_sequence,
                        member_power, monomial_member, nu_ideal, nu_principal, nu_sequence, reduce_mod)
from .kernels import BACKEND
from .regions import (Exact, HTuple, LambdaBranch, LatticePoint, Undecided, canonicalize,
                      critical_point_below, enumerate_critical, ft_via_critical_point, in_upper_region,
                      is_critical)

__version__ = "0.1.0"
