"""Deciding whether the F-pure threshold of f attains its minimum 1/ord(f).

With d = ord(f) = q*s (q a power of p, s prime to p), the threshold is 1/d
exactly when f is, up to a unit, g^s for some g in m^[q]. Only constant units
are searched here, so a negative answer is certified only when the nu lower
bound already rules out 1/d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import LocalOrder, NoRoot, Polynomial, initial_term, ord_m, sth_root
from .errors import PreconditionViolated, ResourceLimit
from .frobenius import MonomialIdeal, ThresholdBracket, fmt_rational, ft_bracket, monomial_member

DEFAULT_E_MAX = 10


@dataclass(frozen=True)
class Verdict:
    d: int
    q: int
    s: int
    minimal: bool
    certainty: str
    witness: tuple | None
    bracket: ThresholdBracket

    @property
    def ft(self) -> Fraction | None:
        return Fraction(1, self.d) if self.minimal else None

    def to_json(self) -> dict:
        out = {"d": self.d, "q": self.q, "s": self.s, "minimal": self.minimal,
               "certainty": self.certainty}
        if self.minimal:
            out["ft"] = fmt_rational(self.ft)
        if self.witness is not None:
            c, g = self.witness
            out["witness"] = {"c": str(c), "g": str(g)}
        out["bracket"] = self.bracket.to_json()
        out["e"] = self.bracket.e
        return out


def factor_d(d: int, p: int) -> tuple:
    if d < 1:
        raise PreconditionViolated("d must be positive")
    q = 1
    while d % p == 0:
        d //= p
        q *= p
    return q, d


def in_bracket_m(f: Polynomial, q: int) -> bool:
    return monomial_member(f, MonomialIdeal.maximal(f.vars).bracket(q))


def _bracket_with_fallback(f: Polynomial, e_max: int) -> ThresholdBracket:
    m = MonomialIdeal.maximal(f.vars)
    e = e_max
    while True:
        try:
            return ft_bracket(f, m, e)
        except ResourceLimit:
            if e == 0:
                raise
            e -= 1


def classify_minimal(f: Polynomial, e_max: int = DEFAULT_E_MAX) -> Verdict:
    if f.is_zero():
        raise PreconditionViolated("f must be nonzero")
    d = ord_m(f)
    if d == 0:
        raise PreconditionViolated("f is a unit")
    p = f.p
    q, s = factor_d(d, p)
    gamma = next(iter(initial_term(f, LocalOrder(f.vars)).terms.values()))
    monic = f.scale(pow(gamma, -1, p))
    witness = None
    try:
        root = sth_root(monic, s, f.degree() // s + 8)
    except NoRoot:
        root = None
    if root is not None and root.exact:
        g = root.g.scale(root.c)
        if g**s == monic and in_bracket_m(g, q):
            witness = (gamma, g)
    bracket = _bracket_with_fallback(f, e_max)
    if witness is not None:
        if not bracket.contains(Fraction(1, d)):  # pragma: no cover - would contradict the degree-q case
            raise AssertionError(f"bracket {bracket.to_json()} excludes 1/{d} despite a witness")
        return Verdict(d, q, s, True, "certified", witness, bracket)
    certainty = "certified" if bracket.lo > Fraction(1, d) else "uncertified"
    return Verdict(d, q, s, False, certainty, None, bracket)
