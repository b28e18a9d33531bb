"""Frobenius bracket powers, monomial-ideal membership and nu-functions.

The nu-function of a principal f at level q = p^e is found by sweeping
e = 0, 1, ...: Frobenius flatness pins nu(pq) to [p*nu(q), p*nu(q) + p - 1],
so each level costs one residue of f^(p*nu(q)) plus at most p - 1 extra
multiplications. Residues modulo the bracket ideal are kept sparse until they
fill enough of the staircase to make the dense kernel cheaper.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from . import kernels
from .algebra import Polynomial, check_prime, parse_poly
from .errors import PreconditionViolated, ResourceLimit

DEFAULT_MAX_TERMS = 2**26
DEFAULT_COMPOSITION_CAP = 10**7


def max_terms() -> int:
    return int(os.environ.get("FTHRESH_MAX_TERMS", DEFAULT_MAX_TERMS))


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def is_power_of(q: int, p: int) -> bool:
    if q < 1:
        return False
    while q % p == 0:
        q //= p
    return q == 1


def log_p(q: int, p: int) -> int:
    if not is_power_of(q, p):
        raise PreconditionViolated(f"q={q} is not a power of p={p}")
    e = 0
    while q > 1:
        q //= p
        e += 1
    return e


def _divides(g, e) -> bool:
    return all(a <= b for a, b in zip(g, e))


def _minimalize(gens) -> tuple:
    gens = sorted(set(tuple(g) for g in gens), key=lambda g: (sum(g), g))
    kept = []
    for g in gens:
        if not any(_divides(h, g) for h in kept):
            kept.append(g)
    return tuple(sorted(kept))


@dataclass(frozen=True)
class MonomialIdeal:
    """Ideal generated by monomials, stored as a minimal set of exponent vectors."""

    vars: tuple
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        gens = _minimalize(self.generators)
        for g in gens:
            if len(g) != len(self.vars):
                raise PreconditionViolated("generator length does not match variables")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_polys(cls, polys: Sequence[Polynomial]) -> MonomialIdeal:
        if not polys:
            raise PreconditionViolated("empty generator list")
        vars = polys[0].vars
        gens = []
        for g in polys:
            if g.vars != vars:
                raise PreconditionViolated("generators live in different rings")
            if not g.is_monomial():
                raise PreconditionViolated(f"{g} is not a monomial")
            gens.append(next(iter(g.terms)))
        return cls(vars, tuple(gens))

    @classmethod
    def parse(cls, text: str, p: int, vars) -> MonomialIdeal:
        return cls.from_polys([parse_poly(part, p, vars) for part in text.split(",")])

    @classmethod
    def maximal(cls, vars) -> MonomialIdeal:
        n = len(vars)
        return cls(vars, tuple(tuple(int(i == k) for i in range(n)) for k in range(n)))

    def is_proper(self) -> bool:
        return all(any(g) for g in self.generators)

    def contains_exps(self, e) -> bool:
        return any(_divides(g, e) for g in self.generators)

    def radical_contains_exps(self, e) -> bool:
        return any(all(b > 0 for a, b in zip(g, e) if a > 0) for g in self.generators)

    def bracket(self, q: int) -> MonomialIdeal:
        return MonomialIdeal(self.vars, tuple(tuple(q * a for a in g) for g in self.generators))

    def power(self, d: int) -> MonomialIdeal:
        if d == 0:
            return MonomialIdeal(self.vars, ((0,) * len(self.vars),))
        prods = []
        for combo in combinations_with_replacement(self.generators, d):
            prods.append(tuple(map(sum, zip(*combo))))
        return MonomialIdeal(self.vars, tuple(prods))

    def staircase(self):
        """Row widths of the complement for a two-variable ideal containing pure
        powers of both variables; ``None`` otherwise."""
        if len(self.vars) != 2:
            return None
        ymax = [g[1] for g in self.generators if g[0] == 0]
        xmax = [g[0] for g in self.generators if g[1] == 0]
        if not ymax or not xmax:
            return None
        widths = []
        for j in range(min(ymax)):
            widths.append(min(g[0] for g in self.generators if g[1] <= j))
        return widths

    def to_polys(self, p: int) -> list:
        return [Polynomial(p, self.vars, {g: 1}) for g in self.generators]

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.to_polys(2)) + ")"


def _as_ideal(I, p=None) -> MonomialIdeal:
    if isinstance(I, MonomialIdeal):
        return I
    return MonomialIdeal.from_polys(list(I))


# -- bracket powers and membership ---------------------------------------------


def bracket_power(I, q: int, p: int | None = None):
    """Raise every generator to the q-th power.

    Polynomial generators use additivity of Frobenius termwise.
    """
    if isinstance(I, MonomialIdeal):
        if p is None:
            raise PreconditionViolated("p is required for a MonomialIdeal")
        log_p(q, p)
        return I.bracket(q)
    gens = list(I)
    if not gens:
        return []
    p = gens[0].p if p is None else p
    e = log_p(q, p)
    return [g.frobenius(e) for g in gens]


def monomial_member(f: Polynomial, I) -> bool:
    I = _as_ideal(I)
    return all(I.contains_exps(e) for e in f.terms)


def reduce_mod(f: Polynomial, I) -> Polynomial:
    """Delete every term of f lying in the monomial ideal I."""
    I = _as_ideal(I)
    return Polynomial._raw(f.p, f.vars, {e: c for e, c in f.terms.items() if not I.contains_exps(e)})


def member_power(f: Polynomial, gens, d: int) -> bool:
    """Is f in the ordinary d-th power of the ideal generated by monomials ``gens``?"""
    if d == 0:
        return True
    return monomial_member(f, _as_ideal(gens).power(d))


# -- residues --------------------------------------------------------------------


class Residue:
    """An element of R/I for a monomial ideal I, updated by in-place multiplication."""

    __slots__ = ("p", "ideal", "vars", "terms", "box", "backend", "_widths", "_area")

    def __init__(self, p: int, ideal: MonomialIdeal, backend: str | None = None):
        self.p = p
        self.ideal = ideal
        self.vars = ideal.vars
        self.backend = backend
        self._widths = ideal.staircase()
        self._area = sum(self._widths) if self._widths is not None else None
        self.terms = {}
        self.box = None

    @classmethod
    def one(cls, p, ideal, backend=None) -> Residue:
        r = cls(p, ideal, backend)
        zero = (0,) * len(ideal.vars)
        if not ideal.contains_exps(zero):
            r.terms = {zero: 1}
        return r

    def copy(self) -> Residue:
        other = Residue.__new__(Residue)
        for name in Residue.__slots__:
            setattr(other, name, getattr(self, name))
        other.terms = dict(self.terms) if self.terms is not None else None
        other.box = self.box.copy() if self.box is not None else None
        return other

    def is_zero(self) -> bool:
        if self.box is not None:
            return self.box.is_zero()
        return not self.terms

    def nnz(self) -> int:
        if self.box is not None:
            return self.box.nnz()
        return len(self.terms)

    def to_poly(self) -> Polynomial:
        if self.box is not None:
            return Polynomial._raw(self.p, self.vars, dict(self.box.to_terms()))
        return Polynomial._raw(self.p, self.vars, dict(self.terms))

    def _inside(self):
        widths = self._widths
        if widths is not None:
            nrows = len(widths)
            return lambda e: e[1] >= nrows or e[0] >= widths[e[1]]
        return self.ideal.contains_exps

    def _should_promote(self) -> bool:
        if self._widths is None or self.box is not None:
            return False
        n = len(self.terms)
        if n < 256:
            return False
        nrows = len(self._widths)
        if self.p == 2:
            return self._area <= 2**31 and n >= nrows // 2 + self._area // 4096
        return self._area <= 2**27 and n >= nrows + self._area // 512

    def _promote(self):
        box = kernels.make_box(self.p, self._widths, self.backend)
        box.set_terms(self.terms.items())
        self.box = box
        self.terms = None

    def mul(self, g) -> Residue:
        """Multiply by a polynomial (or a ``{exps: coeff}`` map) and reduce."""
        gterms = g.terms if isinstance(g, Polynomial) else g
        if self.box is not None:
            self.box.mul_terms(list(gterms.items()))
            return self
        inside = self._inside()
        factor = [(e, c) for e, c in gterms.items() if not inside(e)]
        p = self.p
        out: dict = {}
        get = out.get
        for ea, ca in self.terms.items():
            for eb, cb in factor:
                key = tuple(x + y for x, y in zip(ea, eb))
                if inside(key):
                    continue
                out[key] = (get(key, 0) + ca * cb) % p
        self.terms = {e: c for e, c in out.items() if c}
        if len(self.terms) > max_terms():
            raise ResourceLimit(
                f"residue has {len(self.terms)} terms, above FTHRESH_MAX_TERMS={max_terms()}"
            )
        if self._should_promote():
            self._promote()
        return self

    def mul_power(self, g: Polynomial, t: int) -> Residue:
        """Multiply by g^t through the base-p digits of t: g^t = prod (g^(p^i))^(t_i)."""
        p = self.p
        base = g
        while t and not self.is_zero():
            t, digit = divmod(t, p)
            for _ in range(digit):
                self.mul(base)
            if t:
                base = base.frobenius(1)
        return self


# -- nu-functions ------------------------------------------------------------------


def _check_nu_inputs(f: Polynomial, b: MonomialIdeal):
    if f.is_zero():
        raise PreconditionViolated("f must be nonzero")
    if f.vars != b.vars:
        raise PreconditionViolated("f and b live in different rings")
    if not b.is_proper():
        raise PreconditionViolated("b must be a proper ideal")
    if not all(b.radical_contains_exps(e) for e in f.terms):
        raise PreconditionViolated("f is not in the radical of b; nu would be infinite")


def nu_sequence(f: Polynomial, b, e_max: int, backend: str | None = None) -> list:
    """``[nu(p^0), nu(p^1), ..., nu(p^e_max)]`` for the principal ideal (f)."""
    b = _as_ideal(b)
    _check_nu_inputs(f, b)
    p = f.p
    # e = 0: plain powers of f until they land in b
    r = Residue.one(p, b, backend)
    t = 0
    limit = _nu0_bound(f, b)
    while True:
        r.mul(f)
        if r.is_zero():
            break
        t += 1
        if t > limit:
            raise PreconditionViolated("f is not in the radical of b")
    nus = [t]
    q = 1
    for _ in range(e_max):
        q *= p
        ideal = b.bracket(q)
        base = p * nus[-1]
        r = Residue.one(p, ideal, backend).mul_power(f, base)
        if r.is_zero():  # pragma: no cover - would contradict flatness of Frobenius
            raise AssertionError("Frobenius lower bound violated")
        t = base
        for _ in range(p - 1):
            r.mul(f)
            if r.is_zero():
                break
            t += 1
        nus.append(t)
    return nus


def _nu0_bound(f: Polynomial, b: MonomialIdeal) -> int:
    # every term of f is divisible by the support of some generator, so
    # f^N lies in b once N exceeds (#terms) * (largest generator exponent) * nvars
    return len(f.terms) * max(max(g) for g in b.generators) * len(b.vars) + 1


def nu_principal(f: Polynomial, b, e: int, backend: str | None = None) -> int:
    """Greatest t with f^t not in b^[p^e]."""
    return nu_sequence(f, b, e, backend)[-1]


def nu_by_expansion(f: Polynomial, b, e: int) -> int:
    """Reference nu: expand f^t in full and test membership, t = 0, 1, ..."""
    b = _as_ideal(b)
    _check_nu_inputs(f, b)
    ideal = b.bracket(f.p**e)
    power = f.one()
    t = 0
    while True:
        power = power * f
        if monomial_member(power, ideal):
            return t
        t += 1


def nu_ideal(gens: Sequence[Polynomial], b, e: int, cap: int = DEFAULT_COMPOSITION_CAP,
             backend: str | None = None) -> int:
    """Greatest t such that some product of t generators avoids b^[p^e].

    Compositions are explored level by level; a composition whose product is
    already in the bracket ideal is never extended.
    """
    b = _as_ideal(b)
    gens = list(gens)
    if not gens:
        raise PreconditionViolated("empty generator list")
    for g in gens:
        _check_nu_inputs(g, b)
    p = gens[0].p
    ideal = b.bracket(p**e)
    r = len(gens)
    zero = (0,) * r
    level = {zero: Residue.one(p, ideal, backend)}
    explored = 1
    t = 0
    while True:
        nxt = {}
        for alpha, res in level.items():
            for i, g in enumerate(gens):
                beta = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
                if beta in nxt:
                    continue
                explored += 1
                if explored > cap:
                    raise ResourceLimit(f"explored more than {cap} compositions")
                child = res.copy().mul(g)
                if not child.is_zero():
                    nxt[beta] = child
        if not nxt:
            return t
        level = nxt
        t += 1


# -- threshold brackets ----------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdBracket:
    """Certified interval (lo, hi] for an F-threshold, lo = nu/q, hi = (nu + 1)/q."""

    lo: Fraction
    hi: Fraction
    e: int
    p: int
    nu: int
    certified: bool = True
    history: tuple = field(default=(), compare=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo < x <= self.hi

    def intersects(self, lo, hi) -> bool:
        """Does (self.lo, self.hi] meet the closed interval [lo, hi]?"""
        return self.lo < Fraction(hi) and Fraction(lo) <= self.hi

    def to_json(self) -> list:
        return [fmt_rational(self.lo), fmt_rational(self.hi)]


def ft_bracket(f: Polynomial, b, e_max: int, backend: str | None = None) -> ThresholdBracket:
    b = _as_ideal(b)
    nus = nu_sequence(f, b, e_max, backend)
    q = f.p**e_max
    nu = nus[-1]
    return ThresholdBracket(Fraction(nu, q), Fraction(nu + 1, q), e_max, f.p, nu, True, tuple(nus))


@dataclass(frozen=True)
class LowerSequence:
    """nu(p^e)/p^e for e = 1..e_max (each strictly below ft) and an uncertified
    geometric extrapolation of the limit."""

    values: tuple
    nus: tuple
    extrapolation: Fraction
    certified: bool = False


def ft_lower_sequence(gens: Sequence[Polynomial], b, e_max: int,
                      cap: int = DEFAULT_COMPOSITION_CAP, backend: str | None = None) -> LowerSequence:
    gens = list(gens)
    p = gens[0].p
    if len(gens) == 1:
        nus = nu_sequence(gens[0], b, e_max, backend)
    else:
        nus = [nu_ideal(gens, b, e, cap, backend) for e in range(e_max + 1)]
    ratios = [Fraction(nu, p**e) for e, nu in enumerate(nus)]
    # errors of nu(q)/q shrink roughly by a factor p per level
    if len(ratios) >= 2:
        extrapolation = ratios[-1] + (ratios[-1] - ratios[-2]) / (p - 1)
    else:
        extrapolation = ratios[-1]
    return LowerSequence(tuple(ratios[1:]), tuple(nus[1:]), extrapolation)
