"""Upper and lower regions of an h-tuple, critical points, and the
critical-point route to F-thresholds.

For h_i = y - g_i with g_i in x^ell k[x] and b = (y, x^ell), a point a/q lies
in the upper region U when h_1^a_1 ... h_r^a_r is in b^[q] = (y^q, x^(ell q)),
and in the lower region L otherwise.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import Polynomial, check_prime, parse_poly
from .errors import NotInUpper, ParseError, PreconditionViolated, ResourceLimit
from .frobenius import MonomialIdeal, Residue, ThresholdBracket, ft_bracket, is_power_of, log_p, nu_sequence

ENUM_MAX_R = 4
ENUM_MAX_Q = 64
SCAN_MAX_PREFIXES = 20000


@dataclass(frozen=True)
class HTuple:
    """The data (p, ell, g_1..g_r) defining h_i = y - g_i."""

    p: int
    ell: int
    gs: tuple
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self):
        check_prime(self.p)
        if self.ell < 1:
            raise PreconditionViolated("ell must be at least 1")
        gs = []
        for g in self.gs:
            if isinstance(g, str):
                g = parse_poly(g, self.p, ["x"])
            if g.p != self.p or g.vars != ("x",):
                raise PreconditionViolated("each g_i must be a polynomial in x over F_p")
            if any(e[0] < self.ell for e in g.terms):
                raise PreconditionViolated(f"g = {g} is not divisible by x^{self.ell}")
            gs.append(g)
        if len(gs) < 2:
            raise PreconditionViolated("an h-tuple needs r >= 2 factors")
        if len(set(gs)) != len(gs):
            raise PreconditionViolated("the g_i must be pairwise distinct")
        object.__setattr__(self, "gs", tuple(gs))

    @classmethod
    def parse(cls, p: int, ell: int, text: str) -> HTuple:
        return cls(p, ell, tuple(parse_poly(s, p, ["x"]) for s in text.split(",")))

    @property
    def r(self) -> int:
        return len(self.gs)

    @property
    def D(self) -> int:
        return max((g.degree() for g in self.gs if not g.is_zero()), default=self.ell)

    @property
    def strip(self) -> Fraction:
        """1 + ell/D, the edge of the uniqueness strip."""
        return 1 + Fraction(self.ell, self.D)

    @property
    def hs(self) -> tuple:
        return tuple(self._h(i) for i in range(self.r))

    def _h(self, i: int) -> Polynomial:
        terms = {(0, 1): 1}
        for (a,), c in self.gs[i].terms.items():
            terms[(a, 0)] = (-c) % self.p
        return Polynomial(self.p, ("x", "y"), terms)

    @property
    def b(self) -> MonomialIdeal:
        return MonomialIdeal(("x", "y"), ((0, 1), (self.ell, 0)))

    def product(self, t: Sequence[int]) -> Polynomial:
        f = Polynomial.constant(self.p, ("x", "y"), 1)
        for h, k in zip(self.hs, t):
            f = f * h**k
        return f

    def __hash__(self):
        return hash((self.p, self.ell, self.gs))


@dataclass(frozen=True, order=True)
class LatticePoint:
    """The point a / p^e."""

    e: int
    a: tuple

    def __init__(self, a, e: int = 0):
        a = tuple(int(v) for v in a)
        if any(v < 0 for v in a) or e < 0:
            raise PreconditionViolated("lattice points have nonnegative entries")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "e", int(e))

    @classmethod
    def parse(cls, text: str, p: int) -> LatticePoint:
        body, _, den = text.strip().partition("/")
        try:
            a = [int(v) for v in body.split(",")]
            q = int(den) if den else 1
        except ValueError:
            raise ParseError(f"bad point {text!r}", text, 0) from None
        if not is_power_of(q, p):
            raise ParseError(f"denominator {q} is not a power of {p}", text, len(body) + 1)
        return cls(a, log_p(q, p))

    def q(self, p: int) -> int:
        return p**self.e

    def norm(self, p: int) -> Fraction:
        return Fraction(sum(self.a), p**self.e)

    def coords(self, p: int) -> tuple:
        q = p**self.e
        return tuple(Fraction(v, q) for v in self.a)

    def canonicalize(self, p: int) -> LatticePoint:
        return canonicalize(self, p)

    def format(self, p: int) -> str:
        return ",".join(map(str, self.a)) + f"/{p**self.e}"

    def to_json(self, p: int) -> dict:
        return {"a": list(self.a), "e": self.e, "q": p**self.e}


def canonicalize(pt: LatticePoint, p: int) -> LatticePoint:
    a, e = pt.a, pt.e
    while e > 0 and all(v % p == 0 for v in a):
        a = tuple(v // p for v in a)
        e -= 1
    return pt if e == pt.e else LatticePoint(a, e)


def _residue(ht: HTuple, a, q: int) -> Residue:
    ideal = ht.b.bracket(q)
    res = Residue.one(ht.p, ideal)
    for h, k in zip(ht.hs, a):
        if k:
            res.mul_power(h, k)
            if res.is_zero():
                break
    return res


def _upper(ht: HTuple, a, e: int) -> bool:
    pt = canonicalize(LatticePoint(a, e), ht.p)
    key = (pt.a, pt.e)
    with ht._lock:
        hit = ht._cache.get(key)
    if hit is not None:
        return hit
    # every term x^i y^j of h^a has j + i/ell >= ||a||, while terms outside
    # (y^q, x^(ell q)) have j + i/ell < 2q - 1
    q = ht.p**pt.e
    if sum(pt.a) >= 2 * q - 1:
        value = True
    else:
        value = _residue(ht, pt.a, q).is_zero()
    with ht._lock:
        ht._cache[key] = value
    return value


def in_upper_region(ht: HTuple, pt: LatticePoint) -> bool:
    if len(pt.a) != ht.r:
        raise PreconditionViolated(f"point has {len(pt.a)} coordinates, tuple has {ht.r}")
    return _upper(ht, pt.a, pt.e)


def is_critical(ht: HTuple, pt: LatticePoint) -> bool:
    if not in_upper_region(ht, pt):
        return False
    a = list(pt.a)
    for s, v in enumerate(a):
        if v > 0:
            a[s] -= 1
            inside = _upper(ht, a, pt.e)
            a[s] += 1
            if inside:
                return False
    return True


# -- searching the grid at a fixed denominator ------------------------------------


def _min_last(ht: HTuple, prefix, e: int, lo: int, hi: int):
    """Least m in [lo, hi] with (prefix, m) in U, or None when (prefix, hi) is not."""
    if not _upper(ht, tuple(prefix) + (hi,), e):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if _upper(ht, tuple(prefix) + (mid,), e):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _scan_table(ht: HTuple, ranges, e: int, budget: int) -> dict:
    """M[prefix] = least last coordinate putting (prefix, M) in U, subject to
    ||(prefix, M)|| <= budget; prefixes are visited in lexicographic order so
    that each one's lower neighbours are already known."""
    table: dict = {}
    for prefix in product(*(range(n + 1) for n in ranges[:-1])):
        room = budget - sum(prefix)
        if room < 0:
            continue
        hi = min(room, ranges[-1])
        for s, v in enumerate(prefix):
            if v:
                below = table.get(prefix[:s] + (v - 1,) + prefix[s + 1:])
                if below is not None and below < hi:
                    hi = below
        if hi < 0:
            table[prefix] = None
            continue
        table[prefix] = _min_last(ht, prefix, e, 0, hi)
    return table


def _critical_from_table(table: dict, prefix, m) -> bool:
    for s, v in enumerate(prefix):
        if v:
            below = table.get(prefix[:s] + (v - 1,) + prefix[s + 1:])
            if below is not None and below <= m:
                return False
    return True


def critical_point_below(ht: HTuple, pt: LatticePoint) -> LatticePoint:
    """A critical point c <= a of least norm, lexicographically smallest among those.

    Small grids are scanned exactly. Inside the strip ||a/q|| < 1 + ell/D the
    critical point below a is unique, so coordinate descent finds it directly.
    """
    if not in_upper_region(ht, pt):
        raise NotInUpper(f"{pt.format(ht.p)} lies in the lower region")
    a, e = pt.a, pt.e
    prefixes = 1
    for v in a[:-1]:
        prefixes *= v + 1
    if prefixes <= SCAN_MAX_PREFIXES:
        c = _least_norm_scan(ht, a, e)
    elif pt.norm(ht.p) < ht.strip:
        c = _descend(ht, a, e)
    else:
        raise ResourceLimit(
            f"exact search below {pt.format(ht.p)} needs {prefixes} prefixes "
            f"(limit {SCAN_MAX_PREFIXES}) outside the uniqueness strip"
        )
    found = LatticePoint(c, e)
    if not is_critical(ht, found):  # pragma: no cover - guarded by construction
        raise AssertionError(f"search produced non-critical point {found}")
    return canonicalize(found, ht.p)


def _least_norm_scan(ht: HTuple, a, e: int) -> tuple:
    table = _scan_table(ht, a, e, sum(a))
    best = None
    for prefix, m in table.items():
        if m is None:
            continue
        cand = (sum(prefix) + m, prefix + (m,))
        if best is None or cand < best:
            best = cand
    return best[1]


def _descend(ht: HTuple, a, e: int) -> tuple:
    c = list(a)
    changed = True
    while changed:
        changed = False
        for s in range(len(c)):
            lo, hi = 0, c[s]
            while lo < hi:
                mid = (lo + hi) // 2
                if _upper(ht, tuple(c[:s]) + (mid,) + tuple(c[s + 1:]), e):
                    hi = mid
                else:
                    lo = mid + 1
            if lo < c[s]:
                c[s] = lo
                changed = True
    return tuple(c)


def enumerate_critical(ht: HTuple, e_max: int, norm_bound) -> list:
    """All canonical critical points with denominator dividing p^e_max and norm at
    most ``norm_bound``, sorted by (e, a)."""
    q = ht.p**e_max
    if ht.r > ENUM_MAX_R or q > ENUM_MAX_Q:
        raise ResourceLimit(f"enumeration is limited to r <= {ENUM_MAX_R} and q <= {ENUM_MAX_Q}")
    bound = Fraction(norm_bound)
    # a critical c has c - e_s in L, so ||c|| <= 2q - 1
    budget = min(int(bound * q), 2 * q - 1)
    if budget < 0:
        return []
    table = _scan_table(ht, (budget,) * ht.r, e_max, budget)
    found = set()
    for prefix, m in table.items():
        if m is not None and _critical_from_table(table, prefix, m):
            found.add(canonicalize(LatticePoint(prefix + (m,), e_max), ht.p))
    return sorted(found)


# -- F-thresholds through critical points ----------------------------------------------


@dataclass(frozen=True)
class Exact:
    mu: Fraction
    certificate: LatticePoint
    lam: Fraction
    bracket: ThresholdBracket
    kind: str = "exact"


@dataclass(frozen=True)
class LambdaBranch:
    lam: Fraction
    bracket: ThresholdBracket
    e: int
    kind: str = "lambda"


@dataclass(frozen=True)
class Undecided:
    lam: Fraction
    bracket: ThresholdBracket
    kind: str = "undecided"


def ft_via_critical_point(ht: HTuple, t: Sequence[int], e_max: int = 8):
    t = tuple(int(v) for v in t)
    if len(t) != ht.r or any(v < 1 for v in t):
        raise PreconditionViolated("t must have r positive entries")
    p = ht.p
    lam = ht.strip / sum(t)
    f = ht.product(t)
    nus = nu_sequence(f, ht.b, e_max)
    bracket = ThresholdBracket(Fraction(nus[-1], p**e_max), Fraction(nus[-1] + 1, p**e_max),
                               e_max, p, nus[-1], True, tuple(nus))
    for e in range(1, e_max + 1):
        if Fraction(nus[e], p**e) >= lam:
            return LambdaBranch(lam, bracket, e)
    previous = None
    for e in range(1, e_max + 1):
        q = p**e
        pt = LatticePoint(tuple((nus[e] + 1) * v for v in t), e)
        try:
            c = critical_point_below(ht, pt)
        except ResourceLimit:
            previous = None
            continue
        if previous is not None and c == previous:
            coords = c.coords(p)
            mu = max(ci / ti for ci, ti in zip(coords, t))
            if (c.norm(p) < ht.strip and all(ci <= lam * ti for ci, ti in zip(coords, t))
                    and bracket.contains(mu)):
                return Exact(mu, c, lam, bracket)
        previous = c
    return Undecided(lam, bracket)
