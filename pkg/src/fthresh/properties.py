"""Seeded property checks, shared by ``fthresh selftest`` and the test suite.

Each suite returns a :class:`SuiteResult`; a suite passes when every sampled
case satisfies its property. Region checks recompute membership from scratch
by full expansion so they do not lean on the memo cache or its shortcuts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import (LocalOrder, Polynomial, initial_term, ord_m, restrict, sth_root, truncate_xy,
                      weierstrass_prepare)
from .frobenius import (MonomialIdeal, ft_bracket, member_power, monomial_member, nu_by_expansion,
                        nu_principal, nu_sequence)
from .regions import HTuple, LatticePoint, canonicalize, enumerate_critical, is_critical


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, condition: bool, detail) -> None:
        self.cases += 1
        if not condition:
            self.failures.append(detail)


# -- random inputs ---------------------------------------------------------------------


def random_poly(rng: random.Random, p: int, vars, max_deg: int, max_terms: int,
                min_deg: int = 1) -> Polynomial:
    n = len(vars)
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            deg = rng.randint(min_deg, max_deg)
            cuts = sorted(rng.randint(0, deg) for _ in range(n - 1))
            exps = tuple(b - a for a, b in zip([0] + cuts, cuts + [deg]))
            terms[exps] = rng.randrange(1, p)
        f = Polynomial(p, vars, terms)
        if not f.is_zero():
            return f


def random_htuple(rng: random.Random, p: int, r: int, ell: int | None = None, max_deg: int = 4) -> HTuple:
    ell = ell or rng.randint(1, 2)
    while True:
        gs = set()
        for _ in range(r):
            terms = {}
            if rng.random() < 0.8:
                for a in range(ell, max(ell, max_deg) + 1):
                    if rng.random() < 0.5:
                        terms[(a,)] = rng.randrange(1, p)
            gs.add(Polynomial(p, ("x",), terms))
        if len(gs) == r:
            return HTuple(p, ell, tuple(sorted(gs, key=str)))


def upper_by_expansion(ht: HTuple, a, q: int) -> bool:
    f = ht.product(a)
    return monomial_member(f, ht.b.bracket(q))


# -- region suites ------------------------------------------------------------------------


def norm_floor(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("norm floor")
    for _ in range(cases):
        p = rng.choice([2, 3])
        ht = random_htuple(rng, p, rng.randint(2, 3))
        e = rng.randint(0, 2)
        q = p**e
        a = tuple(rng.randint(0, 2 * q) for _ in range(ht.r))
        upper = upper_by_expansion(ht, a, q)
        norm = Fraction(sum(a), q)
        res.check(not upper or norm >= 1, ("U point below norm 1", ht, a, q))
        f = ht.product(a)
        d = sum(a)
        exact = member_power(f, ht.b.to_polys(p), d) and not member_power(f, ht.b.to_polys(p), d + 1)
        res.check(exact, ("ord_b(h^a) != ||a||", ht, a))
    return res


def half_step(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("half-step")
    while res.cases < cases:
        p = rng.choice([2, 3])
        ht = random_htuple(rng, p, rng.randint(2, 3))
        e = rng.randint(0, 2)
        q = p**e
        a = [rng.randint(0, 2 * q) for _ in range(ht.r)]
        s = rng.randrange(ht.r)
        if a[s] == 0:
            continue
        coarse = a.copy()
        coarse[s] -= 1
        fine = [p * v for v in a]
        fine[s] -= 1
        left = upper_by_expansion(ht, coarse, q)
        right = upper_by_expansion(ht, fine, p * q)
        res.check(left == right, ("half-step", ht, a, e, s))
    return res


def upward_closure(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("upward closure")
    while res.cases < cases:
        p = rng.choice([2, 3])
        ht = random_htuple(rng, p, rng.randint(2, 3))
        e = rng.randint(0, 2)
        q = p**e
        a = tuple(rng.randint(0, 2 * q) for _ in range(ht.r))
        if not upper_by_expansion(ht, a, q):
            continue
        k = rng.randint(0, 1)
        bigger = tuple(v * p**k + rng.randint(0, p**k) for v in a)
        res.check(upper_by_expansion(ht, bigger, q * p**k), ("lost membership", ht, a, bigger))
    return res


def canonical_invariance(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("canonicalization invariance")
    for _ in range(cases):
        p = rng.choice([2, 3])
        ht = random_htuple(rng, p, rng.randint(2, 3))
        e0 = rng.randint(0, 1)
        k = rng.randint(0, 2)
        a = tuple(rng.randint(0, 2 * p**e0) for _ in range(ht.r))
        pt = LatticePoint(tuple(v * p**k for v in a), e0 + k)
        can = canonicalize(pt, p)
        res.check(canonicalize(can, p) == can, ("not idempotent", pt))
        res.check(upper_by_expansion(ht, pt.a, p**pt.e) == upper_by_expansion(ht, can.a, p**can.e),
                  ("membership changed", ht, pt))
    return res


def distinct_critical_pairs(seed: int, min_pairs: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("distinct critical pairs")
    attempts = 0
    while res.cases < min_pairs and attempts < 200:
        attempts += 1
        p = rng.choice([2, 2, 3])
        e_max = 2 if p == 3 else rng.randint(2, 4)
        ht = random_htuple(rng, p, rng.randint(2, 3))
        q = p**e_max
        points = enumerate_critical(ht, e_max, Fraction(2))
        lifted = [tuple(v * p**(e_max - pt.e) for v in pt.a) for pt in points]
        for i in range(len(lifted)):
            for j in range(i + 1, len(lifted)):
                top = sum(max(u, v) for u, v in zip(lifted[i], lifted[j]))
                res.check(Fraction(top, q) >= ht.strip, ("pair too close", ht, points[i], points[j]))
    return res


def root_vanishing(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("root vanishing")
    for k in range(cases):
        p = rng.choice([2, 3, 5])
        ell = rng.randint(1, 3)
        d = rng.randint(1, 3)
        vars = ("y", "t")
        low = k % 2 == 0
        thetas = []
        for i in range(d):
            lo = ell if not low else (rng.randint(0, ell - 1) if i == 0 else rng.randint(0, ell + 1))
            terms = {(0, lo): rng.randrange(1, p)}
            for a in range(lo + 1, lo + 3):
                if rng.random() < 0.5:
                    terms[(0, a)] = rng.randrange(1, p)
            thetas.append(Polynomial(p, vars, terms))
        f = Polynomial.constant(p, vars, 1)
        y = Polynomial.variable(p, vars, "y")
        for th in thetas:
            f = f * (y - th)
        gens = [y, Polynomial.monomial(p, vars, (0, ell))]
        res.check(member_power(f, gens, d) == (not low), ("root vanishing", p, ell, thetas))
    return res


def critical_brute_force(seed: int, cases: int = 100) -> SuiteResult:
    """is_critical against 'in U and every strictly smaller point with
    denominator dividing p*q is in L', on r = 2 grids with q <= 8."""
    rng = random.Random(seed)
    res = SuiteResult("critical vs brute force")
    while res.cases < cases:
        p = 2
        e = rng.randint(0, 3)
        q = p**e
        ht = random_htuple(rng, p, 2, ell=1, max_deg=3)
        a = tuple(rng.randint(0, 2 * q) for _ in range(2))
        fast = is_critical(ht, canonicalize(LatticePoint(a, e), p))
        slow = upper_by_expansion(ht, a, q)
        if slow:
            fine = p * q
            for b in product(range(p * a[0] + 1), range(p * a[1] + 1)):
                if b != (p * a[0], p * a[1]) and upper_by_expansion(ht, b, fine):
                    slow = False
                    break
        res.check(fast == slow, ("critical mismatch", ht, a, q))
    return res


# -- nu suites ---------------------------------------------------------------------------------


def _random_setting(rng):
    p = rng.choice([2, 3, 5])
    vars = ("x", "y") if rng.random() < 0.7 else ("x", "y", "z")
    return p, vars, MonomialIdeal.maximal(vars)


def _levels(rng, p, vars, top=5):
    """A random level e keeping p^e small enough for sparse residues in n variables."""
    limit = 125 if len(vars) > 2 else 625
    e = 1
    while e < top and p ** (e + 1) <= limit:
        e += 1
    return rng.randint(1, e)


def nu_oracle(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("nu vs full expansion")
    for _ in range(cases):
        p, vars, m = _random_setting(rng)
        f = random_poly(rng, p, vars, 6, 4)
        e = rng.randint(0, 3 if p == 2 else 2)
        res.check(nu_principal(f, m, e) == nu_by_expansion(f, m, e), ("nu mismatch", f, e))
    return res


def frobenius_injectivity(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("Frobenius injectivity")
    for _ in range(cases):
        p, vars, _ = _random_setting(rng)
        f = random_poly(rng, p, vars, 6, 5, min_deg=0)
        gens = tuple(tuple(rng.randint(0, 4) for _ in vars) for _ in range(rng.randint(1, 3)))
        ideal = MonomialIdeal(vars, gens)
        res.check(monomial_member(f, ideal) == monomial_member(f**p, ideal.bracket(p)),
                  ("membership not preserved", f, gens))
        g = random_poly(rng, p, vars, 4, 3)
        nus = nu_sequence(g, MonomialIdeal.maximal(vars), 4)
        res.check(all(nus[k + 1] >= p * nus[k] for k in range(len(nus) - 1)), ("nu(pq) < p nu(q)", g, nus))
    return res


def principal_nesting(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("principal nesting")
    for _ in range(cases):
        p, vars, m = _random_setting(rng)
        f = random_poly(rng, p, vars, 5, 4)
        nus = nu_sequence(f, m, _levels(rng, p, vars))
        ok = all(
            Fraction(nus[k + 1] + 1, p ** (k + 1)) <= Fraction(nus[k] + 1, p**k)
            and Fraction(nus[k + 1], p ** (k + 1)) >= Fraction(nus[k], p**k)
            for k in range(len(nus) - 1)
        )
        res.check(ok, ("brackets not nested", f, nus))
    return res


def prop_containment(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("nu of a multiple")
    for _ in range(cases):
        p, vars, m = _random_setting(rng)
        f = random_poly(rng, p, vars, 4, 3)
        g = random_poly(rng, p, vars, 3, 3, min_deg=0)
        e = _levels(rng, p, vars, 4)
        fg = f * g
        if fg.is_zero():
            continue
        res.check(nu_principal(fg, m, e) <= nu_principal(f, m, e), ("nu_fg > nu_f", f, g, e))
    return res


def prop_power(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("nu of a power")
    for _ in range(cases):
        p, vars, m = _random_setting(rng)
        f = random_poly(rng, p, vars, 3, 3)
        s = rng.randint(1, 4)
        e = rng.randint(1, 4)
        res.check(nu_principal(f**s, m, e) == nu_principal(f, m, e) // s, ("power rule", f, s, e))
    return res


def prop_order_bounds(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("order bounds")
    for _ in range(cases):
        p, vars, m = _random_setting(rng)
        f = random_poly(rng, p, vars, 5, 4)
        d = ord_m(f)
        br = ft_bracket(f, m, _levels(rng, p, vars))
        res.check(br.intersects(Fraction(1, d), Fraction(len(vars), d)), ("bracket misses bounds", f, br))
    return res


def prop_restriction(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("restriction")
    while res.cases < cases:
        p, vars, m = _random_setting(rng)
        f = random_poly(rng, p, vars, 5, 4)
        v = rng.choice(vars)
        g = restrict(f, v)
        if g.is_zero():
            continue
        e = rng.randint(1, 4)
        res.check(nu_principal(g, MonomialIdeal.maximal(g.vars), e) <= nu_principal(f, m, e),
                  ("restriction raised nu", f, v, e))
    return res


def prop_initial_term(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("initial term")
    for _ in range(cases):
        p, vars, m = _random_setting(rng)
        f = random_poly(rng, p, vars, 5, 4)
        order = LocalOrder(vars, tuple(rng.sample(vars, len(vars))))
        ini = initial_term(f, order)
        e = 6 if p == 2 else _levels(rng, p, vars, 4)
        a = nu_sequence(ini, m, e)
        b = nu_sequence(f, m, e)
        res.check(all(x <= y for x, y in zip(a, b)), ("nu_ini > nu_f", f, order))
    return res


# -- algebra round trips ----------------------------------------------------------------


def root_round_trip(seed: int, cases: int = 100) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("s-th root round trip")
    for _ in range(cases):
        p = rng.choice([2, 3, 5, 7])
        s = rng.choice([k for k in range(1, 6) if k % p])
        g = random_poly(rng, p, ("x", "y"), 3, 3, min_deg=0)
        a = rng.randrange(1, p)
        c = pow(a, s, p)
        f = (g ** s).scale(c)
        root = sth_root(f, s, f.degree() // s + 8)
        res.check(root.exact and root.power() == f, ("root failed", g, s, c))
    return res


def weierstrass_round_trip(seed: int, cases: int = 50, N: int = 12) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("Weierstrass round trip")
    vars = ("x", "y")
    while res.cases < cases:
        p = rng.choice([2, 3, 5, 7])
        f = random_poly(rng, p, vars, 6, 6, min_deg=0)
        if all(e[0] > 0 for e in f.terms):
            f = f + Polynomial.monomial(p, vars, (0, rng.randint(0, 3)))
        M = rng.randint(4, 10)
        u, P = weierstrass_prepare(f, N, M)
        d = max(e[1] for e in P.terms)
        ok = truncate_xy(u * P, N, M) == truncate_xy(f, N, M)
        ok = ok and P.coefficient((0, d)) == 1 and all(e[0] > 0 for e in P.terms if e[1] < d)
        ok = ok and u.constant_term() != 0
        res.check(ok, ("Weierstrass failed", f, N, M))
    return res


SUITES = {
    "norm-floor": norm_floor,
    "half-step": half_step,
    "upward-closure": upward_closure,
    "canonical": canonical_invariance,
    "critical-pairs": distinct_critical_pairs,
    "root-vanishing": root_vanishing,
    "critical-brute": critical_brute_force,
    "nu-oracle": nu_oracle,
    "frobenius-injectivity": frobenius_injectivity,
    "nesting": principal_nesting,
    "prop-containment": prop_containment,
    "prop-power": prop_power,
    "prop-order": prop_order_bounds,
    "prop-restriction": prop_restriction,
    "prop-initial": prop_initial_term,
    "root-round-trip": root_round_trip,
    "weierstrass": weierstrass_round_trip,
}


def run_all(seed: int = 0) -> list:
    return [suite(seed) for suite in SUITES.values()]
