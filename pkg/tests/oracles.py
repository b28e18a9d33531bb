"""Independent reference implementations on plain ``{exps: coeff}`` dicts.

Nothing here imports the library: polynomials are multiplied out in full and
ideal membership is a divisibility scan. Slow, but easy to trust.
"""

from itertools import combinations_with_replacement, product


def mul(a, b, p):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def power(f, t, p, n):
    out = {(0,) * n: 1}
    for _ in range(t):
        out = mul(out, f, p)
    return out


def member(f, gens):
    return all(any(all(a >= g for a, g in zip(e, gen)) for gen in gens) for e in f)


def bracket(gens, q):
    return [tuple(q * a for a in g) for g in gens]


def nu(f, p, gens, q, n):
    """Greatest t with f^t outside gens^[q], by expanding f, f^2, ..."""
    target = bracket(gens, q)
    acc = {(0,) * n: 1}
    t = 0
    while True:
        acc = mul(acc, f, p)
        if member(acc, target):
            return t
        t += 1


def nu_ideal(polys, p, gens, q, n):
    """Greatest t such that some product of t generators avoids gens^[q]."""
    target = bracket(gens, q)
    t = 0
    while True:
        if all(member(_prod(combo, p, n), target)
               for combo in combinations_with_replacement(polys, t + 1)):
            return t
        t += 1


def _prod(polys, p, n):
    out = {(0,) * n: 1}
    for f in polys:
        out = mul(out, f, p)
    return out


def h_polys(gs, p):
    """h_i = y - g_i in (x, y) exponents, g_i given as {x_exp: coeff}."""
    hs = []
    for g in gs:
        h = {(0, 1): 1}
        for a, c in g.items():
            h[(a, 0)] = (-c) % p
        hs.append(h)
    return hs


def upper(gs, ell, p, a, q):
    f = {(0, 0): 1}
    for h, k in zip(h_polys(gs, p), a):
        for _ in range(k):
            f = mul(f, h, p)
    return member(f, [(0, q), (ell * q, 0)])


def critical(gs, ell, p, a, q):
    """In U, and every strictly smaller point with denominator p*q is in L."""
    if not upper(gs, ell, p, a, q):
        return False
    top = tuple(p * v for v in a)
    for b in product(*(range(v + 1) for v in top)):
        if b != top and upper(gs, ell, p, b, p * q):
            return False
    return True
