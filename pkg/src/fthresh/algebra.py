"""Prime-field and sparse polynomial arithmetic.

Polynomials are immutable maps from exponent tuples to nonzero residues mod p.
Everything here is exact; the local (negative-degree) monomial order is the
one used for initial terms and for the s-th root recursion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import BadS, NoRoot, NotYRegular, OrdOfZero, ParseError, PreconditionViolated

Exps = tuple


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise PreconditionViolated(f"p={p!r} is not prime")
    return p


@dataclass(frozen=True)
class FieldElement:
    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise PreconditionViolated("mixed characteristics")
            return other.value
        return other

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.p)

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(pow(self.value, k, self.p), self.p)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(self.value)


class Polynomial:
    """Sparse polynomial over F_p in an ordered list of variables."""

    __slots__ = ("p", "vars", "terms", "_hash")

    def __init__(self, p: int, vars: Sequence[str], terms: Mapping[Exps, int] | None = None):
        check_prime(p)
        vars = tuple(vars)
        n = len(vars)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise PreconditionViolated(f"bad exponent vector {exps} for variables {vars}")
            c = (clean.get(exps, 0) + int(c)) % p
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self.p = p
        self.vars = vars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, p, vars, terms):
        # trusted constructor: terms already reduced, no zeros
        self = object.__new__(cls)
        self.p = p
        self.vars = vars
        self.terms = terms
        self._hash = None
        return self

    @classmethod
    def constant(cls, p, vars, c=1):
        c %= p
        return cls._raw(p, tuple(vars), {(0,) * len(vars): c} if c else {})

    @classmethod
    def monomial(cls, p, vars, exps, c=1):
        return cls(p, vars, {tuple(exps): c})

    @classmethod
    def variable(cls, p, vars, name):
        vars = tuple(vars)
        exps = tuple(1 if v == name else 0 for v in vars)
        if sum(exps) != 1:
            raise PreconditionViolated(f"unknown variable {name!r}")
        return cls._raw(p, vars, {exps: 1})

    def zero(self):
        return Polynomial._raw(self.p, self.vars, {})

    def one(self):
        return Polynomial.constant(self.p, self.vars, 1)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def constant_term(self) -> int:
        return self.terms.get((0,) * len(self.vars), 0)

    def degree(self) -> int:
        """Largest total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def ord(self) -> int:
        return ord_m(self)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.p == other.p and self.vars == other.vars and self.terms == other.terms
        if isinstance(other, int):
            return self == Polynomial.constant(self.p, self.vars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if isinstance(other, int):
            return Polynomial.constant(self.p, self.vars, other)
        if isinstance(other, FieldElement):
            return Polynomial.constant(self.p, self.vars, other.value)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.p != self.p or other.vars != self.vars:
            raise PreconditionViolated("polynomials live in different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(p, self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Polynomial._raw(p, self.vars, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> Polynomial:
        c = int(c) % self.p
        if c == 0:
            return self.zero()
        p = self.p
        return Polynomial._raw(p, self.vars, {e: v * c % p for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(int(other))
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.p, self.vars, mul_terms(self.terms, other.terms, self.p))

    __rmul__ = __mul__

    def frobenius(self, e: int = 1) -> Polynomial:
        """Return f^(p^e); coefficients are fixed because F_p is the prime field."""
        q = self.p ** e
        return self.scale_exponents(q)

    def scale_exponents(self, k: int) -> Polynomial:
        return Polynomial._raw(
            self.p, self.vars, {tuple(k * a for a in e): c for e, c in self.terms.items()}
        )

    def __pow__(self, t: int) -> Polynomial:
        if t < 0:
            raise PreconditionViolated("negative exponent")
        result = self.one()
        base = self
        # base-p digits: f^t = prod (f^(p^i))^(t_i)
        while t:
            t, digit = divmod(t, self.p)
            for _ in range(digit):
                result = result * base
            if t:
                base = base.frobenius(1)
        return result

    def substitute_zero(self, var: str) -> Polynomial:
        return restrict(self, var)

    # -- printing ---------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (-sum(item[0]), tuple(-a for a in item[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for v, a in zip(self.vars, exps):
                if a == 1:
                    factors.append(v)
                elif a > 1:
                    factors.append(f"{v}^{a}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial(p={self.p}, vars={self.vars}, {str(self)!r})"


def mul_terms(a: Mapping[Exps, int], b: Mapping[Exps, int], p: int) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = (get(key, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[+*^]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", text, pos + stripped)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_poly(text: str, p: int, vars: Sequence[str]) -> Polynomial:
    """Parse ``term ('+' term)*`` where a term is a product of naturals and ``var[^nat]``."""
    check_prime(p)
    vars = tuple(vars)
    index = {v: i for i, v in enumerate(vars)}
    tokens = _tokenize(text)
    i = 0
    total = {}

    def expect_factor():
        nonlocal i
        kind, val, pos = tokens[i]
        if kind == "nat":
            i += 1
            return int(val), None
        if kind == "name":
            if val not in index:
                raise ParseError(f"unknown variable {val!r}", text, pos)
            i += 1
            exp = 1
            if tokens[i][0] == "op" and tokens[i][1] == "^":
                i += 1
                kind2, val2, pos2 = tokens[i]
                if kind2 != "nat":
                    raise ParseError("expected exponent after '^'", text, pos2)
                exp = int(val2)
                i += 1
            return 1, (index[val], exp)
        raise ParseError("expected a coefficient or variable", text, pos)

    while True:
        coeff = 1
        exps = [0] * len(vars)
        c, var = expect_factor()
        coeff *= c
        if var:
            exps[var[0]] += var[1]
        while tokens[i][0] == "op" and tokens[i][1] == "*":
            i += 1
            c, var = expect_factor()
            coeff *= c
            if var:
                exps[var[0]] += var[1]
        key = tuple(exps)
        total[key] = total.get(key, 0) + coeff
        kind, val, pos = tokens[i]
        if kind == "end":
            break
        if kind == "op" and val == "+":
            i += 1
            continue
        raise ParseError(f"unexpected token {val!r}", text, pos)
    return Polynomial(p, vars, total)


def parse_poly_list(text: str, p: int, vars: Sequence[str]) -> list:
    return [parse_poly(part, p, vars) for part in text.split(",")]


# -- orders and valuations ---------------------------------------------------


@dataclass(frozen=True)
class LocalOrder:
    """Negative-degree-lexicographic local order: lower total degree is greater,
    ties broken lexicographically along ``precedence``."""

    vars: tuple
    precedence: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        prec = tuple(self.precedence) if self.precedence is not None else self.vars
        if sorted(prec) != sorted(self.vars):
            raise PreconditionViolated("precedence must be a permutation of the variables")
        object.__setattr__(self, "precedence", prec)

    @property
    def _perm(self):
        return tuple(self.vars.index(v) for v in self.precedence)

    def key(self, exps) -> tuple:
        """Sort key; a larger key means a greater monomial (1 is the maximum)."""
        return (-sum(exps),) + tuple(exps[i] for i in self._perm)

    def compare(self, a, b) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def sorted_desc(self, exps_iter):
        return sorted(exps_iter, key=self.key, reverse=True)


def ord_m(f: Polynomial) -> int:
    """Order of vanishing at the origin: the minimal total degree of a term."""
    if f.is_zero():
        raise OrdOfZero("the zero polynomial has no order of vanishing")
    return min(sum(e) for e in f.terms)


def initial_term(f: Polynomial, order: LocalOrder | None = None) -> Polynomial:
    if f.is_zero():
        raise OrdOfZero("the zero polynomial has no initial term")
    order = order or LocalOrder(f.vars)
    exps = max(f.terms, key=order.key)
    return Polynomial._raw(f.p, f.vars, {exps: f.terms[exps]})


def restrict(f: Polynomial, v: str) -> Polynomial:
    """Set ``v = 0`` and drop it from the variable list."""
    if v not in f.vars:
        raise PreconditionViolated(f"unknown variable {v!r}")
    k = f.vars.index(v)
    new_vars = f.vars[:k] + f.vars[k + 1:]
    return Polynomial._raw(
        f.p, new_vars, {e[:k] + e[k + 1:]: c for e, c in f.terms.items() if e[k] == 0}
    )


# -- s-th roots ----------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    """``(c*g)^s`` equals the input when ``exact``; otherwise agreement holds up to
    the stated total degree. ``g`` has initial coefficient 1."""

    c: FieldElement
    g: Polynomial
    s: int
    exact: bool
    valid_degree: int

    def power(self) -> Polynomial:
        return (self.g * self.c.value) ** self.s


def field_root(a: int, s: int, p: int) -> int | None:
    """Least residue c in [1, p) with c^s = a, by exhaustive search."""
    a %= p
    for c in range(1, p):
        if pow(c, s, p) == a:
            return c
    return None


def _coefficient_in_power(h: dict, s: int, target: tuple, p: int) -> int:
    # only monomials dividing x^target can contribute
    small = {e: c for e, c in h.items() if all(a <= b for a, b in zip(e, target))}
    if not small:
        return 0
    acc = dict(small)
    for _ in range(s - 1):
        nxt: dict = {}
        for e1, c1 in acc.items():
            for e2, c2 in small.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                if all(a <= b for a, b in zip(key, target)):
                    nxt[key] = (nxt.get(key, 0) + c1 * c2) % p
        acc = nxt
    return acc.get(target, 0)


def _truncate(terms: dict, max_degree: int) -> dict:
    return {e: c for e, c in terms.items() if sum(e) <= max_degree}


def sth_root(f: Polynomial, s: int, precision: int, order: LocalOrder | None = None) -> Root:
    """Find g with g^s = f (as a power series in the local ring) up to total degree
    ``precision``.

    Monomials are visited in decreasing local order; the coefficient of the
    monomial J in g is read off from the coefficient of x^((s-1)I + J) in f,
    where x^I is the initial monomial of g.
    """
    p = f.p
    if s < 1:
        raise PreconditionViolated("s must be positive")
    if s % p == 0:
        raise BadS(f"s={s} is divisible by p={p}")
    if f.is_zero():
        raise PreconditionViolated("cannot take roots of zero")
    order = order or LocalOrder(f.vars)
    lead_exps = max(f.terms, key=order.key)
    gamma = f.terms[lead_exps]
    if any(e % s for e in lead_exps):
        raise NoRoot(f"initial monomial exponent {lead_exps} is not divisible by s={s}")
    c = field_root(gamma, s, p)
    if c is None:
        raise NoRoot(f"initial coefficient {gamma} has no {s}-th root in F_{p}")
    inv_gamma = pow(gamma, -1, p)
    target = {e: v * inv_gamma % p for e, v in f.terms.items()}
    lead = tuple(e // s for e in lead_exps)
    lead_deg = sum(lead)
    inv_s = pow(s, -1, p)
    n = len(f.vars)

    h = {lead: 1}
    lead_key = order.key(lead)
    candidates = [
        e
        for e in product(range(precision + 1), repeat=n)
        if lead_deg <= sum(e) <= precision and order.key(e) < lead_key
    ]
    shift = tuple((s - 1) * a for a in lead)
    for J in sorted(candidates, key=order.key, reverse=True):
        T = tuple(a + b for a, b in zip(shift, J))
        current = _coefficient_in_power(h, s, T, p)
        b = (target.get(T, 0) - current) * inv_s % p
        if b:
            h[J] = b

    g = Polynomial._raw(p, f.vars, h)
    valid = (s - 1) * lead_deg + precision
    gs = g ** s
    trunc_target = _truncate(target, valid)
    if _truncate(gs.terms, valid) != trunc_target:
        raise NoRoot("coefficient recursion is inconsistent: f is not an s-th power")
    exact = gs.terms == target
    return Root(FieldElement(c, p), g, s, exact, valid)


# -- Weierstrass preparation -----------------------------------------------------


def _series_mul(a, b, n, p):
    out = [0] * n
    for i, c in enumerate(a[:n]):
        if c:
            for j in range(min(len(b), n - i)):
                if b[j]:
                    out[i + j] = (out[i + j] + c * b[j]) % p
    return out


def _series_inv(a, n, p):
    if not a or a[0] % p == 0:
        raise PreconditionViolated("series is not a unit")
    inv0 = pow(a[0], -1, p)
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += a[j] * out[k - j]
        out[k] = -acc * inv0 % p
    return out


def weierstrass_prepare(f: Polynomial, N: int, M: int, y: str | None = None):
    """Return ``(u, P)`` with ``u*P == f mod (x^N, y^M)``.

    ``P = y^d + c_{d-1}(x) y^{d-1} + ... + c_0(x)`` with every ``c_j(0) = 0`` and
    ``u`` a unit; ``y`` defaults to the last variable. The factorization is
    lifted one power of x at a time from ``f(0, y) = y^d v(y)``.
    """
    if len(f.vars) != 2:
        raise PreconditionViolated("weierstrass_prepare expects a polynomial in two variables")
    if N < 1 or M < 1:
        raise PreconditionViolated("precisions must be positive")
    p = f.p
    y = y or f.vars[1]
    yi = f.vars.index(y)
    xi = 1 - yi
    zero_x = [e[yi] for e in f.terms if e[xi] == 0]
    if not zero_x:
        raise NotYRegular("x divides f or f = 0 in the distinguished variable")
    d = min(zero_x)
    # each lifting step loses d coefficients of y-precision
    Y = M + N * d + 1

    layers = [[0] * Y for _ in range(N)]
    for e, c in f.terms.items():
        if e[xi] < N and e[yi] < Y:
            layers[e[xi]][e[yi]] = c

    v = layers[0][d:] + [0] * d
    inv_v = _series_inv(v, Y, p)
    P = [[0] * d for _ in range(N)]  # P = y^d + sum_k x^k P[k](y), deg P[k] < d
    u = [v] + [None] * (N - 1)
    for k in range(1, N):
        e = list(layers[k])
        for i in range(1, k):
            j = k - i
            # u_i * P_j with P_j of y-degree < d
            for a, c in enumerate(P[j]):
                if c:
                    ui = u[i]
                    for b in range(Y - a):
                        if ui[b]:
                            e[a + b] = (e[a + b] - c * ui[b]) % p
        t = _series_mul(e, inv_v, Y, p)
        P[k] = t[:d]
        u[k] = _series_mul(t[d:] + [0] * d, v, Y, p)

    def build(rows, max_y, extra=None):
        terms = {}
        for i, row in enumerate(rows):
            for j, c in enumerate(row[:max_y]):
                if c:
                    ex = [0, 0]
                    ex[xi], ex[yi] = i, j
                    terms[tuple(ex)] = c
        if extra:
            terms.update(extra)
        return Polynomial(p, f.vars, terms)

    lead = [0, 0]
    lead[yi] = d
    return build(u, M), build(P, d, {tuple(lead): 1})


def truncate_xy(f: Polynomial, N: int, M: int, y: str | None = None) -> Polynomial:
    """Reduce modulo (x^N, y^M)."""
    y = y or f.vars[1]
    yi = f.vars.index(y)
    xi = 1 - yi
    return Polynomial._raw(
        f.p, f.vars, {e: c for e, c in f.terms.items() if e[xi] < N and e[yi] < M}
    )
