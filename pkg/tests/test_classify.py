import random
from fractions import Fraction

import pytest

from fthresh.algebra import Polynomial, parse_poly
from fthresh.classify import classify_minimal, factor_d, in_bracket_m
from fthresh.errors import PreconditionViolated
from fthresh.frobenius import MonomialIdeal, nu_principal
from fthresh.properties import random_poly

XY = ("x", "y")


def P(text, p=2):
    return parse_poly(text, p, list(XY))


def random_bracket_element(rng, p, q):
    """g = x^q A + y^q B with ord(g) = q."""
    x_part = random_poly(rng, p, XY, 2, 2, min_deg=0)
    y_part = random_poly(rng, p, XY, 2, 2, min_deg=0)
    unit = Polynomial.constant(p, XY, rng.randrange(1, p))
    x_part = x_part + unit if x_part.constant_term() == 0 else x_part
    g = Polynomial.monomial(p, XY, (q, 0)) * x_part + Polynomial.monomial(p, XY, (0, q)) * y_part
    return g if g.ord() == q else random_bracket_element(rng, p, q)


class TestFactorD:
    def test_examples(self):
        assert factor_d(12, 2) == (4, 3)
        assert factor_d(7, 7) == (7, 1)
        assert factor_d(45, 3) == (9, 5)
        assert factor_d(1, 5) == (1, 1)

    def test_positive(self):
        with pytest.raises(PreconditionViolated):
            factor_d(0, 2)


class TestInBracket:
    def test_examples(self):
        assert in_bracket_m(P("x^4 + y^5"), 4)
        assert not in_bracket_m(P("x*y"), 2)
        assert in_bracket_m(P("x*y + y"), 1)
        assert not in_bracket_m(P("x + 1"), 1)


class TestClassify:
    def test_degree_q(self):
        v = classify_minimal(P("x^2 + y^6"))
        assert v.minimal and v.d == 2 and v.ft == Fraction(1, 2)
        assert v.witness[1] == P("x^2 + y^6")

    def test_node_not_minimal(self):
        v = classify_minimal(P("x*y"))
        assert not v.minimal and v.certainty == "certified"
        assert v.bracket.lo > Fraction(1, 2)
        assert nu_principal(P("x*y"), MonomialIdeal.maximal(XY), 2) == 3

    def test_cube(self):
        g = P("x^2 + y^4 + x*y^3")
        v = classify_minimal(g**3)
        assert (v.d, v.q, v.s) == (6, 2, 3)
        assert v.minimal and v.ft == Fraction(1, 6) and v.witness[1] == g
        assert v.bracket.contains(Fraction(1, 6)) and v.bracket.e == 10

    def test_scaled_witness(self):
        g = P("x^3 + y^4", 3)
        f = (g**2).scale(2)  # 2 is not a square mod 3
        v = classify_minimal(f)
        c, h = v.witness
        assert v.minimal and (h**2).scale(c) == f

    def test_certainty_depends_on_level(self):
        cusp = P("x^2 + y^3", 5)
        coarse = classify_minimal(cusp, 0)
        assert not coarse.minimal and coarse.certainty == "uncertified"
        fine = classify_minimal(cusp, 3)
        assert not fine.minimal and fine.certainty == "certified"
        assert fine.bracket.lo > Fraction(1, 2)

    def test_unit_rejected(self):
        with pytest.raises(PreconditionViolated):
            classify_minimal(P("1 + x"))

    def test_json(self):
        out = classify_minimal(P("x^2 + y^4 + x*y^3") ** 3).to_json()
        assert out["d"] == 6 and out["minimal"] and out["certainty"] == "certified"
        assert out["witness"] == {"c": "1", "g": "x*y^3 + y^4 + x^2"}
        assert out["bracket"][1] == "171/1024" and out["e"] == 10


class TestProperties:
    def test_converse_soundness(self):
        rng = random.Random(17)
        for _ in range(100):
            p = rng.choice([2, 3])
            q = p ** rng.randint(1, 2)
            s = rng.choice([k for k in (1, 2, 3, 4, 5) if k % p])
            g = random_bracket_element(rng, p, q)
            f = g**s
            e = 8 if p == 2 else 4
            v = classify_minimal(f, e)
            assert v.minimal, (g, s)
            assert (v.d, v.q, v.s) == (q * s, q, s)
            c, h = v.witness
            assert (h**s).scale(c) == f and in_bracket_m(h, q)
            assert v.bracket.contains(Fraction(1, q * s))
            if (p**e) % (q * s) == 0:
                assert v.bracket.hi == Fraction(1, q * s)

    def test_perturbation(self):
        rng = random.Random(23)
        certified = 0
        for _ in range(100):
            p = rng.choice([2, 3])
            q = p ** rng.randint(1, 2)
            s = rng.choice([k for k in (1, 2, 3) if k % p])
            d = q * s
            g = random_bracket_element(rng, p, q)
            i = rng.randint(1, d)
            f = g**s + Polynomial.monomial(p, XY, (i, d + rng.randint(1, 2) - i))
            v = classify_minimal(f, 8 if p == 2 else 4)
            assert v.d == f.ord() and v.d == v.q * v.s
            if v.minimal:
                c, h = v.witness
                assert (h**v.s).scale(c) == f and in_bracket_m(h, v.q)
            elif v.certainty == "certified":
                certified += 1
                assert v.bracket.lo > Fraction(1, v.d)
            else:
                assert v.bracket.lo <= Fraction(1, v.d)
        assert certified > 0

    def test_scaling_consistency(self):
        rng = random.Random(29)
        m = MonomialIdeal.maximal(XY)
        for _ in range(100):
            p = rng.choice([2, 3])
            g = random_poly(rng, p, XY, 4, 3)
            s = rng.randint(1, 4)
            e = rng.randint(1, 5 if p == 2 else 3)
            assert nu_principal(g**s, m, e) == nu_principal(g, m, e) // s
