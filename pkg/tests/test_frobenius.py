import random
from fractions import Fraction

import pytest

from fthresh.algebra import parse_poly
from fthresh.errors import PreconditionViolated, ResourceLimit
from fthresh.frobenius import (MonomialIdeal, Residue, bracket_power, fmt_rational, ft_bracket,
                               ft_lower_sequence, member_power, monomial_member, nu_ideal, nu_principal,
                               nu_sequence, reduce_mod)
from fthresh.properties import random_poly

import oracles

XY = ("x", "y")
M2 = MonomialIdeal.maximal(XY)


def P(text, p=2, vars=XY):
    return parse_poly(text, p, list(vars))


def I(text, p=2, vars=XY):
    return MonomialIdeal.parse(text, p, vars)


def example_f():
    return P("y+x") * P("y+x^2") ** 2 * P("y+x^4")


class TestMonomialIdeal:
    def test_minimal_generators(self):
        ideal = MonomialIdeal(XY, ((2, 0), (3, 1), (0, 4), (2, 0)))
        assert ideal.generators == ((0, 4), (2, 0))

    def test_non_monomial_rejected(self):
        with pytest.raises(PreconditionViolated):
            MonomialIdeal.from_polys([P("x+y")])

    def test_staircase(self):
        assert I("y^2,x*y,x^3").staircase() == [3, 1]
        assert I("x,y").bracket(4).staircase() == [4, 4, 4, 4]
        assert I("x*y").staircase() is None


class TestBracketPower:
    def test_examples(self):
        assert bracket_power(M2, 4, 2) == I("x^4,y^4")
        assert bracket_power(I("y,x^3"), 2, 2) == I("y^2,x^6")
        gens = bracket_power([P("x+y", 3), P("y", 3)], 3)
        assert gens == [P("x^3+y^3", 3), P("y^3", 3)]

    def test_not_a_power(self):
        with pytest.raises(PreconditionViolated):
            bracket_power([P("x")], 6)


class TestMembership:
    def test_examples(self):
        assert monomial_member(P("x^3*y"), I("x^2,y^4"))
        assert not monomial_member(P("x*y^3"), I("x^2,y^4"))
        assert monomial_member(example_f() ** 7, I("x^16,y^16"))

    def test_reduce(self):
        ideal = I("y^4,x^3")
        assert reduce_mod(P("y^5 + x*y + x^3"), ideal) == P("x*y")
        assert reduce_mod(P("x*y"), ideal) == P("x*y")
        assert reduce_mod(P("y^4"), ideal).is_zero()

    def test_reduce_agrees_with_member(self):
        rng = random.Random(1)
        for _ in range(100):
            f = random_poly(rng, 3, XY, 8, 5, min_deg=0)
            gens = tuple(tuple(rng.randint(0, 5) for _ in XY) for _ in range(2))
            ideal = MonomialIdeal(XY, gens)
            assert reduce_mod(f, ideal).is_zero() == monomial_member(f, ideal)

    def test_member_power(self):
        ty = ("y", "t")
        f = parse_poly("y + 4*t^2", 5, ty) * parse_poly("y + 4*t^3", 5, ty)
        gens = [parse_poly("y", 5, ty), parse_poly("t^2", 5, ty)]
        assert member_power(f, gens, 2)
        assert not member_power(parse_poly("y*t", 5, ty), gens, 2)
        assert member_power(parse_poly("1", 5, ty), gens, 0)


class TestResidue:
    @pytest.mark.parametrize("p", [2, 3, 7])
    def test_dense_matches_sparse(self, p):
        rng = random.Random(p)
        ideal = M2.bracket(p**3 if p < 7 else 49)
        f = random_poly(rng, p, XY, 3, 4)
        dense = Residue.one(p, ideal)
        dense._promote()
        sparse = Residue.one(p, ideal)
        sparse._widths = None  # forbid promotion
        for _ in range(30):
            dense.mul(f)
            sparse.mul(f)
            assert dense.to_poly() == sparse.to_poly()

    def test_term_cap(self, monkeypatch):
        monkeypatch.setenv("FTHRESH_MAX_TERMS", "5")
        with pytest.raises(ResourceLimit):
            nu_principal(P("x+y+z", 3, "xyz"), MonomialIdeal.maximal("xyz"), 3)


class TestNu:
    def test_examples(self):
        assert nu_principal(parse_poly("x^3", 2, ["x"]), MonomialIdeal.maximal(("x",)), 3) == 2
        assert nu_principal(P("x*y"), M2, 2) == 3
        assert nu_principal(example_f(), M2, 4) == 6

    def test_example_against_oracle(self):
        f = example_f()
        for e in range(5):
            assert nu_principal(f, M2, e) == oracles.nu(f.terms, 2, [(1, 0), (0, 1)], 2**e, 2)

    def test_not_in_radical(self):
        with pytest.raises(PreconditionViolated):
            nu_principal(P("x + 1"), M2, 2)
        with pytest.raises(PreconditionViolated):
            nu_principal(P("x"), I("y"), 2)

    def test_zero(self):
        with pytest.raises(PreconditionViolated):
            nu_principal(P("x") - P("x"), M2, 1)

    def test_against_oracle_random(self):
        rng = random.Random(21)
        for _ in range(100):
            p = rng.choice([2, 3, 5])
            f = random_poly(rng, p, XY, 6, 4)
            e = rng.randint(0, 3 if p == 2 else 2)
            b = rng.choice([((1, 0), (0, 1)), ((0, 1), (2, 0)), ((1, 1), (3, 0), (0, 2))])
            ideal = MonomialIdeal(XY, b)
            if not all(ideal.radical_contains_exps(e_) for e_ in f.terms):
                continue
            assert nu_principal(f, ideal, e) == oracles.nu(f.terms, p, list(b), p**e, 2)

    def test_backends_agree(self):
        from fthresh.kernels import available_backends

        f = example_f()
        runs = {be: nu_sequence(f, M2, 12, backend=be) for be in available_backends()}
        assert len(set(map(tuple, runs.values()))) == 1


class TestNuIdeal:
    def test_examples(self):
        assert nu_ideal([P("x"), P("y")], M2, 1) == 2
        assert nu_ideal([P("x^2", 3), P("y^3", 3)], M2, 2) == 6
        f = example_f()
        assert nu_ideal([f], M2, 3) == nu_principal(f, M2, 3)

    def test_against_oracle(self):
        rng = random.Random(4)
        for _ in range(20):
            p = rng.choice([2, 3])
            gens = [random_poly(rng, p, XY, 3, 2) for _ in range(rng.randint(2, 3))]
            e = rng.randint(0, 2 if p == 2 else 1)
            expected = oracles.nu_ideal([g.terms for g in gens], p, [(1, 0), (0, 1)], p**e, 2)
            assert nu_ideal(gens, M2, e) == expected

    def test_cap(self):
        with pytest.raises(ResourceLimit):
            nu_ideal([P("x"), P("y")], M2, 4, cap=10)


class TestBrackets:
    def test_xy(self):
        br = ft_bracket(P("x*y"), M2, 4)
        assert (br.lo, br.hi) == (Fraction(15, 16), Fraction(1))
        assert br.contains(1)

    def test_example_three_sevenths(self):
        br = ft_bracket(example_f(), M2, 10)
        assert br.contains(Fraction(3, 7)) and br.width == Fraction(1, 1024)

    def test_degree_q(self):
        br = ft_bracket(P("x^4 + y^5"), M2, 2)
        assert br.nu == 0 and (br.lo, br.hi) == (0, Fraction(1, 4))

    def test_json(self):
        assert ft_bracket(P("x*y"), M2, 2).to_json() == ["3/4", "1/1"]
        assert fmt_rational(Fraction(6, 4)) == "3/2"

    def test_lower_sequence(self):
        seq = ft_lower_sequence([P("x^2", 3), P("y^3", 3)], M2, 4)
        assert seq.values == (Fraction(1, 3), Fraction(2, 3), Fraction(7, 9), Fraction(22, 27))
        assert seq.extrapolation == Fraction(5, 6) and not seq.certified
        for e, v in enumerate(seq.nus, start=1):
            q = 3**e
            assert v == (q - 1) // 2 + (q - 1) // 3

    def test_lower_sequence_linear(self):
        seq = ft_lower_sequence([P("x"), P("y")], M2, 3)
        assert seq.values == (Fraction(1), Fraction(3, 2), Fraction(7, 4))
        assert seq.nus[:2] == (2, 6)
        assert seq.extrapolation == 2

    def test_lower_sequence_principal(self):
        f = example_f()
        seq = ft_lower_sequence([f], M2, 6)
        assert seq.values == tuple(ft_bracket(f, M2, e).lo for e in range(1, 7))

    def test_inf_set_not_scaling_stable(self):
        # (x^2, y^3)^2 lies in m^[3] at p = 3 even though nu(27)/27 = 7/9 > 2/3
        gens = [P("x^2", 3), P("y^3", 3)]
        assert nu_ideal(gens, M2, 1) == 1
        assert Fraction(nu_ideal(gens, M2, 3), 27) == Fraction(7, 9)
