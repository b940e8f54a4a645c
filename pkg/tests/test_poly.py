"""Exact polynomial arithmetic and the symbolic transformations."""

import math
import random

import pytest

from vdcount.poly import (
    NEG_INF,
    Polynomial,
    PolySystem,
    UnimodularMap,
    complete_to_unimodular,
    difference,
    directional_form,
    group_by_degree,
    pencil_combine,
    pencil_invert,
    substitute_affine,
)

P = Polynomial


def random_poly(rng, n, max_deg, max_coeff=9, max_terms=5, nonzero=True):
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            mono = tuple(rng.randint(0, max_deg) for _ in range(n))
            if sum(mono) > max_deg:
                continue
            c = rng.randint(-max_coeff, max_coeff)
            if c:
                terms[mono] = terms.get(mono, 0) + c
        f = P(n, terms)
        if not (nonzero and f.is_zero()):
            return f


class TestEvaluate:
    def test_examples(self):
        f = P.from_terms(2, [(1, (2, 0)), (2, (0, 1))])
        assert f.evaluate((3, 4)) == 17
        assert P.zero(3).evaluate((9, 9, 9)) == 0
        assert P.from_terms(1, [(1, (3,))]).evaluate((-2,)) == -8

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            P.zero(2).evaluate((1,))


class TestLeadingForm:
    def test_unique_top_term(self):
        f = P.from_terms(2, [(1, (3, 0)), (1, (1, 1)), (5, (0, 0))])
        assert f.leading_form() == P.from_terms(2, [(1, (3, 0))])

    def test_homogeneous_part(self):
        f = P.from_terms(2, [(1, (2, 0)), (1, (0, 2)), (-2, (0, 0))])
        assert f.leading_form() == P.from_terms(2, [(1, (2, 0)), (1, (0, 2))])

    def test_identity_on_forms(self):
        rng = random.Random(7)
        for _ in range(20):
            f = random_poly(rng, 3, 3)
            F = f.leading_form()
            assert F.leading_form() == F
            assert F.is_homogeneous()

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            P.zero(2).leading_form()


class TestHeight:
    def test_max_abs_coefficient(self):
        S = PolySystem(2, [P.from_terms(2, [(3, (2, 0)), (-7, (0, 2)), (2, (0, 0))])])
        assert S.height() == 7

    def test_unit_forms(self):
        S = PolySystem(2, [P.from_terms(2, [(1, (2, 0))]), P.from_terms(2, [(1, (0, 2))])])
        assert S.height() == 1

    def test_scaling_homogeneity(self):
        rng = random.Random(3)
        for _ in range(10):
            f = random_poly(rng, 2, 3)
            c = rng.choice([2, 3, -5])
            assert (c * f).height() == abs(c) * f.height()


class TestDifference:
    def test_cube_shift(self):
        f = P.from_terms(1, [(1, (3,))])
        assert difference(f, (1,), 5) == P.from_terms(
            1, [(15, (2,)), (75, (1,)), (125, (0,))]
        )

    def test_zero_direction(self):
        rng = random.Random(11)
        for _ in range(10):
            f = random_poly(rng, 3, 4)
            assert difference(f, (0, 0, 0), 3).is_zero()

    def test_linear_gives_constant(self):
        f = P.from_terms(2, [(3, (1, 0)), (-2, (0, 1)), (4, (0, 0))])
        d = difference(f, (1, 2), 7)
        assert d == P.constant(2, 7 * (3 * 1 + (-2) * 2))

    def test_linearity(self):
        rng = random.Random(13)
        for _ in range(30):
            f = random_poly(rng, 2, 4)
            g = random_poly(rng, 2, 4)
            y = (rng.randint(-3, 3), rng.randint(-3, 3))
            p = rng.choice([2, 3, 5])
            assert difference(f + g, y, p) == difference(f, y, p) + difference(g, y, p)

    def test_leading_form_identity_and_degree_drop(self):
        rng = random.Random(17)
        for _ in range(100):
            n = rng.randint(1, 3)
            f = random_poly(rng, n, 4)
            if f.degree() < 1:
                continue
            y = tuple(rng.randint(-3, 3) for _ in range(n))
            if not any(y):
                continue
            p = rng.choice([2, 3, 5, 7])
            d = difference(f, y, p)
            expected = directional_form(f, y, p)
            assert d.degree() <= f.degree() - 1 or d.is_zero()
            if not expected.is_zero():
                assert d.degree() == f.degree() - 1
                assert d.leading_form() == expected
            else:
                assert d.is_zero() or d.degree() <= f.degree() - 2


class TestSubstituteAffine:
    def test_pin_coordinate(self):
        f = P.variable(2, 1)
        assert substitute_affine(f, UnimodularMap.identity(2), 4) == P.constant(1, 4)

    def test_passthrough(self):
        f = P.variable(2, 0)
        for b in (-3, 0, 5):
            assert substitute_affine(f, UnimodularMap.identity(2), b) == P.variable(1, 0)

    def test_swap(self):
        f = P.from_terms(2, [(1, (2, 0)), (1, (0, 2))])
        M = UnimodularMap(((0, 1), (1, 0)))
        assert substitute_affine(f, M, 3) == P.from_terms(1, [(1, (2,)), (9, (0,))])

    def test_respects_evaluation(self):
        rng = random.Random(19)
        for _ in range(100):
            n = rng.randint(2, 4)
            f = random_poly(rng, n, 3)
            while True:
                a = tuple(rng.randint(-4, 4) for _ in range(n))
                if any(a) and math.gcd(*a) == 1:
                    break
            M = complete_to_unimodular(a)
            b = rng.randint(-3, 3)
            g = substitute_affine(f, M, b)
            x = tuple(rng.randint(-3, 3) for _ in range(n - 1))
            assert g.evaluate(x) == f.evaluate(M.apply(x + (b,)))

    def test_leading_form_survives_generic_slice(self):
        f = P.from_terms(3, [(1, (2, 0, 0)), (1, (0, 2, 0)), (1, (0, 0, 2)), (5, (0, 0, 0))])
        M = complete_to_unimodular((1, 1, 1))
        g = substitute_affine(f, M, 2)
        F = f.leading_form()
        G_expected = substitute_affine(F, M, 0)
        assert not G_expected.is_zero()
        assert g.leading_form() == G_expected


class TestUnimodular:
    def test_completion(self):
        rng = random.Random(23)
        for _ in range(60):
            n = rng.randint(1, 5)
            while True:
                a = tuple(rng.randint(-9, 9) for _ in range(n))
                if any(a) and math.gcd(*a) == 1:
                    break
            M = complete_to_unimodular(a)
            assert M.transpose().apply(a) == (0,) * (n - 1) + (1,)

    def test_rejects_imprimitive(self):
        with pytest.raises(ValueError):
            complete_to_unimodular((2, 4))

    def test_rejects_non_unimodular_matrix(self):
        with pytest.raises(ValueError):
            UnimodularMap(((2, 0), (0, 1)))

    def test_inverse(self):
        M = UnimodularMap(((1, 2, 0), (0, 1, 3), (0, 0, 1)))
        Minv = M.inverse()
        v = (5, -2, 7)
        assert Minv.apply(M.apply(v)) == v


class TestPencil:
    def test_identity_table(self):
        S = PolySystem(2, [P.from_terms(2, [(1, (2, 0))]), P.from_terms(2, [(1, (0, 2))])])
        assert pencil_combine(S, {}) == S

    def test_monomial_mixing(self):
        S = PolySystem(1, [P.from_terms(1, [(1, (2,))]), P.from_terms(1, [(1, (3,))])])
        g = pencil_combine(S, {(1, 0, 0): 1})
        assert g.polys[1] == P.from_terms(1, [(2, (3,))])

    def test_degrees_preserved_random(self):
        rng = random.Random(29)
        for _ in range(50):
            n = rng.randint(1, 3)
            degs = sorted(rng.choice([2, 3, 4]) for _ in range(rng.randint(1, 3)))
            polys = []
            for d in degs:
                f = random_poly(rng, n, d)
                while f.degree() != d:
                    f = f + P.variable(n, rng.randrange(n), d)
                    if f.degree() != d:
                        f = random_poly(rng, n, d)
                polys.append(f)
            S = PolySystem(n, polys)
            table = {}
            ds = S.degrees()
            for i in range(1, S.r):
                for j in range(i):
                    if ds[j] == ds[i]:
                        table[(i, j)] = rng.randint(-2, 2)
                    else:
                        table[(i, j, rng.randrange(n))] = rng.randint(-2, 2)
            g = pencil_combine(S, table)
            assert g.degrees() == S.degrees()
            back = pencil_invert(g, table)
            assert list(back.polys) == list(S.polys)

    def test_bad_tables_rejected(self):
        S = PolySystem(1, [P.from_terms(1, [(1, (2,))]), P.from_terms(1, [(1, (3,))])])
        with pytest.raises(ValueError):
            pencil_combine(S, {(0, 1): 1})  # upper triangular
        with pytest.raises(ValueError):
            pencil_combine(S, {(1, 1): 2})  # diagonal must be 1
        with pytest.raises(ValueError):
            pencil_combine(S, {(1, 0): 1})  # unequal degrees need a monomial


class TestGrouping:
    def test_mixed_degrees(self):
        polys = [
            P.from_terms(2, [(1, (2, 0))]),
            P.from_terms(2, [(1, (0, 3))]),
            P.from_terms(2, [(1, (3, 0))]),
            P.from_terms(2, [(1, (2, 2))]),
        ]
        S = PolySystem(2, polys)
        groups, suffixes = group_by_degree(S)
        assert [len(groups[d]) for d in (2, 3, 4)] == [1, 2, 1]
        assert suffixes[0].degrees() == (2, 3, 3, 4)
        assert suffixes[1].degrees() == (3, 3, 4)
        assert suffixes[2].degrees() == (4,)

    def test_equal_degrees(self):
        S = PolySystem(2, [P.from_terms(2, [(1, (4, 0))]), P.from_terms(2, [(1, (0, 4))])])
        _, suffixes = group_by_degree(S)
        for i in range(3):
            assert suffixes[i].r == 2

    def test_single_member(self):
        S = PolySystem(1, [P.from_terms(1, [(1, (4,))])])
        _, suffixes = group_by_degree(S)
        assert suffixes[2].r == 1

    def test_degree_one_rejected(self):
        with pytest.raises(ValueError):
            PolySystem(2, [P.variable(2, 0)])


def test_degree_sentinel():
    assert P.zero(2).degree() is NEG_INF
    assert NEG_INF < 0


def test_canonical_text_roundtrip():
    rng = random.Random(31)
    for _ in range(30):
        f = random_poly(rng, 3, 4)
        assert P.from_text(3, f.to_text()) == f
