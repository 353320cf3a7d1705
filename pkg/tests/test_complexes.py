"""Monoidal complexes, their rings, orbits, and classification."""

import random
from fractions import Fraction

import pytest

from torf.errors import (
    BadLatticeFamily,
    CompatibilityFailure,
    GenerationFailure,
    NotASubfan,
)
from torf.cones import (
    cone_from_generators,
    face_fan_closure,
    faces,
    fan_validate,
)
from torf.complexes import (
    RingElem,
    classify,
    complex_from_lattice_family,
    complex_from_monoid_subfan,
    complex_validate,
    components,
    full_complex,
    germ_at,
    in_support,
    is_seminormal_complex,
    is_weakly_normal_complex,
    orbits,
    ring_add,
    ring_mult,
    ring_restrict,
    sn_complex,
    subcomplex,
    support_box,
    support_locate,
    wn_complex,
)
from torf.linalg import Sublattice
from torf.monoids import AffineMonoid, Characteristic, member, monoid_cone, monoid_equal

QUAD = cone_from_generators(2, [(1, 0), (0, 1)])
XRAY = cone_from_generators(2, [(1, 0)])
YRAY = cone_from_generators(2, [(0, 1)])
ZERO2 = cone_from_generators(2, [])


def n2_complex():
    return full_complex(face_fan_closure(2, [QUAD]))


def axes_complex():
    s = AffineMonoid.make(2, [(1, 0), (0, 1)])
    return complex_from_monoid_subfan(s, fan_validate(2, [XRAY, YRAY, ZERO2]))


def pinch_complex():
    s = AffineMonoid.make(2, [(2, 0), (0, 1), (1, 1)])
    return complex_from_monoid_subfan(s, face_fan_closure(2, [monoid_cone(s)]))


class TestValidation:
    def test_full_complex_valid(self):
        x = n2_complex()
        assert len(x.cones()) == 4

    def test_generation_failure(self):
        table = {c: AffineMonoid.make(2, [g for g in [(1, 0), (0, 1)] if c.contains(g)])
                 for c in faces(QUAD)}
        table[QUAD] = AffineMonoid.make(2, [(1, 0)])
        with pytest.raises(GenerationFailure):
            complex_validate(2, face_fan_closure(2, [QUAD]), table)

    def test_incompatible_face_monoid(self):
        s = AffineMonoid.make(2, [(2, 0), (0, 1), (1, 1)])
        table = {c: AffineMonoid.make(2, [g for g in s.generators if c.contains(g)])
                 for c in faces(QUAD)}
        table[XRAY] = AffineMonoid.make(2, [(4, 0)])
        with pytest.raises(CompatibilityFailure) as exc:
            complex_validate(2, face_fan_closure(2, [QUAD]), table)
        assert exc.value.witness == (2, 0)


class TestSupport:
    def test_locate(self):
        x = n2_complex()
        assert support_locate(x, (1, 1)) == QUAD
        assert support_locate(x, (3, 0)) == XRAY
        assert support_locate(x, (0, 0)) == ZERO2
        assert support_locate(x, (-1, 0)) is None

    def test_locate_respects_monoid(self):
        x = pinch_complex()
        assert support_locate(x, (1, 0)) is None
        assert support_locate(x, (2, 0)) == XRAY

    def test_axes_support(self):
        x = axes_complex()
        assert in_support(x, (5, 0)) and in_support(x, (0, 2))
        assert not in_support(x, (1, 1))

    def test_locate_unique_on_box(self):
        x = pinch_complex()
        for m in support_box(x, 5):
            hits = [c for c in x.cones()
                    if support_locate(x, m) == c]
            assert len(hits) == 1


class TestRing:
    def test_truncated_product(self):
        x = axes_complex()
        a = RingElem.make(x, {(1, 0): 1})
        b = RingElem.make(x, {(0, 1): 1})
        assert ring_mult(x, a, b) == RingElem.zero()
        c = RingElem.make(x, {(2, 0): 1})
        assert ring_mult(x, a, c) == RingElem.make(x, {(3, 0): 1})

    def test_unit(self):
        x = axes_complex()
        one = RingElem.make(x, {(0, 0): 1})
        a = RingElem.make(x, {(1, 0): 2, (0, 3): Fraction(-1, 2)})
        assert ring_mult(x, one, a) == a
        assert ring_mult(x, a, one) == a

    def _random_elem(self, x, rng, degs):
        picks = rng.sample(degs, min(3, len(degs)))
        return RingElem.make(
            x, {m: Fraction(rng.randint(-4, 4)) for m in picks}
        )

    def test_commutative_associative(self):
        rng = random.Random(40)
        for x in (axes_complex(), pinch_complex()):
            degs = support_box(x, 4)
            for _ in range(25):
                a = self._random_elem(x, rng, degs)
                b = self._random_elem(x, rng, degs)
                c = self._random_elem(x, rng, degs)
                assert ring_mult(x, a, b) == ring_mult(x, b, a)
                assert ring_mult(x, ring_mult(x, a, b), c) == ring_mult(
                    x, a, ring_mult(x, b, c)
                )

    def test_restriction_is_ring_map(self):
        rng = random.Random(41)
        x = n2_complex()
        y = subcomplex(x, fan_validate(2, [XRAY, YRAY, ZERO2]))
        degs = support_box(x, 3)
        for _ in range(25):
            a = self._random_elem(x, rng, degs)
            b = self._random_elem(x, rng, degs)
            lhs = ring_restrict(x, y, ring_mult(x, a, b))
            rhs = ring_mult(y, ring_restrict(x, y, a), ring_restrict(x, y, b))
            assert lhs == rhs

    def test_restriction_additive(self):
        x = n2_complex()
        y = subcomplex(x, fan_validate(2, [XRAY, YRAY, ZERO2]))
        a = RingElem.make(x, {(1, 1): 1, (2, 0): 3})
        b = RingElem.make(x, {(1, 1): -1, (0, 1): 2})
        assert ring_restrict(x, y, ring_add(a, b)) == ring_add(
            ring_restrict(x, y, a), ring_restrict(x, y, b)
        )


class TestOrbits:
    def test_n2_table(self):
        t = orbits(n2_complex())
        assert len(t.rows) == 4
        assert sum(1 for r in t.rows if r[2]) == 1  # one facet
        closed = [r for r in t.rows if r[3]]
        assert len(closed) == 1 and closed[0][0] == ZERO2

    def test_components_of_crossing_lines(self):
        s = AffineMonoid.make(2, [(1, 0), (0, 1)])
        x = complex_from_monoid_subfan(s, fan_validate(2, [XRAY, YRAY, ZERO2]))
        comps = components(x)
        assert len(comps) == 2
        assert {len(c.cones()) for c in comps} == {2}

    def test_subcomplex_at_minimal_cone(self):
        x = n2_complex()
        y = subcomplex(x, fan_validate(2, [ZERO2]))
        assert len(y.cones()) == 1

    def test_subfan_check(self):
        x = n2_complex()
        other = cone_from_generators(2, [(1, 1)])
        with pytest.raises(NotASubfan):
            subcomplex(x, fan_validate(2, [other, ZERO2]))


class TestNormalization:
    def test_sn_of_numeric_semigroup_complex(self):
        s = AffineMonoid.make(1, [(2,), (3,)])
        x = complex_from_monoid_subfan(s, face_fan_closure(1, [monoid_cone(s)]))
        y = sn_complex(x)
        top = y.monoid_of(monoid_cone(s))
        assert top.generators == ((1,),)

    def test_wn_of_pinch(self):
        x = pinch_complex()
        y = wn_complex(x, Characteristic(2))
        assert y.monoid_of(QUAD).generators == ((0, 1), (1, 0))
        # characteristic 3 leaves the pinch untouched
        z = wn_complex(x, Characteristic(3))
        for c in x.cones():
            assert monoid_equal(z.monoid_of(c), x.monoid_of(c))

    def test_idempotence(self):
        x = pinch_complex()
        y = sn_complex(x)
        z = sn_complex(y)
        for c in y.cones():
            assert monoid_equal(y.monoid_of(c), z.monoid_of(c))

    def test_predicates(self):
        assert is_seminormal_complex(pinch_complex())
        assert not is_weakly_normal_complex(pinch_complex(), Characteristic(2))
        assert is_seminormal_complex(axes_complex())
        s = AffineMonoid.make(1, [(2,), (3,)])
        x = complex_from_monoid_subfan(s, face_fan_closure(1, [monoid_cone(s)]))
        assert not is_seminormal_complex(x)

    def test_predicate_matches_fixed_point(self):
        for x in (pinch_complex(), axes_complex(), n2_complex()):
            y = sn_complex(x)
            fixed = all(
                monoid_equal(y.monoid_of(c), x.monoid_of(c)) for c in x.cones()
            )
            assert fixed == is_seminormal_complex(x)


class TestClassification:
    def test_classify_n2(self):
        fam = classify(n2_complex())
        assert fam[QUAD] == Sublattice.full(2)
        assert fam[XRAY].basis_vectors() == [(1, 0)]

    def test_pinch_from_family(self):
        fam = {
            QUAD: Sublattice.full(2),
            XRAY: Sublattice.from_generators(2, [(2, 0)]),
            YRAY: Sublattice.from_generators(2, [(0, 1)]),
            ZERO2: Sublattice.zero(2),
        }
        x = complex_from_lattice_family(face_fan_closure(2, [QUAD]), fam)
        p = pinch_complex()
        for c in x.cones():
            assert monoid_equal(x.monoid_of(c), p.monoid_of(c))

    def test_roundtrip(self):
        for x in (n2_complex(), pinch_complex(), axes_complex()):
            fam = classify(x)
            if not is_seminormal_complex(x):
                continue
            y = complex_from_lattice_family(x.fan, fam)
            assert classify(y) == fam
            for c in x.cones():
                assert monoid_equal(x.monoid_of(c), y.monoid_of(c))

    def test_bad_nesting_rejected(self):
        fam = {
            QUAD: Sublattice.from_generators(2, [(3, 0), (0, 1)]),
            XRAY: Sublattice.from_generators(2, [(2, 0)]),
            YRAY: Sublattice.from_generators(2, [(0, 1)]),
            ZERO2: Sublattice.zero(2),
        }
        with pytest.raises(BadLatticeFamily):
            complex_from_lattice_family(face_fan_closure(2, [QUAD]), fam)

    def test_infinite_index_rejected(self):
        fam = {
            QUAD: Sublattice.from_generators(2, [(1, 0)]),
            XRAY: Sublattice.from_generators(2, [(1, 0)]),
            YRAY: Sublattice.from_generators(2, [(0, 1)]),
            ZERO2: Sublattice.zero(2),
        }
        with pytest.raises(BadLatticeFamily):
            complex_from_lattice_family(face_fan_closure(2, [QUAD]), fam)


class TestGerms:
    def test_germ_at_ray(self):
        x = n2_complex()
        g = germ_at(x, XRAY)
        assert len(g.cones()) == 2
        half = [c for c in g.cones() if c.dim == 2][0]
        s = g.monoid_of(half)
        assert member(s, (-3, 0)) and member(s, (2, 1))
        assert not member(s, (0, -1))

    def test_germ_at_minimal_is_identity(self):
        x = n2_complex()
        g = germ_at(x, ZERO2)
        assert g == x

    def test_germ_minimal_cone_is_lineality(self):
        x = n2_complex()
        g = germ_at(x, XRAY)
        from torf.cones import fan_minimal_cone

        mini = fan_minimal_cone(g.fan)
        assert mini.rays == () and mini.lin_dim == 1
