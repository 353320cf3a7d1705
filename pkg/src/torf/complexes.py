"""Monoidal complexes and the combinatorics of their face rings.

A monoidal complex is a fan together with one affine monoid per cone,
compatible along faces.  The associated ring has one basis element per
support degree, with the truncated multiplication rule: a product of two
monomials survives exactly when both degrees live in a common cone monoid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadLatticeFamily,
    CompatibilityFailure,
    ConeNotInFan,
    DegreeNotInSupport,
    DimensionMismatch,
    GenerationFailure,
    NotASubfan,
)
from .cones import (
    Cone,
    Fan,
    cone_difference,
    faces,
    fan_facets,
    fan_minimal_cone,
    fan_validate,
    is_face_of,
    relint_contains,
)
from .linalg import lattice_contains, vec_add, vec_neg
from .monoids import (
    AffineMonoid,
    Characteristic,
    StratifiedMonoid,
    box_points,
    cone_lattice_generators,
    face_restriction,
    from_strata,
    is_seminormal,
    is_weakly_normal,
    member,
    monoid_cone,
    monoid_gp,
    stratify,
    weak_normalization,
)

VALIDATION_BOX_BOUND = 2


@dataclass(frozen=True)
class MonoidalComplex:
    """Fan with one affine monoid per cone, compatible along faces."""

    ambient_rank: int
    fan: Fan
    assignment: tuple  # ((cone, AffineMonoid), ...) in canonical cone order

    def monoid_of(self, c: Cone) -> AffineMonoid:
        for cone, s in self.assignment:
            if cone == c:
                return s
        raise ConeNotInFan(f"cone not in the complex fan: {c}")

    def cones(self):
        return [cone for cone, _s in self.assignment]


def complex_validate(n, fan: Fan, monoid_of, box_bound=VALIDATION_BOX_BOUND) -> MonoidalComplex:
    """Check the monoidal complex axioms and return the validated complex.

    Generation: each monoid generates exactly its assigned cone.  Face
    compatibility S_tau = S_sigma `intersect` tau is checked exactly on
    generators and cross-checked by membership on a small coordinate box.
    """
    fan = fan_validate(n, list(fan))
    table = {}
    for c in fan:
        if c not in monoid_of:
            raise ConeNotInFan(f"no monoid assigned to cone {c}")
        s = monoid_of[c]
        if s.ambient_rank != n:
            raise DimensionMismatch("monoid ambient rank does not match the fan")
        if monoid_cone(s) != c:
            raise GenerationFailure(c)
        table[c] = s
    for sig in fan:
        for tau in fan:
            if tau == sig or not is_face_of(tau, sig):
                continue
            st, ss = table[tau], table[sig]
            for g in st.generators:
                if not member(ss, g):
                    raise CompatibilityFailure(tau, sig, g)
            for g in ss.generators:
                if tau.contains(g) and not member(st, g):
                    raise CompatibilityFailure(tau, sig, g)
            for v in box_points(n, box_bound):
                if tau.contains(v) and member(ss, v) != member(st, v):
                    raise CompatibilityFailure(tau, sig, v)
    assignment = tuple(sorted(table.items(), key=lambda kv: kv[0].sort_key()))
    return MonoidalComplex(n, fan, assignment)


def full_complex(fan: Fan) -> MonoidalComplex:
    """Assign every cone its saturated monoid of lattice points."""
    n = fan.ambient_rank
    table = {c: AffineMonoid.make(n, cone_lattice_generators(c)) for c in fan}
    return complex_validate(n, fan, table)


def complex_from_monoid_subfan(s: AffineMonoid, subfan: Fan) -> MonoidalComplex:
    """Restrict a single monoid to a subfan of its cone's face fan."""
    big = monoid_cone(s)
    for c in subfan:
        if not is_face_of(c, big):
            raise NotASubfan(f"cone {c} is not a face of the monoid cone")
    table = {c: face_restriction(s, c) for c in subfan}
    return complex_validate(s.ambient_rank, subfan, table)


def support_locate(x: MonoidalComplex, m):
    """The unique fan cone with m in its relative interior and m in its monoid,
    or None when m is outside the support."""
    m = tuple(int(v) for v in m)
    for c, s in x.assignment:
        if relint_contains(c, m):
            return c if member(s, m) else None
    return None


def in_support(x: MonoidalComplex, m) -> bool:
    return support_locate(x, m) is not None


def support_box(x: MonoidalComplex, bound):
    """All support degrees with coordinates in [-bound, bound]."""
    return [tuple(v) for v in box_points(x.ambient_rank, bound) if in_support(x, v)]


# ---------------------------------------------------------------------------
# ring arithmetic


@dataclass(frozen=True)
class RingElem:
    """Finite rational linear combination of monomials chi^m, m in the support."""

    terms: tuple  # ((m, Fraction), ...) sorted by m, no zero coefficients

    @staticmethod
    def make(x: MonoidalComplex, mapping) -> "RingElem":
        clean = {}
        for m, c in dict(mapping).items():
            m = tuple(int(v) for v in m)
            c = Fraction(c)
            if c == 0:
                continue
            if not in_support(x, m):
                raise DegreeNotInSupport(f"degree {m} is not in the support")
            clean[m] = clean.get(m, Fraction(0)) + c
        return RingElem(tuple(sorted((m, c) for m, c in clean.items() if c != 0)))

    @staticmethod
    def zero() -> "RingElem":
        return RingElem(())

    def coeff(self, m) -> Fraction:
        m = tuple(m)
        for mm, c in self.terms:
            if mm == m:
                return c
        return Fraction(0)


def ring_add(a: RingElem, b: RingElem) -> RingElem:
    acc = {}
    for m, c in a.terms + b.terms:
        acc[m] = acc.get(m, Fraction(0)) + c
    return RingElem(tuple(sorted((m, c) for m, c in acc.items() if c != 0)))


def ring_scale(c, a: RingElem) -> RingElem:
    c = Fraction(c)
    if c == 0:
        return RingElem.zero()
    return RingElem(tuple((m, c * cc) for m, cc in a.terms))


def degrees_multiply(x: MonoidalComplex, m1, m2) -> bool:
    """Whether chi^m1 * chi^m2 is nonzero: both degrees lie in a common cone
    monoid, detected through the fan (some cone has both locating cones as faces)."""
    c1 = support_locate(x, m1)
    c2 = support_locate(x, m2)
    if c1 is None or c2 is None:
        return False
    return any(is_face_of(c1, c) and is_face_of(c2, c) for c in x.fan)


def ring_mult(x: MonoidalComplex, a: RingElem, b: RingElem) -> RingElem:
    acc = {}
    for m1, c1 in a.terms:
        for m2, c2 in b.terms:
            if degrees_multiply(x, m1, m2):
                m = vec_add(m1, m2)
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
    return RingElem(tuple(sorted((m, c) for m, c in acc.items() if c != 0)))


def ring_restrict(x: MonoidalComplex, y: MonoidalComplex, a: RingElem) -> RingElem:
    """Quotient map onto the subcomplex ring: kill degrees outside the sub-support."""
    return RingElem(tuple((m, c) for m, c in a.terms if in_support(y, m)))


# ---------------------------------------------------------------------------
# orbits, subcomplexes, components


@dataclass(frozen=True)
class OrbitTable:
    rows: tuple  # ((cone, Sublattice, is_facet, is_closed), ...)


def orbits(x: MonoidalComplex) -> OrbitTable:
    facets = set(fan_facets(x.fan))
    minimal = fan_minimal_cone(x.fan)
    rows = tuple(
        (c, monoid_gp(s), c in facets, c == minimal) for c, s in x.assignment
    )
    return OrbitTable(rows)


def _check_subfan(x: MonoidalComplex, subfan: Fan):
    if subfan.ambient_rank != x.ambient_rank:
        raise NotASubfan("ambient rank mismatch")
    for c in subfan:
        if c not in x.fan:
            raise NotASubfan(f"cone {c} is not in the complex fan")


def subcomplex(x: MonoidalComplex, subfan: Fan) -> MonoidalComplex:
    _check_subfan(x, subfan)
    table = {c: x.monoid_of(c) for c in subfan}
    return complex_validate(x.ambient_rank, subfan, table)


def components(x: MonoidalComplex):
    """Irreducible components: the subcomplex over each facet's face closure."""
    out = []
    for f in fan_facets(x.fan):
        sub = Fan(x.ambient_rank, tuple(sorted(faces(f), key=lambda c: c.sort_key())))
        out.append(subcomplex(x, sub))
    return out


# ---------------------------------------------------------------------------
# complex-level normalization and classification


def sn_complex(x: MonoidalComplex, degree_bound=None, box_bound=None) -> MonoidalComplex:
    """Seminormalization, cone by cone; face compatibility is inherited and revalidated."""
    kw = {}
    if degree_bound is not None:
        kw["degree_bound"] = degree_bound
    if box_bound is not None:
        kw["box_bound"] = box_bound
    table = {c: from_strata(stratify(s), **kw) for c, s in x.assignment}
    return complex_validate(x.ambient_rank, x.fan, table)


def wn_complex(x: MonoidalComplex, char: Characteristic,
               degree_bound=None, box_bound=None) -> MonoidalComplex:
    """Weak normalization, cone by cone."""
    kw = {}
    if degree_bound is not None:
        kw["degree_bound"] = degree_bound
    if box_bound is not None:
        kw["box_bound"] = box_bound
    table = {c: from_strata(weak_normalization(s, char), **kw) for c, s in x.assignment}
    return complex_validate(x.ambient_rank, x.fan, table)


def is_seminormal_complex(x: MonoidalComplex) -> bool:
    """Facet-wise seminormality of the cone monoids."""
    return all(is_seminormal(x.monoid_of(f)) for f in fan_facets(x.fan))


def is_weakly_normal_complex(x: MonoidalComplex, char: Characteristic) -> bool:
    """Facet-wise weak normality, equivalent to the stratum-index criterion."""
    return all(is_weakly_normal(x.monoid_of(f), char) for f in fan_facets(x.fan))


def classify(x: MonoidalComplex):
    """The face-indexed sublattice family: cone -> gp of its monoid."""
    return {c: monoid_gp(s) for c, s in x.assignment}


def _validate_family(fan: Fan, family):
    for c in fan:
        if c not in family:
            raise BadLatticeFamily(c, None, "family must assign a lattice to every cone")
        lat = family[c]
        if not lattice_contains(c.span_lattice(), lat):
            raise BadLatticeFamily(c, None, "lattice not inside the cone span")
        if lat.rank != c.dim:
            raise BadLatticeFamily(c, None, "lattice does not have finite index in the span")
    for t in fan:
        for c in fan:
            if t != c and is_face_of(t, c):
                if not lattice_contains(family[c], family[t]):
                    raise BadLatticeFamily(t, c, "lattices are not nested along faces")


def complex_from_lattice_family(fan: Fan, family, degree_bound=None,
                                box_bound=None) -> MonoidalComplex:
    """Inverse of classify on seminormal complexes: realize the family via the
    stratified monoids of each cone and extract generators."""
    fan = fan_validate(fan.ambient_rank, list(fan))
    _validate_family(fan, family)
    kw = {}
    if degree_bound is not None:
        kw["degree_bound"] = degree_bound
    if box_bound is not None:
        kw["box_bound"] = box_bound
    table = {}
    for c in fan:
        strat = StratifiedMonoid.make(c, {f: family[f] for f in faces(c)})
        table[c] = from_strata(strat, **kw)
    return complex_validate(fan.ambient_rank, fan, table)


# ---------------------------------------------------------------------------
# germs


def germ_at(x: MonoidalComplex, t: Cone) -> MonoidalComplex:
    """Localization at the orbit of t: the star fan with monoids S_sigma - S_t."""
    if t not in x.fan:
        raise ConeNotInFan(f"cone not in the complex fan: {t}")
    n = x.ambient_rank
    st = x.monoid_of(t)
    neg = [vec_neg(g) for g in st.generators]
    table = {}
    cones = []
    for c, s in x.assignment:
        if not is_face_of(t, c):
            continue
        diff = cone_difference(c, t)
        assert diff not in table, "star correspondence must be one to one"
        table[diff] = AffineMonoid.make(n, list(s.generators) + neg)
        cones.append(diff)
    star = Fan(n, tuple(sorted(cones, key=lambda c: c.sort_key())))
    return complex_validate(n, star, table)
