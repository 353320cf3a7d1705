"""Affine monoids: membership, saturation, seminormalization, weak
normalization, and the face-indexed sublattice classification.

An AffineMonoid is a finitely generated sub-semigroup of Z^n that always
contains 0 (the unital convention; 0 is implicit and never stored).  The
stratified form trades the generator description for one sublattice per
face of the cone, realized as the disjoint union of each lattice with the
relative interior of its face.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor

from .errors import (
    BadLatticeFamily,
    DimensionMismatch,
    GeneratorExtractionIncomplete,
    NotAFace,
    NotFiniteExtension,
)
from .cones import Cone, cone_from_generators, faces, is_face_of, relint_contains
from .linalg import (
    IntMatrix,
    Sublattice,
    kernel_cols,
    lattice_contains,
    lattice_index,
    member_lattice,
    saturate,
    snf,
    solve_integer,
    vec_add,
    vec_dot,
    vec_is_zero,
    vec_neg,
    vec_sub,
)

DEFAULT_BOX_BOUND = 8


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Characteristic:
    """Field characteristic: 0 or a prime."""

    p: int

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"characteristic must be 0 or prime, got {self.p}")


@dataclass(frozen=True)
class AffineMonoid:
    """Finitely generated submonoid of Z^n; 0 is always a member."""

    ambient_rank: int
    generators: tuple

    @staticmethod
    def make(ambient_rank, gens):
        clean = set()
        for g in gens:
            g = tuple(int(x) for x in g)
            if len(g) != ambient_rank:
                raise DimensionMismatch("generator length does not match ambient rank")
            if not vec_is_zero(g):
                clean.add(g)
        return AffineMonoid(ambient_rank, tuple(sorted(clean)))

    def zero(self):
        return tuple(0 for _ in range(self.ambient_rank))


@lru_cache(maxsize=None)
def monoid_gp(s: AffineMonoid) -> Sublattice:
    """The sublattice S - S generated by the generators."""
    return Sublattice.from_generators(s.ambient_rank, list(s.generators))


@lru_cache(maxsize=None)
def monoid_cone(s: AffineMonoid) -> Cone:
    """The rational cone generated by S."""
    return cone_from_generators(s.ambient_rank, list(s.generators))


@lru_cache(maxsize=None)
def _unit_split(s: AffineMonoid):
    """Split generators into units (lying in the cone's lineality) and the
    pointed rest; the units generate the invertible-element lattice."""
    c = monoid_cone(s)
    units, rest = [], []
    for g in s.generators:
        if all(vec_dot(a, g) == 0 for a in c.ineqs):
            units.append(g)
        else:
            rest.append(g)
    return Sublattice.from_generators(s.ambient_rank, units), tuple(rest)


_MEMBER_CACHE = {}


def member(s: AffineMonoid, m) -> bool:
    """Exact membership: m is a nonnegative integer combination of generators.

    Iterative depth-first search on m minus one pointed generator at a time,
    grounded in membership of the unit lattice; pruned by cone and group
    membership, memoized per monoid.
    """
    m = tuple(int(x) for x in m)
    if len(m) != s.ambient_rank:
        raise DimensionMismatch("vector length does not match ambient rank")
    cache = _MEMBER_CACHE.setdefault(s, {})
    if m in cache:
        return cache[m]
    cone = monoid_cone(s)
    gp = monoid_gp(s)
    units, pointed = _unit_split(s)

    def prune(v):
        return not cone.contains(v) or not member_lattice(gp, v)

    stack = [m]
    while stack:
        v = stack[-1]
        if v in cache:
            stack.pop()
            continue
        if prune(v):
            cache[v] = False
            stack.pop()
            continue
        if member_lattice(units, v):
            cache[v] = True
            stack.pop()
            continue
        children = [vec_sub(v, g) for g in pointed]
        children = [c for c in children if cone.contains(c)]
        unknown = [c for c in children if c not in cache]
        if any(cache.get(c) is True for c in children):
            cache[v] = True
            stack.pop()
        elif unknown:
            stack.extend(unknown)
        else:
            cache[v] = any(cache[c] for c in children)
            stack.pop()
    return cache[m]


def monoid_equal(s1: AffineMonoid, s2: AffineMonoid) -> bool:
    """Set equality, decided on generators."""
    if s1.ambient_rank != s2.ambient_rank:
        return False
    return all(member(s2, g) for g in s1.generators) and all(
        member(s1, g) for g in s2.generators
    )


def face_restriction(s: AffineMonoid, t: Cone) -> AffineMonoid:
    """S intersected with a face of its cone (= generators lying in the face)."""
    if not is_face_of(t, monoid_cone(s)):
        raise NotAFace("restriction target is not a face of the monoid cone")
    return AffineMonoid.make(s.ambient_rank, [g for g in s.generators if t.contains(g)])


# ---------------------------------------------------------------------------
# lattice point machinery: parallelepipeds, Hilbert bases


def _solve_rational(a: IntMatrix, v):
    """Solve the square nonsingular system A t = v over the rationals."""
    n = a.rows
    m = [[Fraction(a.entry(i, j)) for j in range(n)] + [Fraction(v[i])] for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if m[i][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(m[i][n] for i in range(n))


def _unimodular_inverse(u: IntMatrix) -> IntMatrix:
    cols = []
    for j in range(u.rows):
        e = tuple(1 if i == j else 0 for i in range(u.rows))
        y = solve_integer(u, e)
        assert y is not None, "matrix is not unimodular"
        cols.append(y)
    return IntMatrix.from_cols(cols, nrows=u.rows)


def coset_reps(sup: Sublattice, sub: Sublattice):
    """Representatives of sup/sub (equal rank), reduced into the half-open
    fundamental parallelepiped of sub's basis inside sup. Ambient coords."""
    assert sup.rank == sub.rank, "coset enumeration needs equal ranks"
    if sup.rank == 0:
        return [tuple(0 for _ in range(sup.ambient_rank))]
    coords = []
    for v in sub.basis_vectors():
        y = solve_integer(sup.basis, v)
        assert y is not None, "sub is not contained in sup"
        coords.append(y)
    a = IntMatrix.from_cols(coords, nrows=sup.rank)
    return _reps_in_parallelepiped(sup.basis, a)


def _reps_in_parallelepiped(b: IntMatrix, a: IntMatrix):
    """Lattice points {B x : x in Z^d} in the half-open parallelepiped spanned
    by the columns of B A; one per coset of A Z^d in Z^d."""
    d = a.rows
    dmat, u, _v = snf(a)
    uinv = _unimodular_inverse(u)
    reps = []
    ranges = [range(dmat.entry(i, i)) for i in range(d)]
    for c in itertools.product(*ranges):
        x = uinv.mul_vec(tuple(c))
        t = _solve_rational(a, x)
        fl = tuple(floor(ti) for ti in t)
        xr = vec_sub(x, a.mul_vec(fl))
        reps.append(b.mul_vec(xr))
    return reps


def _parallelepiped_points(n, vectors):
    """Points of Z^n in the half-open parallelepiped of the given independent vectors."""
    span = saturate(Sublattice.from_generators(n, vectors))
    coords = [solve_integer(span.basis, v) for v in vectors]
    assert all(c is not None for c in coords)
    a = IntMatrix.from_cols(coords, nrows=span.rank)
    return _reps_in_parallelepiped(span.basis, a)


def _triangulate(c: Cone):
    """Pulling triangulation of a pointed cone into simplicial subcones on its rays."""
    if len(c.rays) == c.dim:
        return [c.rays]
    r0 = c.rays[0]
    out = []
    for f in faces(c):
        if f.dim == c.dim - 1 and not f.contains(r0):
            for t in _triangulate(f):
                out.append(t + (r0,))
    return out


def _grading(c: Cone):
    """Covector positive on the pointed part of c: sum of the facet normals."""
    n = c.ambient_rank
    ell = tuple(0 for _ in range(n))
    for a in c.ineqs:
        ell = vec_add(ell, a)
    return ell


@lru_cache(maxsize=None)
def cone_lattice_generators(c: Cone):
    """Generating set of the monoid Z^n intersect c: a canonical lattice basis
    (with negatives) for the lineality part, plus the Hilbert basis of the
    pointed part.  This is the saturation of any monoid generating c."""
    n = c.ambient_rank
    gens = list(c.lin_basis) + [vec_neg(l) for l in c.lin_basis]
    if not c.rays:
        return tuple(gens)
    pointed = cone_from_generators(n, list(c.rays))
    candidates = set(c.rays)
    for simplex in _triangulate(pointed):
        for p in _parallelepiped_points(n, list(simplex)):
            if not vec_is_zero(p):
                candidates.add(p)
    ell = _grading(pointed)
    ordered = sorted(candidates, key=lambda v: (vec_dot(ell, v), v))
    hilbert = []
    for h in ordered:
        if any(
            pointed.contains(vec_sub(h, g)) and not vec_is_zero(vec_sub(h, g))
            for g in candidates
            if g != h
        ):
            continue
        hilbert.append(h)
    return tuple(gens + hilbert)


def saturation(s: AffineMonoid) -> AffineMonoid:
    """The saturation: all lattice points of the cone of S (Hilbert-basis generators)."""
    return AffineMonoid.make(s.ambient_rank, cone_lattice_generators(monoid_cone(s)))


# ---------------------------------------------------------------------------
# stratified monoids (face-indexed sublattice families)


@dataclass(frozen=True)
class StratifiedMonoid:
    """Cone plus one sublattice per face; realizes the disjoint union of each
    lattice with the relative interior of its face."""

    cone: Cone
    strata: tuple  # ((face, Sublattice), ...) sorted by face sort key

    @staticmethod
    def make(cone: Cone, lattice_of, validate=True):
        items = tuple(sorted(
            ((f, lattice_of[f]) for f in faces(cone)), key=lambda kv: kv[0].sort_key()
        ))
        sm = StratifiedMonoid(cone, items)
        if validate:
            sm._validate()
        return sm

    def _validate(self):
        table = dict(self.strata)
        if set(table) != set(faces(self.cone)):
            raise BadLatticeFamily(None, self.cone, "strata must cover every face")
        for f, lat in table.items():
            span = f.span_lattice()
            if not lattice_contains(span, lat):
                raise BadLatticeFamily(f, self.cone, "stratum not inside the face span")
            if lat.rank != f.dim:
                raise BadLatticeFamily(f, self.cone, "stratum does not have finite index")
        for f1 in table:
            for f2 in table:
                if f1 != f2 and is_face_of(f1, f2):
                    if not lattice_contains(table[f2], table[f1]):
                        raise BadLatticeFamily(f1, f2, "strata are not nested along faces")

    def lattice_of(self, face: Cone) -> Sublattice:
        for f, lat in self.strata:
            if f == face:
                return lat
        raise NotAFace("no stratum for the given face")

    def locate(self, m):
        """The unique face containing m in its relative interior, or None."""
        m = tuple(m)
        if not self.cone.contains(m):
            return None
        for f, _lat in self.strata:
            if relint_contains(f, m):
                return f
        return None

    def member(self, m) -> bool:
        f = self.locate(m)
        if f is None:
            return False
        return member_lattice(self.lattice_of(f), m)


def stratify(s: AffineMonoid) -> StratifiedMonoid:
    """The face-indexed family of sublattices gp(S intersect face)."""
    c = monoid_cone(s)
    table = {f: monoid_gp(face_restriction(s, f)) for f in faces(c)}
    return StratifiedMonoid.make(c, table)


def seminormalization(s: AffineMonoid) -> StratifiedMonoid:
    """Stratified form whose realized set is the seminormalization of S."""
    return stratify(s)


def _p_saturation(sub: Sublattice, sup: Sublattice, p: int) -> Sublattice:
    """All x in sup with p^e x in sub for some e >= 0 (sub of finite index in sup)."""
    if p == 0 or sub.rank == 0:
        return sub
    coords = []
    for v in sub.basis_vectors():
        y = solve_integer(sup.basis, v)
        assert y is not None
        coords.append(y)
    a = IntMatrix.from_cols(coords, nrows=sup.rank)
    d, u, _v = snf(a)
    uinv = _unimodular_inverse(u)
    frame = sup.basis.mul(uinv)  # columns e_i with sub spanned by d_i * e_i
    gens = []
    for i in range(sub.rank):
        di = d.entry(i, i)
        while di % p == 0:
            di //= p
        gens.append(tuple(di * x for x in frame.col(i)))
    return Sublattice.from_generators(sup.ambient_rank, gens)


def weak_normalization(s: AffineMonoid, char: Characteristic) -> StratifiedMonoid:
    """p-power saturation of the seminormalization strata inside the saturated
    face lattices; equals the seminormalization when the characteristic is 0."""
    sn = stratify(s)
    if char.p == 0:
        return sn
    table = {}
    for f, lat in sn.strata:
        table[f] = _p_saturation(lat, saturate(lat), char.p)
    return StratifiedMonoid.make(sn.cone, table)


def sn_member_oracle(s: AffineMonoid, m, window=5, search_bound=60) -> bool:
    """Independent seminormalization-membership oracle: look for consecutive
    positive multiples of m inside S, then confirm a run of memberships above
    the resulting conservative bound."""
    m = tuple(int(x) for x in m)
    if len(m) != s.ambient_rank:
        raise DimensionMismatch("vector length does not match ambient rank")
    if window < 1:
        raise ValueError("window must be at least 1")
    if vec_is_zero(m):
        return True
    for a in range(1, search_bound + 1):
        am = tuple(a * x for x in m)
        am1 = vec_add(am, m)
        if member(s, am) and member(s, am1):
            n0 = max(1, a * a - a)
            for n in range(n0, n0 + window + 1):
                assert member(s, tuple(n * x for x in m)), (
                    "consecutive multiples must force a full tail of multiples"
                )
            return True
    return False


# ---------------------------------------------------------------------------
# generator extraction (stratified -> finitely generated)


def box_points(n, bound):
    """All integer vectors of length n with coordinates in [-bound, bound]."""
    return itertools.product(range(-bound, bound + 1), repeat=n)


def _minimal_face(c: Cone) -> Cone:
    """The lineality cone, i.e. the unique subspace face."""
    return min(faces(c), key=lambda f: f.dim)


def _pointed_points_up_to(n, c: Cone, bound):
    """Lattice points of the pointed part of c with grading <= bound."""
    if not c.rays:
        return [tuple(0 for _ in range(n))]
    pointed = cone_from_generators(n, list(c.rays))
    hb = [g for g in cone_lattice_generators(pointed)]
    ell = _grading(pointed)
    zero = tuple(0 for _ in range(n))
    seen = {zero}
    frontier = [zero]
    while frontier:
        v = frontier.pop()
        for h in hb:
            w = vec_add(v, h)
            if w not in seen and vec_dot(ell, w) <= bound:
                seen.add(w)
                frontier.append(w)
    return sorted(seen, key=lambda v: (vec_dot(ell, v), v))


def default_degree_bound(c: Cone) -> int:
    """Twice the maximal grading of the Hilbert basis of the saturated cone monoid."""
    ell = _grading(c)
    degs = [vec_dot(ell, g) for g in cone_lattice_generators(c)]
    return 2 * max([d for d in degs if d > 0], default=1)


def extract_generators(
    cone: Cone,
    member_fn,
    group_lattice: Sublattice,
    degree_bound=None,
    box_bound=DEFAULT_BOX_BOUND,
) -> AffineMonoid:
    """Degree-bounded greedy extraction of a generating set for the set decided
    by `member_fn` (assumed to be a submonoid of Z^n inside `cone`, invariant
    under translation by `group_lattice`, whose intersection with the minimal
    face is exactly `group_lattice`).

    Post-verified on the box {|coords| <= box_bound} intersect cone; raises
    GeneratorExtractionIncomplete on any uncovered element.  When no degree
    bound is given, a heuristic bound is used and doubled on failure a few
    times before giving up.
    """
    n = cone.ambient_rank
    if degree_bound is None:
        degree_bound = default_degree_bound(cone)
        for attempt in range(4):
            try:
                return extract_generators(
                    cone, member_fn, group_lattice,
                    degree_bound=degree_bound << attempt, box_bound=box_bound,
                )
            except GeneratorExtractionIncomplete:
                if attempt == 3:
                    raise
        raise AssertionError("unreachable")
    gens = []
    for b in group_lattice.basis_vectors():
        gens.append(tuple(b))
        gens.append(vec_neg(b))
    # enumeration: pointed-part points plus coset representatives of the
    # lineality lattice modulo the group stratum
    lin_lat = _minimal_face(cone).span_lattice()
    reps = coset_reps(lin_lat, group_lattice)
    pointed = _pointed_points_up_to(n, cone, degree_bound)
    candidates = set()
    for x in pointed:
        for f in reps:
            candidates.add(vec_add(x, f))
    ell = _grading(cone)
    current = AffineMonoid.make(n, gens)
    for m in sorted(candidates, key=lambda v: (vec_dot(ell, v), v)):
        if vec_is_zero(m) or not member_fn(m):
            continue
        if not member(current, m):
            gens.append(m)
            current = AffineMonoid.make(n, gens)
    # completeness check on the verification box
    for v in box_points(n, box_bound):
        if cone.contains(v) and member_fn(v) and not member(current, v):
            raise GeneratorExtractionIncomplete(degree_bound, missing=v)
    return current


def from_strata(strat: StratifiedMonoid, degree_bound=None, box_bound=DEFAULT_BOX_BOUND) -> AffineMonoid:
    """Finite generating set of the realized set of a stratified monoid."""
    group = strat.lattice_of(_minimal_face(strat.cone))
    return extract_generators(
        strat.cone, strat.member, group, degree_bound=degree_bound, box_bound=box_bound
    )


def is_seminormal(s: AffineMonoid) -> bool:
    """S equals its seminormalization: every extracted sn-generator is already in S."""
    sn_gens = from_strata(stratify(s))
    return all(member(s, g) for g in sn_gens.generators)


def is_weakly_normal(s: AffineMonoid, char: Characteristic) -> bool:
    """Seminormal and no stratum index divisible by p (index-of-sublattice criterion)."""
    if not is_seminormal(s):
        return False
    if char.p == 0:
        return True
    for f, lat in stratify(s).strata:
        idx = lattice_index(lat, saturate(lat))
        if idx is not None and idx % char.p == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# relative normalizations inside a finite extension


def _lattice_intersection(a: Sublattice, b: Sublattice) -> Sublattice:
    n = a.ambient_rank
    if a.rank == 0 or b.rank == 0:
        return Sublattice.zero(n)
    cols_a = a.basis_vectors()
    cols_b = [vec_neg(v) for v in b.basis_vectors()]
    stacked = IntMatrix.from_cols(
        [tuple(v) for v in cols_a] + [tuple(v) for v in cols_b], nrows=n
    )
    ker = kernel_cols(stacked)
    gens = []
    for j in range(ker.cols):
        coeffs = ker.col(j)[: a.rank]
        gens.append(
            tuple(sum(coeffs[i] * cols_a[i][r] for i in range(a.rank)) for r in range(n))
        )
    return Sublattice.from_generators(n, gens)


def _relative_precheck(s: AffineMonoid, sp: AffineMonoid):
    if s.ambient_rank != sp.ambient_rank:
        raise DimensionMismatch("ambient ranks differ")
    for g in s.generators:
        if not member(sp, g):
            raise NotFiniteExtension("S is not contained in S'")
    cone = monoid_cone(s)
    for g in sp.generators:
        if not cone.contains(g):
            raise NotFiniteExtension(
                f"generator {g} of S' has no positive multiple in S"
            )


def _relative_extract(s, sp, stratum_member, degree_bound, box_bound):
    cone = monoid_cone(s)
    minf = _minimal_face(cone)
    group = _lattice_intersection(
        monoid_gp(face_restriction(sp, minf)), stratum_member.lattice_of(minf)
    )

    def member_fn(m):
        return member(sp, m) and stratum_member.member(m)

    return extract_generators(cone, member_fn, group,
                              degree_bound=degree_bound, box_bound=box_bound)


def relative_sn(s: AffineMonoid, sp: AffineMonoid,
                degree_bound=None, box_bound=DEFAULT_BOX_BOUND) -> AffineMonoid:
    """Seminormalization of S inside a finite extension S'."""
    _relative_precheck(s, sp)
    return _relative_extract(s, sp, stratify(s), degree_bound, box_bound)


def relative_wn(s: AffineMonoid, sp: AffineMonoid, char: Characteristic,
                degree_bound=None, box_bound=DEFAULT_BOX_BOUND) -> AffineMonoid:
    """Weak normalization of S inside a finite extension S'."""
    _relative_precheck(s, sp)
    return _relative_extract(s, sp, weak_normalization(s, char), degree_bound, box_bound)
