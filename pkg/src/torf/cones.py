"""Rational polyhedral cones and fans, with exact dual descriptions.

Cones are stored in a canonical form so that equality is structural:

* `rays`: primitive extreme rays, reduced modulo the lineality lattice,
  sorted lexicographically;
* `lin_basis`: canonical HNF basis of the lineality lattice;
* `ineqs`: irredundant facet normals, reduced modulo the span-orthogonal
  lattice, primitive, sorted;
* `eqs`: canonical HNF basis of the lattice of covectors vanishing on the
  cone (so the cone is `{x : ineqs >= 0, eqs = 0}`).

The V<->H conversions run the double description method starting from the
full space, which keeps everything exact and handles non-pointed cones and
implicit equalities without special cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BadIntersection,
    ConeNotInFan,
    DimensionMismatch,
    MissingFace,
    NotAFace,
)
from .linalg import (
    Sublattice,
    saturate,
    snf,
    vec_dot,
    vec_is_zero,
    vec_neg,
    vec_primitive,
    vec_scale,
    vec_sub,
)


def dual_rays(n, covectors):
    """V-description of {x in R^n : <a, x> >= 0 for all a}.

    Returns (rays, lineality_basis): the set equals cone(rays) + span(lin),
    with rays extreme modulo the lineality. All vectors primitive integers.
    """
    ineqs = [tuple(a) for a in covectors if not vec_is_zero(tuple(a))]
    lin = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays = []
    processed = []
    for a in ineqs:
        dl = [vec_dot(a, l) for l in lin]
        if any(dl):
            i0 = next(i for i, c in enumerate(dl) if c != 0)
            l0, c0 = lin[i0], dl[i0]
            if c0 < 0:
                l0, c0 = vec_neg(l0), -c0
            lin = [
                vec_primitive(vec_sub(vec_scale(c0, l), vec_scale(vec_dot(a, l), l0)))
                for i, l in enumerate(lin)
                if i != i0
            ]
            rays = [
                vec_primitive(vec_sub(vec_scale(c0, r), vec_scale(vec_dot(a, r), l0)))
                for r in rays
            ]
            rays.append(vec_primitive(l0))
        else:
            vals = {r: vec_dot(a, r) for r in rays}
            plus = [r for r in rays if vals[r] > 0]
            minus = [r for r in rays if vals[r] < 0]
            zero = [r for r in rays if vals[r] == 0]
            new_rays = plus + zero
            if plus and minus:
                tight = {
                    r: frozenset(
                        i for i, b in enumerate(processed) if vec_dot(b, r) == 0
                    )
                    for r in rays
                }
                for rp in plus:
                    for rm in minus:
                        z = tight[rp] & tight[rm]
                        # combinatorial adjacency: no third ray is tight
                        # everywhere rp and rm are both tight
                        if any(
                            z <= tight[r3]
                            for r3 in rays
                            if r3 != rp and r3 != rm
                        ):
                            continue
                        comb = vec_sub(
                            vec_scale(vals[rp], rm), vec_scale(vals[rm], rp)
                        )
                        if not vec_is_zero(comb):
                            new_rays.append(vec_primitive(comb))
            rays = list(dict.fromkeys(new_rays))
        processed.append(a)
    return rays, lin


def _projector(lat: Sublattice):
    """Integer projection Z^n -> Z^n killing a saturated sublattice.

    Built from the Smith form of the basis; the complement is the canonical
    one determined by the (deterministic) SNF transforms.
    """
    n = lat.ambient_rank
    k = lat.rank
    if k == 0:
        return lambda x: tuple(x)
    d, u, v = snf(lat.basis)
    assert all(d.entry(i, i) == 1 for i in range(k)), "projector needs a saturated lattice"
    ev = lat.basis.mul(v)  # n x k, columns: first k columns of U^-1

    def proj(x):
        y = u.mul_vec(tuple(x))
        head = y[:k]
        corr = ev.mul_vec(head)
        return vec_sub(tuple(x), corr)

    return proj


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone in canonical form; hashable, equality is structural."""

    ambient_rank: int
    rays: tuple  # primitive extreme rays mod lineality, sorted
    lin_basis: tuple  # canonical HNF basis of the lineality lattice
    ineqs: tuple  # irredundant facet normals, canonical, sorted
    eqs: tuple  # canonical HNF basis of the covector lattice vanishing on the cone

    @property
    def dim(self):
        return self.ambient_rank - len(self.eqs)

    @property
    def lin_dim(self):
        return len(self.lin_basis)

    @property
    def generators(self):
        """Integer vectors generating the cone: rays plus +-lineality basis."""
        return list(self.rays) + list(self.lin_basis) + [vec_neg(l) for l in self.lin_basis]

    def lineality(self) -> Sublattice:
        return Sublattice.from_generators(self.ambient_rank, list(self.lin_basis))

    def span_lattice(self) -> Sublattice:
        return saturate(Sublattice.from_generators(self.ambient_rank, self.generators))

    def contains(self, v) -> bool:
        if len(v) != self.ambient_rank:
            raise DimensionMismatch("vector length does not match ambient rank")
        v = tuple(v)
        return all(vec_dot(e, v) == 0 for e in self.eqs) and all(
            vec_dot(a, v) >= 0 for a in self.ineqs
        )

    def is_subspace(self) -> bool:
        return not self.rays and not self.ineqs

    def sort_key(self):
        return (self.dim, self.rays, self.lin_basis)

    def __repr__(self):
        return f"Cone(rank={self.ambient_rank}, rays={self.rays}, lin={self.lin_basis})"


def _canonical_lattice_basis(n, vectors):
    lat = saturate(Sublattice.from_generators(n, vectors))
    return tuple(lat.basis_vectors()), lat


def _build_cone(n, dual_r, dual_l):
    """Assemble the canonical Cone whose dual has V-description (dual_r, dual_l)."""
    eqs, eq_lat = _canonical_lattice_basis(n, dual_l)
    pi_eq = _projector(eq_lat)
    ineqs = sorted(
        dict.fromkeys(
            vec_primitive(pi_eq(r)) for r in dual_r if not vec_is_zero(pi_eq(r))
        )
    )
    prim_r, prim_l = dual_rays(n, list(ineqs) + list(eqs) + [vec_neg(e) for e in eqs])
    lin, lin_lat = _canonical_lattice_basis(n, prim_l)
    pi_lin = _projector(lin_lat)
    rays = sorted(
        dict.fromkeys(
            vec_primitive(pi_lin(r)) for r in prim_r if not vec_is_zero(pi_lin(r))
        )
    )
    return Cone(n, tuple(rays), tuple(lin), tuple(ineqs), tuple(eqs))


def cone_from_generators(n, gens) -> Cone:
    """Cone of nonnegative combinations of the given lattice vectors."""
    clean = []
    for g in gens:
        g = tuple(g)
        if len(g) != n:
            raise DimensionMismatch("generator length does not match ambient rank")
        if not vec_is_zero(g):
            clean.append(g)
    dual_r, dual_l = dual_rays(n, clean)  # V-description of the dual cone
    c = _build_cone(n, dual_r, dual_l)
    assert all(c.contains(g) for g in clean), "generator dropped by dual description"
    return c


def cone_from_h(n, ineqs, eqs=()) -> Cone:
    """Cone {x : <a,x> >= 0 for a in ineqs, <e,x> = 0 for e in eqs}, canonicalized."""
    system = [tuple(a) for a in ineqs]
    for e in eqs:
        system.append(tuple(e))
        system.append(vec_neg(tuple(e)))
    r, l = dual_rays(n, system)
    return cone_from_generators(n, list(r) + list(l) + [vec_neg(x) for x in l])


def relint_contains(c: Cone, v) -> bool:
    """True iff v lies in the relative interior of c."""
    if len(v) != c.ambient_rank:
        raise DimensionMismatch("vector length does not match ambient rank")
    v = tuple(v)
    return all(vec_dot(e, v) == 0 for e in c.eqs) and all(
        vec_dot(a, v) > 0 for a in c.ineqs
    )


def relint_point(c: Cone):
    """A lattice point in the relative interior (sum of the extreme rays)."""
    pt = tuple(0 for _ in range(c.ambient_rank))
    for r in c.rays:
        pt = tuple(a + b for a, b in zip(pt, r))
    return pt


@lru_cache(maxsize=None)
def faces(c: Cone):
    """All faces of c, including c itself and its minimal face, canonically ordered.

    Faces are enumerated through the sets of extreme rays annihilated by
    tight inequality subsets; each distinct ray subset is one face.
    """
    n = c.ambient_rank
    ray_list = list(c.rays)
    start = frozenset(range(len(ray_list)))
    seen = {start}
    queue = [start]
    while queue:
        s = queue.pop()
        for a in c.ineqs:
            t = frozenset(i for i in s if vec_dot(a, ray_list[i]) == 0)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    lin_gens = list(c.lin_basis) + [vec_neg(l) for l in c.lin_basis]
    out = []
    for s in seen:
        out.append(cone_from_generators(n, [ray_list[i] for i in sorted(s)] + lin_gens))
    out = sorted(set(out), key=Cone.sort_key)
    return tuple(out)


def is_face_of(t: Cone, s: Cone) -> bool:
    if t.ambient_rank != s.ambient_rank:
        raise DimensionMismatch("ambient ranks differ")
    return t in faces(s)


def intersect(c1: Cone, c2: Cone) -> Cone:
    if c1.ambient_rank != c2.ambient_rank:
        raise DimensionMismatch("ambient ranks differ")
    return cone_from_h(
        c1.ambient_rank, list(c1.ineqs) + list(c2.ineqs), list(c1.eqs) + list(c2.eqs)
    )


def cone_difference(s: Cone, t: Cone) -> Cone:
    """Cone generated by s together with the negatives of a face t (germ construction)."""
    if not is_face_of(t, s):
        raise NotAFace(f"{t} is not a face of {s}")
    return cone_from_generators(
        s.ambient_rank, s.generators + [vec_neg(g) for g in t.generators]
    )


@dataclass(frozen=True)
class Fan:
    """Validated fan: face-closed, pairwise intersections are common faces."""

    ambient_rank: int
    cones: tuple

    def __contains__(self, c):
        return c in self.cones

    def __iter__(self):
        return iter(self.cones)

    def __len__(self):
        return len(self.cones)


def fan_validate(n, cones) -> Fan:
    """Check the fan axioms; report violations instead of repairing them."""
    cone_list = sorted(set(cones), key=Cone.sort_key)
    if not cone_list:
        raise MissingFace(None, None)
    for c in cone_list:
        if c.ambient_rank != n:
            raise DimensionMismatch("cone ambient rank does not match fan")
    present = set(cone_list)
    for c in cone_list:
        for f in faces(c):
            if f not in present:
                raise MissingFace(c, f)
    for i, c1 in enumerate(cone_list):
        for c2 in cone_list[i + 1 :]:
            common = intersect(c1, c2)
            if not (is_face_of(common, c1) and is_face_of(common, c2)):
                raise BadIntersection(c1, c2, witness=relint_point(common))
    return Fan(n, tuple(cone_list))


def face_fan_closure(n, cones) -> Fan:
    """Convenience constructor: close the given cones under faces, then validate."""
    closed = set()
    for c in cones:
        closed.update(faces(c))
    return fan_validate(n, closed)


def fan_facets(f: Fan):
    """Inclusion-maximal cones of the fan."""
    out = []
    for c in f.cones:
        if not any(o != c and is_face_of(c, o) for o in f.cones):
            out.append(c)
    return sorted(out, key=Cone.sort_key)


def fan_minimal_cone(f: Fan) -> Cone:
    """Intersection of all cones of the fan; always a member (and a subspace)."""
    acc = f.cones[0]
    for c in f.cones[1:]:
        acc = intersect(acc, c)
    assert acc in f.cones, "minimal cone of a valid fan must be a member"
    return acc


def star_fan(f: Fan, t: Cone) -> Fan:
    """The germ fan {sigma - t : t < sigma in f}."""
    if t not in f.cones:
        raise ConeNotInFan(f"{t} is not a cone of the fan")
    out = {cone_difference(s, t) for s in f.cones if is_face_of(t, s)}
    return fan_validate(f.ambient_rank, out)
