"""h-differential forms on toric face rings and exact Betti numbers.

The module A^p of a weakly normal complex splits over support degrees m into
finite pieces chi^m wedge^p V_m, where V_m is spanned by the stratum lattice
at the cone containing m in its relative interior.  The differential is the
degree-preserving Koszul map alpha(m) wedge -, so all cohomology is computed
fiberwise by exact integer rank computations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import (
    ConeNotInFan,
    DegreeNotInSupport,
    NotWeaklyNormal,
)
from .cones import Cone, Fan
from .complexes import (
    MonoidalComplex,
    degrees_multiply,
    in_support,
    is_weakly_normal_complex,
    subcomplex,
    support_box,
    support_locate,
    wn_complex,
)
from .linalg import IntMatrix, det, rank, solve_integer, vec_add
from .monoids import Characteristic, box_points, member, monoid_gp, relint_contains


@dataclass(frozen=True)
class FormSpace:
    """The rational span of the stratum lattice at a support degree."""

    degree: tuple
    cone: Cone
    basis: tuple  # canonical lattice basis columns of gp(S_{sigma_m})

    @property
    def dim(self):
        return len(self.basis)


@dataclass(frozen=True)
class GradedForm:
    """Finite sum of terms chi^m eta_m with eta_m a p-multivector at m.

    Coordinates are exact rationals in the lexicographic wedge basis of the
    FormSpace at each degree; zero multivectors are never stored.
    """

    p: int
    terms: tuple  # ((m, coords tuple of Fraction), ...) sorted by m


@dataclass(frozen=True)
class FiberComplex:
    """Koszul complex (wedge^* V_m, alpha(m) wedge -) at one degree."""

    degree: tuple
    dim: int
    matrices: tuple  # matrices[p]: wedge^p -> wedge^{p+1}, IntMatrix


@dataclass(frozen=True)
class BettiTable:
    dims: tuple
    mode: str


@lru_cache(maxsize=None)
def _weakly_normal_checked(x: MonoidalComplex) -> bool:
    return is_weakly_normal_complex(x, Characteristic(0))


def _require_weakly_normal(x: MonoidalComplex):
    if not _weakly_normal_checked(x):
        raise NotWeaklyNormal(
            "complex is not weakly normal; use hdiff_general for the pushforward"
        )


def fiber_space(x: MonoidalComplex, m) -> FormSpace:
    """The form space V_m at a support degree."""
    _require_weakly_normal(x)
    m = tuple(int(v) for v in m)
    c = support_locate(x, m)
    if c is None:
        raise DegreeNotInSupport(f"degree {m} is not in the support")
    lat = monoid_gp(x.monoid_of(c))
    return FormSpace(m, c, tuple(lat.basis_vectors()))


def alpha(x: MonoidalComplex, m):
    """Integer coordinates of m in the canonical basis of V_m."""
    fs = fiber_space(x, m)
    if fs.dim == 0:
        return ()
    b = IntMatrix.from_cols([tuple(v) for v in fs.basis], nrows=x.ambient_rank)
    y = solve_integer(b, fs.degree)
    assert y is not None, "support degree must lie in its stratum lattice"
    return y


def wedge_basis(dim, p):
    """Lexicographically ordered p-subsets of basis indices."""
    return list(itertools.combinations(range(dim), p))


def _wedge_map(a, dim, p) -> IntMatrix:
    """Matrix of (a wedge -): wedge^p -> wedge^{p+1} in lexicographic bases."""
    dom = wedge_basis(dim, p)
    cod = wedge_basis(dim, p + 1)
    pos = {t: i for i, t in enumerate(cod)}
    rows = [[0] * len(dom) for _ in cod]
    for j, t in enumerate(dom):
        for i in range(dim):
            if i in t:
                continue
            sign = (-1) ** sum(1 for s in t if s < i)
            u = tuple(sorted(t + (i,)))
            rows[pos[u]][j] += sign * a[i]
    return IntMatrix.from_rows(rows, ncols=len(dom))


@lru_cache(maxsize=None)
def fiber_complex(x: MonoidalComplex, m) -> FiberComplex:
    a = alpha(x, m)
    d = len(a)
    mats = tuple(_wedge_map(a, d, p) for p in range(d))
    for p in range(d - 1):
        prod = mats[p + 1].mul(mats[p])
        assert all(e == 0 for e in prod.entries), "Koszul maps must compose to zero"
    return FiberComplex(tuple(m), d, mats)


def fiber_cohomology(fc: FiberComplex):
    """Exact cohomology dimensions h^0..h^dim of the Koszul fiber."""
    d = fc.dim
    ranks = [rank(mat) for mat in fc.matrices]
    dims = []
    for p in range(d + 1):
        h = comb(d, p)
        if p < d:
            h -= ranks[p]
        if p > 0:
            h -= ranks[p - 1]
        dims.append(h)
    return dims


# ---------------------------------------------------------------------------
# graded forms


def make_form(x: MonoidalComplex, p, mapping) -> GradedForm:
    """Build a GradedForm from {degree: coordinate tuple}, validating shapes."""
    clean = []
    for m, coords in dict(mapping).items():
        m = tuple(int(v) for v in m)
        fs = fiber_space(x, m)
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != comb(fs.dim, p):
            raise ValueError(
                f"multivector at {m} must have {comb(fs.dim, p)} coordinates"
            )
        if any(c != 0 for c in coords):
            clean.append((m, coords))
    return GradedForm(p, tuple(sorted(clean)))


def form_add(a: GradedForm, b: GradedForm) -> GradedForm:
    assert a.p == b.p
    acc = {}
    for m, coords in a.terms + b.terms:
        if m in acc:
            acc[m] = tuple(x + y for x, y in zip(acc[m], coords))
        else:
            acc[m] = coords
    terms = tuple(sorted(
        (m, c) for m, c in acc.items() if any(v != 0 for v in c)
    ))
    return GradedForm(a.p, terms)


def differential(x: MonoidalComplex, w: GradedForm) -> GradedForm:
    """Termwise alpha(m) wedge -, preserving each degree m."""
    out = []
    for m, coords in w.terms:
        fc = fiber_complex(x, m)
        if w.p >= fc.dim:
            continue
        mat = fc.matrices[w.p]
        new = tuple(
            sum(Fraction(mat.entry(i, j)) * coords[j] for j in range(mat.cols))
            for i in range(mat.rows)
        )
        if any(c != 0 for c in new):
            out.append((m, new))
    return GradedForm(w.p + 1, tuple(sorted(out)))


def _inclusion_matrix(x: MonoidalComplex, m_small, m_big) -> IntMatrix:
    """Coordinates of V_{m_small}'s basis inside V_{m_big}'s basis."""
    fs = fiber_space(x, m_small)
    fb = fiber_space(x, m_big)
    big = IntMatrix.from_cols([tuple(v) for v in fb.basis], nrows=x.ambient_rank)
    cols = []
    for v in fs.basis:
        y = solve_integer(big, tuple(v))
        assert y is not None, "stratum lattices must be nested along multiplication"
        cols.append(y)
    return IntMatrix.from_cols(cols, nrows=fb.dim)


def _wedge_power(mat: IntMatrix, p) -> IntMatrix:
    """p-th exterior power in lexicographic wedge bases (minors)."""
    dom = wedge_basis(mat.cols, p)
    cod = wedge_basis(mat.rows, p)
    rows = []
    for u in cod:
        row = []
        for t in dom:
            minor = IntMatrix.from_rows(
                [[mat.entry(i, j) for j in t] for i in u], ncols=p
            )
            row.append(det(minor) if p > 0 else 1)
        rows.append(row)
    return IntMatrix.from_rows(rows, ncols=len(dom))


def module_action(x: MonoidalComplex, mp, w: GradedForm) -> GradedForm:
    """Multiplication by chi^{mp}: shift surviving terms and include multivectors."""
    mp = tuple(int(v) for v in mp)
    if not in_support(x, mp):
        raise DegreeNotInSupport(f"degree {mp} is not in the support")
    acc = {}
    for m, coords in w.terms:
        if not degrees_multiply(x, mp, m):
            continue
        m2 = vec_add(m, mp)
        wp = _wedge_power(_inclusion_matrix(x, m, m2), w.p)
        new = tuple(
            sum(Fraction(wp.entry(i, j)) * coords[j] for j in range(wp.cols))
            for i in range(wp.rows)
        )
        if m2 in acc:
            new = tuple(a + b for a, b in zip(acc[m2], new))
        acc[m2] = new
    terms = tuple(sorted(
        (m, c) for m, c in acc.items() if any(v != 0 for v in c)
    ))
    return GradedForm(w.p, terms)


def restrict(x: MonoidalComplex, w: GradedForm, t: Cone) -> GradedForm:
    """Combinatorial restriction to the closed subvariety at t: keep m in t."""
    if t not in x.fan:
        raise ConeNotInFan(f"cone not in the complex fan: {t}")
    return GradedForm(w.p, tuple((m, c) for m, c in w.terms if t.contains(m)))


# ---------------------------------------------------------------------------
# pairs and Betti numbers


def pair_degree_filter(x: MonoidalComplex, subfan: Fan):
    """Predicate selecting the degrees of A^p(X, Y): in |X| but not in |Y|."""
    y = subcomplex(x, subfan)
    return lambda m: in_support(x, m) and not in_support(y, m)


def betti(x: MonoidalComplex, pair_subfan=None, box_bound=4, theoretical=False) -> BettiTable:
    """Betti numbers of the affine model from the global de Rham complex.

    Theoretical mode keeps only the degree m = 0 (the unique degree with
    alpha(m) = 0 in characteristic zero); box mode sums fiber cohomology over
    all support degrees in the box, which must agree since nonzero alpha
    forces an exact Koszul fiber.
    """
    _require_weakly_normal(x)
    n = x.ambient_rank
    keep = (lambda m: True) if pair_subfan is None else pair_degree_filter(x, pair_subfan)
    total = [0] * (n + 1)
    if theoretical:
        zero = tuple(0 for _ in range(n))
        degrees = [zero] if in_support(x, zero) and keep(zero) else []
    else:
        degrees = [m for m in support_box(x, box_bound) if keep(m)]
    for m in degrees:
        dims = fiber_cohomology(fiber_complex(x, m))
        for p, h in enumerate(dims):
            total[p] += h
    return BettiTable(tuple(total), "theoretical" if theoretical else f"box-truncated({box_bound})")


def pair_dims(x: MonoidalComplex, subfan: Fan, p, box_bound):
    """Per-degree dimension of the A^p(X, Y) fiber over a box, with the
    orbit-wise decomposition over cones outside the subfan.

    Returns (per_degree, decomposition); the two are checked against each
    other degree by degree.
    """
    _require_weakly_normal(x)
    keep = pair_degree_filter(x, subfan)
    per_degree = {}
    for m in support_box(x, box_bound):
        if keep(m):
            per_degree[m] = comb(fiber_space(x, m).dim, p)
    decomposition = {}
    sub_cones = set(subfan)
    for c, s in x.assignment:
        if c in sub_cones:
            continue
        block = {}
        for m in box_points(x.ambient_rank, box_bound):
            if relint_contains(c, m) and member(s, m):
                block[tuple(m)] = comb(c.dim, p)
        decomposition[c] = block
    flat = {}
    for block in decomposition.values():
        for m, d in block.items():
            assert m not in flat, "orbit degrees must be disjoint"
            flat[m] = d
    assert flat == per_degree, "orbit decomposition must match the fiber dimensions"
    return per_degree, decomposition


def hdiff_general(x: MonoidalComplex, p, box_bound):
    """Per-degree h-differential dimensions of a possibly non-weakly-normal
    complex, computed on its characteristic-zero weak normalization."""
    w = wn_complex(x, Characteristic(0))
    return {m: comb(fiber_space(w, m).dim, p) for m in support_box(w, box_bound)}
