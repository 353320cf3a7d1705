"""Exact integer linear algebra: normal forms, kernels, sublattices."""

import random

import pytest

from torf.errors import NotASublattice
from torf.linalg import (
    IntMatrix,
    Sublattice,
    det,
    hnf,
    kernel_cols,
    lattice_contains,
    lattice_index,
    lattice_sum,
    member_lattice,
    rank,
    saturate,
    snf,
    solve_integer,
)


def random_matrix(rng, rows, cols, lo=-6, hi=6):
    return IntMatrix.from_rows(
        [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], ncols=cols
    )


def is_unimodular(u):
    return u.rows == u.cols and abs(det(u)) == 1


class TestHNF:
    def test_diagonal_example(self):
        a = IntMatrix.from_rows([[2, 0], [0, 3]])
        h, u = hnf(a)
        assert h == IntMatrix.from_rows([[2, 0], [0, 3]])
        assert is_unimodular(u)

    def test_transform_relation(self):
        rng = random.Random(11)
        for _ in range(50):
            a = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            h, u = hnf(a)
            assert a.mul(u) == h
            assert is_unimodular(u)

    def test_pivots_positive_and_reduced(self):
        rng = random.Random(12)
        for _ in range(50):
            a = random_matrix(rng, 3, 3)
            h, _u = hnf(a)
            for j in range(h.cols):
                col = h.col(j)
                nz = [i for i, x in enumerate(col) if x != 0]
                if not nz:
                    continue
                piv_row = nz[0]
                piv = col[piv_row]
                assert piv > 0
                # entries left of the pivot in its row are reduced mod pivot
                for k in range(j):
                    assert 0 <= h.entry(piv_row, k) < piv


class TestSNF:
    def test_example(self):
        a = IntMatrix.from_rows([[2, 0], [0, 3]])
        d, u, v = snf(a)
        assert d == IntMatrix.from_rows([[1, 0], [0, 6]])

    def test_divisibility_and_transforms(self):
        rng = random.Random(13)
        for _ in range(50):
            a = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            d, u, v = snf(a)
            assert u.mul(a).mul(v) == d
            assert is_unimodular(u) and is_unimodular(v)
            diag = [d.entry(i, i) for i in range(min(d.rows, d.cols))]
            for x, y in zip(diag, diag[1:]):
                if y != 0:
                    assert x != 0 and y % x == 0


class TestRankDet:
    def test_rank_vs_snf(self):
        rng = random.Random(14)
        for _ in range(50):
            a = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
            d, _u, _v = snf(a)
            nonzero = sum(
                1 for i in range(min(d.rows, d.cols)) if d.entry(i, i) != 0
            )
            assert rank(a) == nonzero

    def test_det_multiplicative(self):
        rng = random.Random(15)
        for _ in range(30):
            a = random_matrix(rng, 3, 3)
            b = random_matrix(rng, 3, 3)
            assert det(a.mul(b)) == det(a) * det(b)


class TestSolveKernel:
    def test_solve_roundtrip(self):
        rng = random.Random(16)
        for _ in range(50):
            a = random_matrix(rng, 3, rng.randint(1, 3))
            x = tuple(rng.randint(-5, 5) for _ in range(a.cols))
            v = a.mul_vec(x)
            y = solve_integer(a, v)
            assert y is not None
            assert a.mul_vec(y) == v

    def test_solve_none_outside_lattice(self):
        a = IntMatrix.from_cols([(2, 0), (0, 2)], nrows=2)
        assert solve_integer(a, (1, 0)) is None

    def test_kernel_example(self):
        a = IntMatrix.from_rows([[2, 4]])
        k = kernel_cols(a)
        assert k.cols == 1
        x = k.col(0)
        assert a.mul_vec(x) == (0,)
        assert x in ((2, -1), (-2, 1))

    def test_kernel_is_saturated(self):
        rng = random.Random(17)
        for _ in range(30):
            a = random_matrix(rng, 2, 4)
            k = kernel_cols(a)
            lat = Sublattice.from_generators(4, [k.col(j) for j in range(k.cols)])
            assert saturate(lat) == lat


class TestSublattice:
    def test_canonical_basis_independent_of_generators(self):
        rng = random.Random(18)
        for _ in range(30):
            gens = [tuple(rng.randint(-4, 4) for _ in range(3)) for _ in range(4)]
            lat = Sublattice.from_generators(3, gens)
            doubled = Sublattice.from_generators(3, gens + gens + [lat.basis_vectors()[0] if lat.rank else (0, 0, 0)])
            assert lat == doubled

    def test_membership(self):
        lat = Sublattice.from_generators(2, [(2, 0), (0, 3)])
        assert member_lattice(lat, (4, 3))
        assert not member_lattice(lat, (1, 0))
        assert member_lattice(lat, (0, 0))

    def test_index(self):
        lat = Sublattice.from_generators(2, [(2, 0), (0, 3)])
        assert lattice_index(lat, Sublattice.full(2)) == 6

    def test_index_infinite(self):
        line = Sublattice.from_generators(2, [(1, 0)])
        assert lattice_index(line, Sublattice.full(2)) is None

    def test_index_requires_containment(self):
        a = Sublattice.from_generators(2, [(2, 0), (0, 1)])
        b = Sublattice.from_generators(2, [(3, 0), (0, 1)])
        with pytest.raises(NotASublattice):
            lattice_index(a, b)

    def test_saturation(self):
        lat = Sublattice.from_generators(2, [(2, 2)])
        sat = saturate(lat)
        assert sat.basis_vectors() == [(1, 1)]

    def test_saturate_idempotent(self):
        rng = random.Random(19)
        for _ in range(30):
            gens = [tuple(rng.randint(-4, 4) for _ in range(3)) for _ in range(2)]
            s = saturate(Sublattice.from_generators(3, gens))
            assert saturate(s) == s

    def test_sum_and_containment(self):
        a = Sublattice.from_generators(2, [(2, 0)])
        b = Sublattice.from_generators(2, [(0, 3)])
        s = lattice_sum(a, b)
        assert lattice_contains(s, a) and lattice_contains(s, b)
        assert member_lattice(s, (2, 3))
