import itertools
import random

import numpy as np
import pytest

from superlie.fields import FieldCtx
from superlie.linalg import (
    DimensionMismatch,
    Matrix,
    SpanSolver,
    Subspace,
    invariant_closure,
    kernel,
    largest_invariant_within,
    rank,
    rref,
    solve,
)

F3 = FieldCtx.prime(3)
F5 = FieldCtx.prime(5)
F7 = FieldCtx.prime(7)
Q = FieldCtx.rationals()


def rand_matrix(ctx, rows, cols, rng):
    return Matrix.from_rows(
        ctx, [[rng.randrange(ctx.p) for _ in range(cols)] for _ in range(rows)]
    )


def minor_rank_oracle(m: Matrix) -> int:
    """Rank via brute-force minor expansion (sizes <= 6)."""

    def det(rows, cols):
        if len(rows) == 1:
            return m.data[rows[0], cols[0]] % m.ctx.p
        acc = 0
        for k, c in enumerate(cols):
            sub = det(rows[1:], cols[:k] + cols[k + 1 :])
            term = (m.data[rows[0], c] * sub) % m.ctx.p
            acc = (acc - term) % m.ctx.p if k % 2 else (acc + term) % m.ctx.p
        return acc

    best = 0
    for k in range(1, min(m.rows, m.cols) + 1):
        found = any(
            det(list(rs), list(cs)) != 0
            for rs in itertools.combinations(range(m.rows), k)
            for cs in itertools.combinations(range(m.cols), k)
        )
        if found:
            best = k
    return best


class TestRref:
    def test_identity_fixed(self):
        m = Matrix.identity(F5, 3)
        r, rk, piv = rref(m)
        assert r == m and rk == 3 and piv == [0, 1, 2]

    def test_rank_one(self):
        m = Matrix.from_rows(F3, [[1, 1], [1, 1]])
        r, rk, _ = rref(m)
        assert rk == 1
        assert r == Matrix.from_rows(F3, [[1, 1], [0, 0]])

    def test_idempotent_and_rank_preserving(self):
        rng = random.Random(2)
        for _ in range(20):
            m = rand_matrix(F5, 5, 7, rng)
            r, rk, _ = rref(m)
            r2, rk2, _ = rref(r)
            assert r2 == r and rk2 == rk == rank(m)

    def test_rank_matches_minor_oracle(self):
        rng = random.Random(3)
        for _ in range(15):
            m = rand_matrix(F5, 6, 6, rng)
            assert rank(m) == minor_rank_oracle(m)
        # include some deliberately singular ones
        for _ in range(5):
            a = rand_matrix(F5, 6, 3, rng)
            b = rand_matrix(F5, 3, 6, rng)
            m = a @ b
            assert rank(m) == minor_rank_oracle(m) <= 3

    def test_rationals(self):
        m = Matrix.from_rows(Q, [["1/2", "1"], ["1", "3"]])
        r, rk, _ = rref(m)
        assert rk == 2
        assert r == Matrix.identity(Q, 2)


class TestKernel:
    def test_zero_matrix(self):
        assert kernel(Matrix.zeros(F5, 2, 2)).dim == 2

    def test_identity(self):
        assert kernel(Matrix.identity(F5, 4)).dim == 0

    def test_four_variable_system(self):
        # alpha+2beta = 0, gamma-2delta = 0, alpha+delta = 0, beta+gamma = 0
        rows = [[1, 2, 0, 0], [0, 0, 1, -2], [1, 0, 0, 1], [0, 1, 1, 0]]
        assert kernel(Matrix.from_rows(F5, rows)).dim == 1
        assert kernel(Matrix.from_rows(F7, rows)).dim == 0

    def test_kernel_vectors_annihilate(self):
        rng = random.Random(4)
        for _ in range(20):
            m = rand_matrix(F7, 4, 6, rng)
            ker = kernel(m)
            assert ker.dim == 6 - rank(m)
            for v in ker.basis.data:
                assert not np.any(m.mv(v))


class TestSolve:
    def test_identity(self):
        b = F5.vec([1, 2, 3])
        x = solve(Matrix.identity(F5, 3), b)
        assert np.array_equal(x, b)

    def test_inconsistent(self):
        assert solve(Matrix.from_rows(F5, [[1], [1]]), F5.vec([0, 1])) is None

    def test_random_consistent(self):
        rng = random.Random(5)
        for _ in range(20):
            a = rand_matrix(F7, 5, 5, rng)
            x0 = F7.vec([rng.randrange(7) for _ in range(5)])
            b = a.mv(x0)
            x = solve(a, b)
            assert x is not None
            assert np.array_equal(a.mv(x), b)


def rand_subspace(ctx, ambient, dim, rng):
    vecs = [
        ctx.vec([rng.randrange(ctx.p) for _ in range(ambient)])
        for _ in range(dim)
    ]
    return Subspace.from_vectors(ctx, ambient, vecs)


class TestSubspaceLattice:
    def test_sum_with_zero(self):
        rng = random.Random(6)
        u = rand_subspace(F5, 5, 3, rng)
        assert u.sum(Subspace.zero(F5, 5)) == u

    def test_intersect_with_full(self):
        rng = random.Random(7)
        u = rand_subspace(F5, 5, 3, rng)
        assert u.intersect(Subspace.full(F5, 5)) == u

    def test_coordinate_lines(self):
        e1 = Subspace.from_vectors(F3, 2, [F3.vec([1, 0])])
        e2 = Subspace.from_vectors(F3, 2, [F3.vec([0, 1])])
        assert e1.intersect(e2).dim == 0

    def test_dimension_identity_200_random_pairs(self):
        rng = random.Random(8)
        for _ in range(200):
            u = rand_subspace(F5, 5, rng.randrange(1, 4), rng)
            v = rand_subspace(F5, 5, rng.randrange(1, 4), rng)
            s, i = u.sum(v), u.intersect(v)
            assert u.dim + v.dim == s.dim + i.dim
            assert i.leq(u) and i.leq(v) and u.leq(s) and v.leq(s)

    def test_ambient_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Subspace.zero(F5, 3).sum(Subspace.zero(F5, 4))

    def test_canonical_equality(self):
        # two different spanning sets of the same plane give identical bases
        u = Subspace.from_vectors(F5, 3, [F5.vec([1, 1, 0]), F5.vec([0, 1, 1])])
        v = Subspace.from_vectors(F5, 3, [F5.vec([1, 2, 1]), F5.vec([2, 3, 1])])
        assert u == v
        assert np.array_equal(u.basis.data, v.basis.data)

    def test_complement_constraints(self):
        rng = random.Random(9)
        u = rand_subspace(F7, 6, 3, rng)
        c = u.complement_constraints()
        assert kernel(Matrix(F7, c.data)) == u


class TestSpinning:
    def shift_op(self, ctx, n):
        rows = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i + 1][i] = 1
        return Matrix.from_rows(ctx, rows)

    def test_idempotent_on_invariant_seed(self):
        n = 4
        op = self.shift_op(F5, n)
        w = invariant_closure(F5, n, [F5.vec([0, 0, 1, 0])], [op])
        again = invariant_closure(F5, n, list(w.basis.data), [op])
        assert again == w
        # exact invariance per operator
        for v in w.basis.data:
            assert w.contains(op.mv(v))

    def test_monotone_in_seeds(self):
        n = 5
        op = self.shift_op(F7, n)
        small = invariant_closure(F7, n, [F7.vec([0, 0, 0, 1, 0])], [op])
        big = invariant_closure(
            F7, n, [F7.vec([0, 0, 0, 1, 0]), F7.vec([0, 1, 0, 0, 0])], [op]
        )
        assert small.leq(big)

    def test_order_independence(self):
        rng = random.Random(10)
        n = 6
        ops = [rand_matrix(F5, n, n, rng) for _ in range(4)]
        seeds = [F5.vec([rng.randrange(5) for _ in range(n)])]
        w1 = invariant_closure(F5, n, seeds, ops)
        shuffled = list(ops)
        rng.shuffle(shuffled)
        assert invariant_closure(F5, n, seeds, shuffled) == w1

    def test_largest_invariant_within_invariant_input(self):
        n = 4
        op = self.shift_op(F5, n)
        # span{e2,e3,e4} is invariant under the downward shift
        k = Subspace.from_vectors(
            F5, n, [F5.vec([0, 1, 0, 0]), F5.vec([0, 0, 1, 0]), F5.vec([0, 0, 0, 1])]
        )
        assert largest_invariant_within(k, [op]) == k

    def test_largest_invariant_within_zero(self):
        assert largest_invariant_within(Subspace.zero(F5, 3), []).dim == 0

    def test_largest_invariant_within_properties(self):
        rng = random.Random(11)
        n = 5
        ops = [rand_matrix(F5, n, n, rng) for _ in range(2)]
        k = rand_subspace(F5, n, 3, rng)
        w = largest_invariant_within(k, ops)
        assert w.leq(k)
        for v in w.basis.data:
            for op in ops:
                assert w.contains(op.mv(v))
        # any vector of k outside w breaks invariance within k: its closure
        # together with w escapes k
        for v in k.basis.data:
            if not w.contains(v):
                grown = invariant_closure(
                    F5, n, list(w.basis.data) + [v], ops
                )
                assert not grown.leq(k)


class TestSpanSolver:
    def test_round_trip(self):
        rng = random.Random(12)
        rows = np.stack([F7.vec([rng.randrange(7) for _ in range(6)]) for _ in range(4)])
        sub = Subspace.from_vectors(F7, 6, list(rows))
        if sub.dim < 4:
            pytest.skip("unlucky dependent sample")
        solver = SpanSolver(F7, rows)
        for _ in range(10):
            c = F7.vec([rng.randrange(7) for _ in range(4)])
            v = F7.reduce(c @ rows)
            got = solver.coords(v)
            assert np.array_equal(got, c)

    def test_outside_span(self):
        rows = np.stack([F5.vec([1, 0, 0]), F5.vec([0, 1, 0])])
        solver = SpanSolver(F5, rows)
        assert solver.coords(F5.vec([0, 0, 1])) is None

    def test_dependent_rows_rejected(self):
        rows = np.stack([F5.vec([1, 2, 3]), F5.vec([2, 4, 6])])
        with pytest.raises(DimensionMismatch):
            SpanSolver(F5, rows)
