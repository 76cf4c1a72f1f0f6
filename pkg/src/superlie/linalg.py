"""Exact dense linear algebra over a FieldCtx.

Matrices wrap numpy arrays: int64 canonical residues for prime fields,
Fraction object arrays for the rationals.  Everything is exact; there is no
floating point anywhere.  Row reduction uses the leftmost nonzero pivot with
no pivot heuristics, so reduced echelon forms (and hence Subspace basis
matrices) are canonical: two subspaces are equal iff their basis arrays are
identical.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .fields import FieldCtx


class DimensionMismatch(ValueError):
    pass


def exact_matmul(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of canonical arrays.  For small primes the product is
    routed through float64 BLAS: every intermediate is an integer below 2^53,
    so the result is exact and then reduced mod p."""
    if (
        ctx.p
        and a.dtype == np.int64
        and b.dtype == np.int64
        and (ctx.p - 1) ** 2 * max(1, a.shape[-1]) < 2**53
    ):
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return prod.astype(np.int64) % ctx.p
    if not ctx.p and a.dtype == object and a.ndim == 2 and b.ndim == 2:
        # Fraction matmul through numpy is a dense Python loop with a gcd on
        # every operation; clearing denominators first and iterating only
        # the nonzero entries is far cheaper on the sparse matrices in play
        ai, sa = int_scaled(a)
        bi, sb = int_scaled(b)
        acc = sparse_int_matmul(ai, bi)
        out = np.full(acc.shape, ctx.zero, dtype=object)
        scale = sa * sb
        nz = np.nonzero(acc)
        out[nz] = [Fraction(int(v), scale) for v in acc[nz]]
        return out
    return ctx.reduce(a @ b)


def sparse_int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of integer object arrays, touching only nonzero entries."""
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=object)
    for k in range(b.shape[0]):
        cols = np.nonzero(b[k])[0]
        if len(cols) == 0:
            continue
        bk = b[k]
        for i in np.nonzero(a[:, k])[0]:
            aik = a[i, k]
            row = acc[i]
            for j in cols:
                row[j] += aik * bk[j]
    return acc


def int_scaled(m: np.ndarray) -> Tuple[np.ndarray, int]:
    """(integer object array, scale) with m == array / scale, entrywise."""
    idx = np.nonzero(m)
    vals = m[idx]
    s = 1
    for x in vals:
        d = getattr(x, "denominator", 1)
        if d != 1:
            s = lcm(s, d)
    out = np.zeros(m.shape, dtype=object)
    out[idx] = [int(x.numerator) * (s // x.denominator)
                if isinstance(x, Fraction) else int(x) * s for x in vals]
    return out, s


class Matrix:
    """Immutable dense matrix over a FieldCtx."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: FieldCtx, data: np.ndarray):
        if data.ndim != 2:
            raise DimensionMismatch(f"expected 2d array, got shape {data.shape}")
        self.ctx = ctx
        self.data = ctx.reduce(data)
        self.data.setflags(write=False)

    # -- constructors --------------------------------------------------------
    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence]) -> "Matrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        a = ctx.zeros(n_rows, n_cols)
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise DimensionMismatch("ragged rows")
            for j, x in enumerate(row):
                a[i, j] = ctx.of(x)
        return cls(ctx, a)

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> "Matrix":
        return cls(ctx, ctx.zeros(rows, cols))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Matrix":
        return cls(ctx, ctx.eye(n))

    # -- shape ---------------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def _check_ctx(self, other: "Matrix"):
        if self.ctx != other.ctx:
            raise DimensionMismatch("field mismatch")

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_ctx(other)
        if self.data.shape != other.data.shape:
            raise DimensionMismatch("shape mismatch in add")
        return Matrix(self.ctx, self.data + other.data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_ctx(other)
        if self.data.shape != other.data.shape:
            raise DimensionMismatch("shape mismatch in sub")
        return Matrix(self.ctx, self.data - other.data)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_ctx(other)
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        return Matrix(self.ctx, exact_matmul(self.ctx, self.data, other.data))

    def scale(self, c) -> "Matrix":
        return Matrix(self.ctx, self.data * self.ctx.of(c))

    def neg(self) -> "Matrix":
        return Matrix(self.ctx, -self.data)

    def transpose(self) -> "Matrix":
        return Matrix(self.ctx, self.data.T.copy())

    def mv(self, v: np.ndarray) -> np.ndarray:
        """Apply to a column vector given as a 1d array."""
        if v.shape[0] != self.cols:
            raise DimensionMismatch("vector length mismatch")
        return self.ctx.reduce(self.data @ v)

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(
            self.data, self.ctx.eye(self.rows)
        )

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ctx == other.ctx
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.ctx, self.data.shape, self.data.tobytes()
                     if self.data.dtype != object else str(self.data)))

    def __repr__(self):
        return f"Matrix({self.ctx}, {self.data.tolist()})"

    def to_lists(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.data.tolist()]

    @classmethod
    def from_lists(cls, ctx: FieldCtx, rows: Sequence[Sequence[str]]) -> "Matrix":
        return cls.from_rows(ctx, rows)


# ---------------------------------------------------------------------------
# row reduction
# ---------------------------------------------------------------------------

def _rref_array(ctx: FieldCtx, a: np.ndarray) -> Tuple[np.ndarray, int, List[int]]:
    a = a.copy()
    n_rows, n_cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = ctx.inv(a[r, c])
        a[r] = ctx.reduce(a[r] * inv)
        factors = a[:, c].copy()
        factors[r] = 0
        if a.dtype == object:
            # touch only the entries the rank-1 update can change; Fraction
            # arithmetic is slow enough that sparsity dominates the cost
            rows_nz = np.nonzero(factors)[0]
            cols_nz = np.nonzero(a[r])[0]
            if len(rows_nz) and len(cols_nz):
                ix = np.ix_(rows_nz, cols_nz)
                a[ix] = ctx.reduce(
                    a[ix] - np.outer(factors[rows_nz], a[r][cols_nz]))
        elif np.any(factors):
            a = ctx.reduce(a - np.outer(factors, a[r]))
        pivots.append(c)
        r += 1
    return a, r, pivots


def rref(m: Matrix) -> Tuple[Matrix, int, List[int]]:
    """Unique reduced row echelon form, with rank and pivot columns."""
    a, rank, pivots = _rref_array(m.ctx, m.data)
    return Matrix(m.ctx, a), rank, pivots


def rank(m: Matrix) -> int:
    return _rref_array(m.ctx, m.data)[1]


def solve(a: Matrix, b: np.ndarray) -> Optional[np.ndarray]:
    """One solution of a.x = b, or None if inconsistent."""
    if a.rows != b.shape[0]:
        raise DimensionMismatch("rhs length mismatch")
    aug = np.concatenate([a.data, b.reshape(-1, 1)], axis=1)
    r, rk, pivots = _rref_array(a.ctx, aug)
    if pivots and pivots[-1] == a.cols:
        return None
    x = a.ctx.zeros(a.cols)
    for i, c in enumerate(pivots):
        x[c] = r[i, -1]
    return x


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of ctx^n held as a canonical RREF basis (no zero rows)."""

    __slots__ = ("ctx", "ambient_dim", "basis", "_pivots")

    def __init__(self, ctx: FieldCtx, ambient_dim: int, basis: Matrix,
                 pivots: List[int]):
        self.ctx = ctx
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._pivots = pivots

    @classmethod
    def from_vectors(cls, ctx: FieldCtx, ambient_dim: int,
                     vectors: Iterable[np.ndarray]) -> "Subspace":
        vecs = list(vectors)
        if not vecs:
            return cls.zero(ctx, ambient_dim)
        a = np.stack([ctx.reduce(np.asarray(v)) for v in vecs])
        if a.shape[1] != ambient_dim:
            raise DimensionMismatch("ambient dimension mismatch")
        r, rk, pivots = _rref_array(ctx, a)
        return cls(ctx, ambient_dim, Matrix(ctx, r[:rk]), pivots)

    @classmethod
    def from_matrix_rows(cls, m: Matrix) -> "Subspace":
        r, rk, pivots = rref(m)
        return cls(m.ctx, m.cols, Matrix(m.ctx, r.data[:rk]), pivots)

    @classmethod
    def zero(cls, ctx: FieldCtx, ambient_dim: int) -> "Subspace":
        return cls(ctx, ambient_dim, Matrix.zeros(ctx, 0, ambient_dim), [])

    @classmethod
    def full(cls, ctx: FieldCtx, ambient_dim: int) -> "Subspace":
        return cls(ctx, ambient_dim, Matrix.identity(ctx, ambient_dim),
                   list(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> List[int]:
        return list(self._pivots)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ctx == other.ctx
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ctx, self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    # -- membership -----------------------------------------------------------
    def reduce_vector(self, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(residual, coefficients): v = coeffs @ basis + residual, residual
        supported away from pivot coordinates."""
        v = self.ctx.reduce(np.asarray(v))
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatch("vector length mismatch")
        if self.dim == 0:
            return v, self.ctx.zeros(0)
        coeffs = v[self._pivots].copy()
        residual = self.ctx.reduce(v - coeffs @ self.basis.data)
        return residual, coeffs

    def contains(self, v: np.ndarray) -> bool:
        residual, _ = self.reduce_vector(v)
        return not np.any(residual)

    def leq(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(row) for row in self.basis.data)

    def _check(self, other: "Subspace"):
        if self.ctx != other.ctx or self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspace ambient mismatch")

    # -- lattice --------------------------------------------------------------
    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        stacked = np.concatenate([self.basis.data, other.basis.data], axis=0)
        return Subspace.from_vectors(self.ctx, self.ambient_dim, list(stacked))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ctx, self.ambient_dim)
        # x in both spans: x = a.U = b.V  <=>  (a, b) in kernel of [U^T | -V^T]
        stacked = np.concatenate(
            [self.basis.data.T, -other.basis.data.T], axis=1
        )
        ker = kernel(Matrix(self.ctx, stacked))
        if ker.dim == 0:
            return Subspace.zero(self.ctx, self.ambient_dim)
        coeffs = ker.basis.data[:, : self.dim]
        vecs = self.ctx.reduce(coeffs @ self.basis.data)
        return Subspace.from_vectors(self.ctx, self.ambient_dim, list(vecs))

    def complement_constraints(self) -> Matrix:
        """A matrix C with kernel(C) = this subspace."""
        return kernel(Matrix(self.ctx, self.basis.data)).basis


def kernel(m: Matrix) -> Subspace:
    """{v : m.v = 0} as a canonical Subspace of ctx^cols."""
    r, rk, pivots = _rref_array(m.ctx, m.data)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    if not free:
        return Subspace.zero(m.ctx, m.cols)
    basis = m.ctx.zeros(len(free), m.cols)
    for row_i, f in enumerate(free):
        basis[row_i, f] = m.ctx.one
        for i, c in enumerate(pivots):
            basis[row_i, c] = m.ctx.reduce(-r[i, f])
    return Subspace.from_vectors(m.ctx, m.cols, list(basis))


# ---------------------------------------------------------------------------
# lattice conveniences matching the operation names in the docs
# ---------------------------------------------------------------------------

def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    return u.sum(v)


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    return u.intersect(v)


def subspace_contains(u: Subspace, vector: np.ndarray) -> bool:
    return u.contains(vector)


def subspace_leq(u: Subspace, v: Subspace) -> bool:
    return u.leq(v)


# ---------------------------------------------------------------------------
# spinning
# ---------------------------------------------------------------------------

def _check_operators(ambient_dim: int, operators: Sequence[Matrix]):
    for op in operators:
        if op.rows != op.cols or op.rows != ambient_dim:
            raise DimensionMismatch(
                f"operator shape {op.rows}x{op.cols} vs ambient {ambient_dim}"
            )


def _sparse_int_columns(op: Matrix) -> List[List[Tuple[int, int]]]:
    """Columns of an operator as sparse (row, int coeff) lists, scaled by the
    common denominator.  Scaling does not change the span of the images."""
    from math import lcm

    data = op.data
    scale = 1
    for x in data.flat:
        if x:
            scale = lcm(scale, getattr(x, "denominator", 1))
    cols = []
    for j in range(data.shape[1]):
        col = [
            (int(k), int(data[k, j] * scale))
            for k in np.nonzero(data[:, j])[0]
        ]
        cols.append(col)
    return cols


def _sparse_apply(ctx: FieldCtx, cols, v: np.ndarray) -> np.ndarray:
    """op @ v for a scaled-to-integers vector and sparse integer columns."""
    from math import lcm

    scale = 1
    for x in v:
        if x:
            scale = lcm(scale, getattr(x, "denominator", 1))
    out = [0] * len(cols)
    for j in np.nonzero(v)[0]:
        vj = int(v[j] * scale)
        for k, c in cols[int(j)]:
            out[k] += c * vj
    res = np.empty(len(cols), dtype=object)
    res[:] = out
    return ctx.reduce(res)


def invariant_closure(ctx: FieldCtx, ambient_dim: int,
                      seeds: Sequence[np.ndarray],
                      operators: Sequence[Matrix]) -> Subspace:
    """Smallest subspace containing the seeds and invariant under every
    operator: the fixed point of W -> W + sum(op(W))."""
    _check_operators(ambient_dim, operators)
    w = Subspace.from_vectors(ctx, ambient_dim, seeds)
    if not operators:
        return w
    sparse = ctx.dtype is object
    op_cols = [_sparse_int_columns(op) for op in operators] if sparse else None
    frontier = w.basis.data
    while w.dim not in (0, ambient_dim) and frontier.shape[0] > 0:
        # only images of vectors added last round can enlarge the span
        if sparse:
            # object arrays: dense matmul on Fractions is slow, so apply the
            # operators column-sparsely in pure integer arithmetic and reduce
            # each image against the growing basis as it arrives
            nxt = w
            for v in frontier:
                for cols in op_cols:
                    img = _sparse_apply(ctx, cols, v)
                    residual, _ = nxt.reduce_vector(img)
                    if np.any(residual):
                        nxt = nxt.sum(Subspace.from_vectors(
                            ctx, ambient_dim, [residual]))
                        if nxt.dim == ambient_dim:
                            return nxt
        else:
            images = np.concatenate(
                [exact_matmul(ctx, frontier, op.data.T) for op in operators],
                axis=0,
            )
            if w.dim:
                coeffs = images[:, w.pivots]
                residuals = ctx.reduce(
                    images - exact_matmul(ctx, coeffs, w.basis.data)
                )
            else:
                residuals = images
            fresh = residuals[np.any(residuals, axis=1)]
            if fresh.shape[0] == 0:
                break
            nxt = w.sum(Subspace.from_vectors(ctx, ambient_dim, list(fresh)))
        if nxt.dim == w.dim:
            break
        # new frontier: basis vectors of the enlarged space not in the old one
        frontier = np.stack(
            [v for v in nxt.basis.data if not w.contains(v)]
        )
        w = nxt
    return w


def largest_invariant_within(k: Subspace,
                             operators: Sequence[Matrix]) -> Subspace:
    """Largest subspace W <= k with op(W) <= W for every operator; iterates
    W <- {w in W : op(w) in W for all op} to a fixed point."""
    _check_operators(k.ambient_dim, operators)
    ctx = k.ctx
    w = k
    while True:
        if w.dim == 0:
            return w
        c = w.complement_constraints()  # kernel(c) == w
        if c.rows == 0:
            return w  # full ambient space is invariant under any operator
        b = w.basis.data  # d x n
        blocks = [
            ctx.reduce(c.data @ ctx.reduce(op.data @ b.T)) for op in operators
        ]
        if not blocks:
            return w
        stacked = Matrix(ctx, np.concatenate(blocks, axis=0))
        coeff_kernel = kernel(stacked)  # coefficient vectors within w
        if coeff_kernel.dim == w.dim:
            return w
        vecs = ctx.reduce(coeff_kernel.basis.data @ b)
        w = Subspace.from_vectors(ctx, k.ambient_dim, list(vecs))


# ---------------------------------------------------------------------------
# expressing vectors in a (not necessarily echelon) spanning set
# ---------------------------------------------------------------------------

class SpanSolver:
    """Coordinates with respect to a fixed independent spanning set.

    Precomputes an RREF with a recorded transform so repeated coordinate
    queries are a single reduction each.
    """

    __slots__ = ("ctx", "span_dim", "ambient_dim", "_rref", "_transform",
                 "_pivots")

    def __init__(self, ctx: FieldCtx, basis_rows: np.ndarray):
        self.ctx = ctx
        d, n = basis_rows.shape
        self.span_dim = d
        self.ambient_dim = n
        aug = np.concatenate([ctx.reduce(basis_rows.copy()), ctx.eye(d)], axis=1)
        r, rk, pivots = _rref_array(ctx, aug)
        if rk != d or any(p >= n for p in pivots):
            raise DimensionMismatch("basis rows are linearly dependent")
        self._rref = r[:, :n]
        self._transform = r[:, n:]
        self._pivots = pivots

    def coords(self, v: np.ndarray) -> Optional[np.ndarray]:
        """Coefficients of v in the original basis rows, or None."""
        v = self.ctx.reduce(np.asarray(v))
        c = v[self._pivots].copy()
        residual = self.ctx.reduce(v - c @ self._rref)
        if np.any(residual):
            return None
        return self.ctx.reduce(c @ self._transform)
