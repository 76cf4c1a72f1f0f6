"""Named builders for the algebra and module families of the catalog.

All matrix families are produced by one generic routine that takes explicit
supermatrices, computes supercommutators, and re-expresses them in the given
basis, so the structure constants are derived rather than transcribed.  Basis
orders are fixed and documented per construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fields import FieldCtx
from .linalg import Matrix, SpanSolver, Subspace, kernel
from .superalgebra import (
    CenterNotInside,
    LieSuperalgebra,
    SuperIdeal,
    build_superalgebra,
)


# ---------------------------------------------------------------------------
# generic matrix-superalgebra builder
# ---------------------------------------------------------------------------

def _supercommutator(ctx: FieldCtx, x: np.ndarray, y: np.ndarray,
                     px: int, py: int) -> np.ndarray:
    xy = ctx.reduce(x @ y)
    yx = ctx.reduce(y @ x)
    return ctx.reduce(xy + yx) if (px and py) else ctx.reduce(xy - yx)


def _check_block_parity(bp: Sequence[int], m: np.ndarray, parity: int):
    n = len(bp)
    for a in range(n):
        for b in range(n):
            if m[a, b] and (bp[a] + bp[b]) % 2 != parity:
                raise ValueError(
                    f"entry ({a},{b}) violates declared parity {parity}")


def algebra_from_matrices(ctx: FieldCtx,
                          elems: Sequence[Tuple[str, int, np.ndarray]],
                          block_parities: Sequence[int],
                          meta: Optional[dict] = None) -> LieSuperalgebra:
    """Build a Lie superalgebra from explicit supermatrices.

    elems: (label, parity, square matrix) triples forming a basis of a
    subspace closed under the supercommutator.  block_parities gives the
    parity of each row/column index of the ambient matrix space.
    """
    n_amb = len(block_parities)
    basis_vecs = []
    mats = []
    for label, parity, m in elems:
        m = ctx.reduce(np.asarray(m))
        if m.shape != (n_amb, n_amb):
            raise ValueError(f"matrix for {label} has shape {m.shape}")
        _check_block_parity(block_parities, m, parity)
        mats.append(m)
        basis_vecs.append(m.reshape(-1))
    d = len(elems)
    solver = SpanSolver(ctx, np.stack(basis_vecs)) if d else None
    table: Dict[Tuple[int, int], Dict[int, object]] = {}
    for i in range(d):
        for j in range(i, d):
            br = _supercommutator(ctx, mats[i], mats[j],
                                  elems[i][1], elems[j][1])
            coords = solver.coords(br.reshape(-1))
            if coords is None:
                raise ValueError(
                    f"bracket [{elems[i][0]},{elems[j][0]}] leaves the span")
            entry = {int(k): coords[int(k)] for k in np.nonzero(coords)[0]}
            if entry:
                table[(i, j)] = entry
    alg = build_superalgebra(
        ctx, [(label, parity) for label, parity, _ in elems], table, meta=meta)
    alg.matrix_basis = mats  # type: ignore[attr-defined]
    alg.block_parities = list(block_parities)  # type: ignore[attr-defined]
    alg.matrix_solver = solver  # type: ignore[attr-defined]
    return alg


def coords_of_matrix(alg: LieSuperalgebra, m: np.ndarray) -> Optional[np.ndarray]:
    """Coordinates of an ambient matrix in a matrix-built algebra's basis."""
    solver: SpanSolver = alg.matrix_solver  # type: ignore[attr-defined]
    return solver.coords(alg.ctx.reduce(np.asarray(m)).reshape(-1))


def _unit(ctx: FieldCtx, n: int, a: int, b: int) -> np.ndarray:
    m = ctx.zeros(n, n)
    m[a, b] = ctx.one
    return m


# ---------------------------------------------------------------------------
# gl / sl / pgl / psl
# ---------------------------------------------------------------------------

def gl(m: int, n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """gl(m|n) on elementary matrices; even elements first (A block row-major,
    then D block), odd after (B block, then C block).  Labels E{i}{j}, 1-based."""
    if m + n < 1:
        raise ValueError("need m+n >= 1")
    N = m + n
    bp = [0] * m + [1] * n
    elems = []
    for a in range(N):
        for b in range(N):
            if (bp[a] + bp[b]) % 2 == 0:
                elems.append((f"E{a+1},{b+1}", 0, _unit(ctx, N, a, b)))
    for a in range(N):
        for b in range(N):
            if (bp[a] + bp[b]) % 2 == 1:
                elems.append((f"E{a+1},{b+1}", 1, _unit(ctx, N, a, b)))
    return algebra_from_matrices(
        ctx, elems, bp, meta={"name": "gl", "m": m, "n": n})


def _sl_elems(m: int, n: int, ctx: FieldCtx):
    N = m + n
    bp = [0] * m + [1] * n
    elems = []
    for a in range(N):
        for b in range(N):
            if a != b and (bp[a] + bp[b]) % 2 == 0:
                elems.append((f"E{a+1},{b+1}", 0, _unit(ctx, N, a, b)))
    # supertraceless diagonal basis: H_i = E_ii - E_{i+1,i+1} except across the
    # parity boundary, where H_m = E_mm + E_{m+1,m+1}
    for i in range(N - 1):
        h = _unit(ctx, N, i, i)
        if i == m - 1:
            h = ctx.reduce(h + _unit(ctx, N, i + 1, i + 1))
        else:
            h = ctx.reduce(h - _unit(ctx, N, i + 1, i + 1))
        elems.append((f"H{i+1}", 0, h))
    for a in range(N):
        for b in range(N):
            if (bp[a] + bp[b]) % 2 == 1:
                elems.append((f"E{a+1},{b+1}", 1, _unit(ctx, N, a, b)))
    return elems, bp


def sl(m: int, n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """Supertraceless matrices in gl(m|n)."""
    if m + n < 2:
        raise ValueError("need m+n >= 2")
    elems, bp = _sl_elems(m, n, ctx)
    return algebra_from_matrices(
        ctx, elems, bp, meta={"name": "sl", "m": m, "n": n})


def identity_coords(alg: LieSuperalgebra) -> np.ndarray:
    """Coordinates of the identity matrix in a matrix-built algebra."""
    mats: List[np.ndarray] = alg.matrix_basis  # type: ignore[attr-defined]
    N = mats[0].shape[0]
    coords = coords_of_matrix(alg, alg.ctx.eye(N))
    if coords is None:
        raise CenterNotInside("identity matrix is not in the algebra")
    return coords


def scalar_ideal(alg: LieSuperalgebra) -> SuperIdeal:
    """The central superideal spanned by the identity matrix."""
    coords = identity_coords(alg)
    even = Subspace.from_vectors(
        alg.ctx, len(alg.even_coords), [alg.even_component(coords)])
    odd = Subspace.zero(alg.ctx, len(alg.odd_coords))
    return SuperIdeal(alg, even, odd)


def pgl(m: int, n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """gl(m|n) / k.I"""
    g = gl(m, n, ctx)
    out = g.quotient(scalar_ideal(g))
    out.meta.update({"name": "pgl", "m": m, "n": n})
    return out


def psl(m: int, n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """sl(m|n) / k.I; requires the supertrace of I (= m-n) to vanish."""
    if ctx.p == 0:
        if m != n:
            raise CenterNotInside("identity is not supertraceless over Q")
    elif (m - n) % ctx.p != 0:
        raise CenterNotInside(
            f"identity is not supertraceless: p={ctx.p} does not divide m-n")
    s = sl(m, n, ctx)
    out = s.quotient(scalar_ideal(s))
    out.meta.update({"name": "psl", "m": m, "n": n})
    return out


# ---------------------------------------------------------------------------
# orthosymplectic spo(2m|d)
# ---------------------------------------------------------------------------

def _gram_symplectic(ctx: FieldCtx, m: int) -> np.ndarray:
    j = ctx.zeros(2 * m, 2 * m)
    for i in range(m):
        j[i, m + i] = ctx.one
        j[m + i, i] = ctx.neg(ctx.one)
    return j

def _gram_orthogonal(ctx: FieldCtx, d: int) -> np.ndarray:
    n = d // 2
    j = ctx.zeros(d, d)
    for i in range(n):
        j[i, n + i] = ctx.one
        j[n + i, i] = ctx.one
    if d % 2:
        j[d - 1, d - 1] = ctx.one
    return j


def _gram_algebra_basis(ctx: FieldCtx, g: np.ndarray) -> List[np.ndarray]:
    """Canonical basis of {X : X^t g + g X = 0}."""
    n = g.shape[0]
    cols = []
    for a in range(n):
        for b in range(n):
            e = _unit(ctx, n, a, b)
            cols.append(ctx.reduce(e.T @ g + g @ e).reshape(-1))
    constraint = Matrix(ctx, np.stack(cols, axis=1))
    ker = kernel(constraint)
    return [v.reshape(n, n).copy() for v in ker.basis.data]


def spo(two_m: int, odd_dim: int, ctx: FieldCtx) -> LieSuperalgebra:
    """spo(2m|d) for d = 2n or 2n+1, on the standard Gram blocks
    (J_s skew for the symplectic part, J_o symmetric for the orthogonal one);
    odd elements are B in Mat_{2m x d} with C = J_o B^t J_s."""
    if two_m % 2 or two_m < 2 or odd_dim < 1:
        raise ValueError("need even 2m >= 2 and odd_dim >= 1")
    m2, d = two_m, odd_dim
    N = m2 + d
    bp = [0] * m2 + [1] * d
    js = _gram_symplectic(ctx, m2 // 2)
    jo = _gram_orthogonal(ctx, d)
    elems = []
    for idx, x in enumerate(_gram_algebra_basis(ctx, js)):
        m = ctx.zeros(N, N)
        m[:m2, :m2] = x
        elems.append((f"sp{idx}", 0, m))
    for idx, x in enumerate(_gram_algebra_basis(ctx, jo)):
        m = ctx.zeros(N, N)
        m[m2:, m2:] = x
        elems.append((f"so{idx}", 0, m))
    for a in range(m2):
        for b in range(d):
            bfull = ctx.zeros(m2, d)
            bfull[a, b] = ctx.one
            cfull = ctx.reduce(jo @ bfull.T @ js)
            m = ctx.zeros(N, N)
            m[:m2, m2:] = bfull
            m[m2:, :m2] = cfull
            elems.append((f"B{a+1},{b+1}", 1, m))
    return algebra_from_matrices(
        ctx, elems, bp, meta={"name": "spo", "two_m": two_m, "odd_dim": odd_dim})


# ---------------------------------------------------------------------------
# periplectic p(n)
# ---------------------------------------------------------------------------

def periplectic(n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """p(n): blocks A arbitrary, D = -A^t, B symmetric, C skew-symmetric.
    Basis order: A{i}{j} row-major, then symmetric B (diagonal first, then
    i<j), then skew C (i<j)."""
    if n < 2:
        raise ValueError("need n >= 2")
    N = 2 * n
    bp = [0] * n + [1] * n
    elems = []
    for a in range(n):
        for b in range(n):
            m = ctx.zeros(N, N)
            m[a, b] = ctx.one
            m[n + b, n + a] = ctx.neg(ctx.one)
            elems.append((f"A{a+1},{b+1}", 0, m))
    for a in range(n):
        m = ctx.zeros(N, N)
        m[a, n + a] = ctx.one
        elems.append((f"B{a+1},{a+1}", 1, m))
    for a in range(n):
        for b in range(a + 1, n):
            m = ctx.zeros(N, N)
            m[a, n + b] = ctx.one
            m[b, n + a] = ctx.one
            elems.append((f"B{a+1},{b+1}", 1, m))
    for a in range(n):
        for b in range(a + 1, n):
            m = ctx.zeros(N, N)
            m[n + a, b] = ctx.one
            m[n + b, a] = ctx.neg(ctx.one)
            elems.append((f"C{a+1},{b+1}", 1, m))
    return algebra_from_matrices(ctx, elems, bp,
                                 meta={"name": "p", "n": n})


def periplectic_derived(n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """[p(n), p(n)] = sl_n + whole odd part, as its own algebra."""
    par = periplectic(n, ctx)
    out = par.subalgebra_from_ideal(par.derived_subalgebra())
    out.meta.update({"name": "p_derived", "n": n})
    return out


# ---------------------------------------------------------------------------
# queer family q(n), pq(n), psq(n)
# ---------------------------------------------------------------------------

def queer(n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """q(n): couples (A|B) realized as [[A,B],[B,A]] in gl(n|n); even part
    A{i}{j} row-major, odd part B{i}{j} row-major."""
    if n < 2:
        raise ValueError("need n >= 2")
    N = 2 * n
    bp = [0] * n + [1] * n
    elems = []
    for a in range(n):
        for b in range(n):
            m = ctx.zeros(N, N)
            m[a, b] = ctx.one
            m[n + a, n + b] = ctx.one
            elems.append((f"A{a+1},{b+1}", 0, m))
    for a in range(n):
        for b in range(n):
            m = ctx.zeros(N, N)
            m[a, n + b] = ctx.one
            m[n + a, b] = ctx.one
            elems.append((f"B{a+1},{b+1}", 1, m))
    return algebra_from_matrices(ctx, elems, bp,
                                 meta={"name": "q", "n": n})


def pq(n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """q(n) / k.(I|0)"""
    qn = queer(n, ctx)
    # (I|0) has even coordinates of the diagonal A elements
    ne = len(qn.even_coords)
    v = ctx.zeros(ne)
    for a in range(n):
        v[a * n + a] = ctx.one
    ideal = SuperIdeal(
        qn,
        Subspace.from_vectors(ctx, ne, [v]),
        Subspace.zero(ctx, len(qn.odd_coords)),
    )
    out = qn.quotient(ideal)
    out.meta.update({"name": "pq", "n": n})
    return out


def psq(n: int, ctx: FieldCtx) -> LieSuperalgebra:
    """The subalgebra (pgl_n | sl_n) of pq(n)."""
    pqn = pq(n, ctx)
    ne, no = len(pqn.even_coords), len(pqn.odd_coords)
    even_sub = Subspace.full(ctx, ne)
    odd_vecs = []
    for a in range(n):
        for b in range(n):
            if a != b:
                v = ctx.zeros(no)
                v[a * n + b] = ctx.one
                odd_vecs.append(v)
    for a in range(n - 1):
        v = ctx.zeros(no)
        v[a * n + a] = ctx.one
        v[(n - 1) * n + (n - 1)] = ctx.neg(ctx.one)
        odd_vecs.append(v)
    odd_sub = Subspace.from_vectors(ctx, no, odd_vecs)
    labels = [pqn.labels[c] for c in pqn.even_coords]
    labels += [f"s{i}" for i in range(odd_sub.dim)]
    out = pqn.subalgebra(even_sub, odd_sub, labels=labels)
    out.meta.update({"name": "psq", "n": n})
    return out


# ---------------------------------------------------------------------------
# D(2,1;alpha) = Gamma(a1, a2, a3)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class D21Params:
    a1: object
    a2: object
    a3: object

    def is_valid(self, ctx: FieldCtx) -> bool:
        s = ctx.add(ctx.add(ctx.of(self.a1), ctx.of(self.a2)), ctx.of(self.a3))
        return ctx.is_zero(s)


def d21(params: D21Params, ctx: FieldCtx) -> LieSuperalgebra:
    """Even part sl2 x sl2 x sl2 (basis H_f, E_f, F_f per factor), odd part
    V (x) V (x) V with basis v{i}{j}{k} in lexicographic order.  The odd-odd
    bracket uses the three parameters and the Sym2(V) = sl2 identification
    [uv, w] = (1/2)(<u,w> v + <v,w> u).  Raises JacobiViolation unless
    a1 + a2 + a3 = 0."""
    a = [ctx.of(params.a1), ctx.of(params.a2), ctx.of(params.a3)]
    half = ctx.inv(ctx.of(2))
    labels = []
    for f in range(3):
        labels += [(f"H{f+1}", 0), (f"E{f+1}", 0), (f"F{f+1}", 0)]
    odd_index: Dict[Tuple[int, int, int], int] = {}
    for i in range(2):
        for j in range(2):
            for k in range(2):
                odd_index[(i, j, k)] = 9 + len(odd_index)
                labels.append((f"v{i+1}{j+1}{k+1}", 1))

    table: Dict[Tuple[int, int], Dict[int, object]] = {}

    def put(i, j, k, c):
        if ctx.is_zero(c):
            return
        row = table.setdefault((i, j), {})
        row[k] = ctx.add(row.get(k, ctx.zero), c)
        if ctx.is_zero(row[k]):
            del row[k]

    one = ctx.one
    for f in range(3):
        h, e, fl = 3 * f, 3 * f + 1, 3 * f + 2
        put(h, e, e, ctx.of(2))
        put(h, fl, fl, ctx.of(-2))
        put(e, fl, h, one)

    # standard sl2 action on V = span{v1, v2}
    # H: v1 -> v1, v2 -> -v2 ; E: v2 -> v1 ; F: v1 -> v2
    act = {
        0: {0: {0: one}, 1: {1: ctx.neg(one)}},  # H, diag
        1: {1: {0: one}},                        # E
        2: {0: {1: one}},                        # F
    }
    for f in range(3):
        for g in range(3):  # H/E/F within factor f
            op = act[g]
            for idx, pos in odd_index.items():
                src = idx[f]
                for dst, c in op.get(src, {}).items():
                    tgt = list(idx)
                    tgt[f] = dst
                    put(3 * f + g, pos, odd_index[tuple(tgt)], c)

    def form(i, j):  # <v_{i+1}, v_{j+1}>
        if i == j:
            return ctx.zero
        return one if (i, j) == (0, 1) else ctx.neg(one)

    # Sym2(V) -> sl2 coordinates of the operator for the pair (v_{i+1}, v_{j+1})
    def sym_op(f, i, j):
        if i == 0 and j == 0:
            return {3 * f + 1: one}                      # E
        if i == 1 and j == 1:
            return {3 * f + 2: ctx.neg(one)}             # -F
        return {3 * f: ctx.neg(half)}                    # -(1/2) H

    items = sorted(odd_index.items())
    for (idx1, p1) in items:
        for (idx2, p2) in items:
            if p2 < p1:
                continue
            for f in range(3):
                o1, o2 = [g for g in range(3) if g != f]
                c = ctx.mul(a[f], ctx.mul(form(idx1[o1], idx2[o1]),
                                          form(idx1[o2], idx2[o2])))
                if ctx.is_zero(c):
                    continue
                for tgt, coeff in sym_op(f, idx1[f], idx2[f]).items():
                    put(p1, p2, tgt, ctx.mul(c, coeff))

    return build_superalgebra(
        ctx, labels, table,
        meta={"name": "d21", "a1": str(a[0]), "a2": str(a[1]), "a3": str(a[2])})


# ---------------------------------------------------------------------------
# rank-one even part: symmetric-power modules and form-valued brackets
# ---------------------------------------------------------------------------

from .modules import (  # noqa: E402  (keeps the module layer optional above)
    CoeffOperatorFamily,
    GModule,
    dual,
    family,
    sym2,
)
from .pairs import BilinearMap, HCPair, assemble_pair  # noqa: E402

import math  # noqa: E402


def sl2_algebra(ctx: FieldCtx) -> LieSuperalgebra:
    """Purely even algebra on H, E12, E21 inside 2x2 matrices."""
    h = ctx.arr([[1, 0], [0, -1]])
    e = _unit(ctx, 2, 0, 1)
    f = _unit(ctx, 2, 1, 0)
    return algebra_from_matrices(
        ctx, [("H", 0, h), ("E12", 0, e), ("E21", 0, f)], [0, 0],
        meta={"name": "sl2"})


def even_bracket_dict(alg: LieSuperalgebra) -> Dict[Tuple[int, int], Dict[int, object]]:
    """Structure constants of a purely even algebra, i < j pairs only, for
    feeding GModule representation checks."""
    return {
        (i, j): dict(row)
        for (i, j), row in alg.table.items() if i < j and row
    }


def conjugation_family(alg: LieSuperalgebra, label: str, x: np.ndarray,
                       root: Optional[Sequence[int]] = None) -> CoeffOperatorFamily:
    """Adjoint coefficient family of the unipotent (1 + t x) for a square-zero
    matrix x, acting on a matrix-realized algebra by conjugation:
    y -> y + t(xy - yx) - t^2 xyx."""
    ctx = alg.ctx
    if np.any(ctx.reduce(x @ x)):
        raise ValueError("conjugation_family needs a square-zero matrix")
    d = alg.dim
    a1 = ctx.zeros(d, d)
    a2 = ctx.zeros(d, d)
    for j, m in enumerate(alg.matrix_basis):
        img1 = coords_of_matrix(alg, ctx.reduce(x @ m - m @ x))
        img2 = coords_of_matrix(alg, ctx.reduce(-(x @ m @ x)))
        if img1 is None or img2 is None:
            raise ValueError("conjugation image leaves the algebra")
        a1[:, j] = img1
        a2[:, j] = img2
    return family(label, [Matrix.identity(ctx, d), Matrix(ctx, a1),
                          Matrix(ctx, a2)], root=root)


def adjoint_sl2_module(ctx: FieldCtx) -> GModule:
    """The adjoint module of sl2 with its two unipotent coefficient families."""
    alg = sl2_algebra(ctx)
    lie = [alg.ad(i) for i in range(3)]
    fams = [
        conjugation_family(alg, "X2", _unit(ctx, 2, 0, 1), root=(2,)),
        conjugation_family(alg, "X-2", _unit(ctx, 2, 1, 0), root=(-2,)),
    ]
    return GModule(ctx, alg.labels, alg.labels, lie, fams,
                   weights=[(0,), (2,), (-2,)],
                   brackets=even_bracket_dict(alg),
                   meta={"name": "adjoint-sl2"})


def symn_module(n: int, ctx: FieldCtx) -> GModule:
    """n-th symmetric power of the tautological rank-2 module.  Basis s_i
    (monomial of weight 2i - n); the group families act through divided
    powers, so they are defined for every characteristic:
      X2[t^k]  s_i = C(n-i, k) s_{i+k}
      X-2[t^k] s_i = C(i, k)   s_{i-k}
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    alg = sl2_algebra(ctx)
    d = n + 1
    h = ctx.zeros(d, d)
    e = ctx.zeros(d, d)
    f = ctx.zeros(d, d)
    for i in range(d):
        h[i, i] = ctx.of(2 * i - n)
        if i + 1 <= n:
            e[i + 1, i] = ctx.of(n - i)
        if i - 1 >= 0:
            f[i - 1, i] = ctx.of(i)
    up_ops = []
    down_ops = []
    for k in range(n + 1):
        up = ctx.zeros(d, d)
        down = ctx.zeros(d, d)
        for i in range(d):
            if i + k <= n:
                up[i + k, i] = ctx.of(math.comb(n - i, k))
            if i - k >= 0:
                down[i - k, i] = ctx.of(math.comb(i, k))
        up_ops.append(Matrix(ctx, up))
        down_ops.append(Matrix(ctx, down))
    fams = [family("X2", up_ops, root=(2,)),
            family("X-2", down_ops, root=(-2,))]
    return GModule(
        ctx, [f"s{i}" for i in range(d)], alg.labels,
        [Matrix(ctx, h), Matrix(ctx, e), Matrix(ctx, f)], fams,
        weights=[(2 * i - n,) for i in range(d)],
        brackets=even_bracket_dict(alg),
        meta={"name": f"sym{n}"})


def symn_dual(n: int, ctx: FieldCtx) -> GModule:
    return dual(symn_module(n, ctx))


class RecurrenceViolation(ValueError):
    pass


@dataclass(frozen=True)
class SL2FamilyConstants:
    """Structure constants of the symmetric bracket Sym^2(Sym_n(V)*) -> sl2:

      [s*_i, s*_{n-i}]   = a_i H      0 <= i <= n
      [s*_j, s*_{n-1-j}] = b_j E12    0 <= j <= n-1
      [s*_k, s*_{n+1-k}] = c_k E21    1 <= k <= n

    Closed forms, all scalar multiples of one parameter a:
      a_i = (-1)^i (C(n-1,i) - C(n-1,i-1)) a / 2
      b_j = (-1)^j C(n-1,j) a
      c_k = (-1)^k C(n-1,k-1) a
    """

    n: int
    a: object
    a_list: tuple
    b_list: tuple
    c_list: tuple  # index k-1 holds c_k


def sl2_symn_constants(n: int, a, ctx: FieldCtx) -> SL2FamilyConstants:
    if n < 1 or n % 2 == 0:
        raise RecurrenceViolation(
            "the bracket constants only close up for odd n")
    a = ctx.of(a)
    half = ctx.inv(ctx.of(2))

    def comb(m, k):
        return ctx.of(math.comb(m, k)) if 0 <= k <= m else ctx.zero

    def sgn(i):
        return ctx.one if i % 2 == 0 else ctx.neg(ctx.one)

    a_list = tuple(
        ctx.mul(ctx.mul(sgn(i), ctx.sub(comb(n - 1, i), comb(n - 1, i - 1))),
                ctx.mul(half, a))
        for i in range(n + 1))
    b_list = tuple(
        ctx.mul(sgn(j), ctx.mul(comb(n - 1, j), a)) for j in range(n))
    c_list = tuple(
        ctx.mul(sgn(k), ctx.mul(comb(n - 1, k - 1), a))
        for k in range(1, n + 1))

    def cc(k):
        return c_list[k - 1] if 1 <= k <= n else ctx.zero

    def bb(j):
        return b_list[j] if 0 <= j <= n - 1 else ctx.zero

    for i in range(n + 1):
        lhs = ctx.sub(ctx.mul(ctx.of(-(i + 1)), cc(i + 1)),
                      ctx.mul(ctx.of(n - i + 1), cc(i)))
        if lhs != ctx.mul(ctx.of(2), a_list[i]):
            raise RecurrenceViolation(f"E21 invariance fails on pair sum n, i={i}")
        lhs = ctx.sub(ctx.mul(ctx.of(-(n - i + 1)), bb(i - 1)),
                      ctx.mul(ctx.of(i + 1), bb(i)))
        if lhs != ctx.mul(ctx.of(-2), a_list[i]):
            raise RecurrenceViolation(f"E12 invariance fails on pair sum n, i={i}")
    for j in range(n):
        lhs = ctx.sub(ctx.mul(ctx.of(-(j + 1)),
                              a_list[j + 1] if j + 1 <= n else ctx.zero),
                      ctx.mul(ctx.of(n - j), a_list[j]))
        if lhs != ctx.neg(bb(j)):
            raise RecurrenceViolation(f"E21 invariance fails on pair sum n-1, j={j}")
    for k in range(1, n + 1):
        lhs = ctx.sub(ctx.mul(ctx.of(-(n - k + 1)),
                              a_list[k - 1] if k - 1 >= 0 else ctx.zero),
                      ctx.mul(ctx.of(k), a_list[k]))
        if lhs != cc(k):
            raise RecurrenceViolation(f"E12 invariance fails on pair sum n+1, k={k}")
    return SL2FamilyConstants(n, a, a_list, b_list, c_list)


def sl2_symn_bracket(n: int, a, ctx: FieldCtx) -> BilinearMap:
    const = sl2_symn_constants(n, a, ctx)
    entries: Dict[Tuple[int, int], np.ndarray] = {}

    def put(i, j, g_idx, c):
        if i > j:
            i, j = j, i
        v = entries.setdefault((i, j), ctx.zeros(3))
        v[g_idx] = ctx.add(v[g_idx], c)

    for i in range(n + 1):
        if i <= n - i:
            put(i, n - i, 0, const.a_list[i])
    for j in range(n):
        if j <= n - 1 - j:
            put(j, n - 1 - j, 1, const.b_list[j])
    for k in range(1, n + 1):
        if k <= n + 1 - k:
            put(k, n + 1 - k, 2, const.c_list[k - 1])
    return BilinearMap.from_entries(ctx, n + 1, 3, entries)


def sl2_symn_algebra(n: int, a, ctx: FieldCtx) -> LieSuperalgebra:
    """Total superalgebra candidate sl2 + Sym_n(V)* with the form-valued odd
    bracket.  Built unvalidated: the cubic identity genuinely fails for most
    (n, p) and callers probe it with validate_cubic_odd/validate_jacobi."""
    even = sl2_algebra(ctx)
    odd = symn_dual(n, ctx)
    bracket = sl2_symn_bracket(n, a, ctx)
    ne = even.dim
    basis = [(l, 0) for l in even.labels] + [(l, 1) for l in odd.labels]
    table: Dict[Tuple[int, int], Dict[int, object]] = {}
    for (i, j), row in even.table.items():
        if i <= j and row:
            table[(i, j)] = dict(row)
    for i in range(ne):
        m = odd.lie_action[i].data
        for j in range(odd.dim):
            entry = {ne + int(k): m[int(k), j]
                     for k in np.nonzero(m[:, j])[0]}
            if entry:
                table[(i, ne + j)] = entry
    for (i, j), v in bracket.tensor.items():
        entry = {int(k): v[int(k)] for k in np.nonzero(v)[0]}
        if entry:
            table[(ne + i, ne + j)] = entry
    return build_superalgebra(
        ctx, basis, table, validate=False,
        meta={"name": f"sl2+sym{n}*", "a": ctx.scalar_to_str(a)})


def sl2_symn_pair(n: int, a, ctx: FieldCtx) -> HCPair:
    """Fully validated pair; raises CubicViolation outside the small cases
    where the cubic identity actually holds."""
    even = sl2_algebra(ctx)
    odd = symn_dual(n, ctx)
    bracket = sl2_symn_bracket(n, a, ctx)
    adj = [
        conjugation_family(even, "X2", _unit(ctx, 2, 0, 1), root=(2,)),
        conjugation_family(even, "X-2", _unit(ctx, 2, 1, 0), root=(-2,)),
    ]
    return assemble_pair(even, odd, bracket, adj,
                         meta={"name": f"pair-sl2-sym{n}*",
                               "a": ctx.scalar_to_str(a)})
