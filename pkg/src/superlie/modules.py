"""Finite-dimensional modules carrying both a Lie-algebra action and a group
action encoded by coefficient operators of one-parameter subgroups.

A polynomial one-parameter subgroup X(t) = sum_i t^i A_i is stored as the
finite list of its coefficient operators.  The composition identity
X(t)X(s) = X(t+s), expanded symbolically in two variables, is equivalent to
A_a A_b = C(a+b, a) A_{a+b} for all a, b (with A_k = 0 past the end), and is
checked exactly at construction.  Closure and equivariance under all the A_i
is then equivalent to closure/equivariance under X(t) for every t in the
algebraic closure, which turns all group-theoretic questions here into finite
linear algebra.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fields import FieldCtx
from .linalg import (
    DimensionMismatch,
    Matrix,
    SpanSolver,
    Subspace,
    exact_matmul,
    int_scaled,
    invariant_closure,
    kernel,
    sparse_int_matmul,
)


class CompositionViolation(ValueError):
    pass


class NotInvariant(ValueError):
    def __init__(self, operator_name: str, msg: str = ""):
        super().__init__(f"subspace not invariant under {operator_name} {msg}")
        self.operator_name = operator_name


class LabelMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CoeffOperatorFamily:
    """One-parameter subgroup X(t) = sum_i t^i ops[i]; ops[0] must be the
    identity.  root, when set, is the weight shift of each t-power."""

    label: str
    ops: Tuple[Matrix, ...]
    root: Optional[Tuple[int, ...]] = None

    @property
    def ctx(self) -> FieldCtx:
        return self.ops[0].ctx

    @property
    def dim(self) -> int:
        return self.ops[0].rows

    @property
    def degree(self) -> int:
        return len(self.ops) - 1

    def op(self, k: int) -> Matrix:
        if 0 <= k < len(self.ops):
            return self.ops[k]
        return Matrix.zeros(self.ctx, self.dim, self.dim)

    def validate(self):
        ctx = self.ctx
        n = self.dim
        if not self.ops:
            raise CompositionViolation(f"{self.label}: empty family")
        if not np.array_equal(self.ops[0].data, ctx.eye(n)):
            raise CompositionViolation(f"{self.label}: op_0 is not the identity")
        d = self.degree
        if not ctx.p:
            # clear all denominators once: A_k = J_k / s, so the identity
            # A_a A_b = C(a+b,a) A_{a+b} becomes J_a J_b = C s J_{a+b} with
            # plain integer arithmetic throughout
            scaled = [int_scaled(op.data) for op in self.ops]
            s = 1
            for _, sk in scaled:
                s = s * sk // math.gcd(s, sk)
            ints = [j * (s // sk) for j, sk in scaled]
            for a in range(d + 1):
                for b in range(d + 1):
                    lhs = sparse_int_matmul(ints[a], ints[b])
                    if a + b > d:
                        if np.any(lhs != 0):
                            raise CompositionViolation(
                                f"{self.label}: A_{a} A_{b} nonzero beyond "
                                f"degree {d}")
                        continue
                    rhs = ints[a + b] * (math.comb(a + b, a) * s)
                    if not np.array_equal(lhs, rhs):
                        raise CompositionViolation(
                            f"{self.label}: A_{a} A_{b} != C({a+b},{a}) "
                            f"A_{a+b}")
            return
        for a in range(d + 1):
            for b in range(d + 1):
                lhs = exact_matmul(ctx, self.ops[a].data, self.ops[b].data)
                c = ctx.of(math.comb(a + b, a))
                rhs = self.op(a + b).data * c if a + b <= d else None
                if rhs is None:
                    if np.any(lhs):
                        raise CompositionViolation(
                            f"{self.label}: A_{a} A_{b} nonzero beyond degree {d}")
                elif np.any(ctx.reduce(lhs - rhs)):
                    raise CompositionViolation(
                        f"{self.label}: A_{a} A_{b} != C({a+b},{a}) A_{a+b}")

    def trimmed(self) -> "CoeffOperatorFamily":
        ops = list(self.ops)
        while len(ops) > 1 and ops[-1].is_zero():
            ops.pop()
        return CoeffOperatorFamily(self.label, tuple(ops), self.root)


def family(label: str, ops: Sequence[Matrix],
           root: Optional[Sequence[int]] = None) -> CoeffOperatorFamily:
    f = CoeffOperatorFamily(
        label, tuple(ops), tuple(root) if root is not None else None
    ).trimmed()
    f.validate()
    return f


class GModule:
    """A module with aligned Lie-algebra generators and group families.

    lie_labels/lie_action list the acting even Lie elements (typically a full
    basis of the even algebra); families are the group generators.  brackets,
    when provided, gives the structure constants of the acting algebra in the
    same indexing so the representation property can be verified.
    """

    def __init__(self, ctx: FieldCtx, labels: Sequence[str],
                 lie_labels: Sequence[str], lie_action: Sequence[Matrix],
                 families: Sequence[CoeffOperatorFamily],
                 weights: Optional[Sequence[Tuple[int, ...]]] = None,
                 brackets: Optional[Dict[Tuple[int, int], Dict[int, object]]] = None,
                 meta: Optional[dict] = None, validate: bool = True):
        self.ctx = ctx
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.lie_labels = tuple(lie_labels)
        self.lie_action = tuple(lie_action)
        self.families = tuple(families)
        self.weights = tuple(tuple(w) for w in weights) if weights else None
        self.brackets = brackets
        self.meta = dict(meta or {})
        if validate:
            self.validate()

    def __repr__(self):
        return f"GModule(dim={self.dim}, {self.ctx}, {self.meta.get('name', '?')})"

    def all_operators(self) -> List[Matrix]:
        ops = list(self.lie_action)
        for f in self.families:
            ops.extend(f.ops[1:])
        return ops

    def family_by_label(self, label: str) -> CoeffOperatorFamily:
        for f in self.families:
            if f.label == label:
                return f
        raise LabelMismatch(f"no family labeled {label}")

    def validate(self):
        ctx = self.ctx
        for m in self.lie_action:
            if m.rows != self.dim or m.cols != self.dim:
                raise DimensionMismatch("lie action shape mismatch")
        if len(self.lie_action) != len(self.lie_labels):
            raise DimensionMismatch("lie label count mismatch")
        for f in self.families:
            if f.dim != self.dim:
                raise DimensionMismatch(f"family {f.label} shape mismatch")
            f.validate()
        if self.brackets is not None:
            for (i, j), row in self.brackets.items():
                a, b = self.lie_action[i].data, self.lie_action[j].data
                comm = ctx.reduce(
                    exact_matmul(ctx, a, b) - exact_matmul(ctx, b, a))
                want = ctx.zeros(self.dim, self.dim)
                for k, c in row.items():
                    want = want + self.lie_action[k].data * ctx.of(c)
                if np.any(ctx.reduce(comm - want)):
                    raise CompositionViolation(
                        f"representation property fails on ({i},{j})")
        if self.weights is not None:
            for f in self.families:
                if f.root is None:
                    continue
                for k, op in enumerate(f.ops):
                    if k == 0:
                        continue
                    for r, c in zip(*np.nonzero(op.data)):
                        if tuple(
                            a + k * b
                            for a, b in zip(self.weights[c], f.root)
                        ) != self.weights[r]:
                            raise CompositionViolation(
                                f"{f.label}: op_{k} breaks weights at "
                                f"({r},{c})")

    # -- serialization --------------------------------------------------------
    def to_json_dict(self) -> dict:
        def mat(m: Matrix):
            return [[self.ctx.scalar_to_str(x) for x in row]
                    for row in m.data.tolist()]

        return {
            "field": {"p": self.ctx.p} if self.ctx.p else "Q",
            "labels": list(self.labels),
            "weights": [list(w) for w in self.weights] if self.weights else None,
            "lie": [
                {"label": l, "matrix": mat(m)}
                for l, m in zip(self.lie_labels, self.lie_action)
            ],
            "families": [
                {
                    "label": f.label,
                    "root": list(f.root) if f.root else None,
                    "ops": [mat(op) for op in f.ops],
                }
                for f in self.families
            ],
            "meta": self.meta,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_dict(), **kw)


def module_from_json_dict(d: dict) -> GModule:
    ctx = FieldCtx.rationals() if d["field"] == "Q" else FieldCtx.prime(
        int(d["field"]["p"]))
    lie_labels = [e["label"] for e in d["lie"]]
    lie_action = [Matrix.from_rows(ctx, e["matrix"]) for e in d["lie"]]
    fams = [
        family(e["label"], [Matrix.from_rows(ctx, m) for m in e["ops"]],
               root=e.get("root"))
        for e in d["families"]
    ]
    return GModule(ctx, d["labels"], lie_labels, lie_action, fams,
                   weights=d.get("weights"), meta=d.get("meta", {}))


def module_from_json(s: str) -> GModule:
    return module_from_json_dict(json.loads(s))


# ---------------------------------------------------------------------------
# functorial constructions
# ---------------------------------------------------------------------------

def trivial_module(ctx: FieldCtx, lie_labels: Sequence[str],
                   family_labels: Sequence[str],
                   weight_arity: int = 1) -> GModule:
    one = Matrix.identity(ctx, 1)
    z = Matrix.zeros(ctx, 1, 1)
    fams = [family(l, [one]) for l in family_labels]
    return GModule(ctx, ["1"], lie_labels, [z] * len(lie_labels), fams,
                   weights=[(0,) * weight_arity], meta={"name": "trivial"})


def dual(m: GModule) -> GModule:
    """Dual module: x acts by -x^T; X(t) acts by (X(t)^{-1})^T = X(-t)^T,
    so the k-th coefficient operator is (-1)^k A_k^T."""
    ctx = m.ctx
    lie = [Matrix(ctx, -a.data.T) for a in m.lie_action]
    fams = []
    for f in m.families:
        ops = [
            Matrix(ctx, op.data.T if k % 2 == 0 else -op.data.T)
            for k, op in enumerate(f.ops)
        ]
        # the underlying group element is unchanged, so the root is too
        fams.append(family(f.label, ops, root=f.root))
    weights = [tuple(-x for x in w) for w in m.weights] if m.weights else None
    labels = [l + "*" for l in m.labels]
    meta = dict(m.meta)
    meta["name"] = meta.get("name", "module") + "*"
    return GModule(ctx, labels, m.lie_labels, lie, fams, weights=weights,
                   brackets=m.brackets, meta=meta)


def _kron(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        # dense object kron multiplies every Fraction pair; only the nonzero
        # blocks matter
        rb, cb = b.shape
        out = np.full((a.shape[0] * rb, a.shape[1] * cb), ctx.zero,
                      dtype=object)
        bi, bj = np.nonzero(b)
        bv = b[bi, bj]
        for i, j in zip(*np.nonzero(a)):
            aij = a[i, j]
            out[i * rb + bi, j * cb + bj] = [aij * x for x in bv]
        return ctx.reduce(out)
    return ctx.reduce(np.kron(a, b))


def tensor(m1: GModule, m2: GModule) -> GModule:
    """Tensor product: Leibniz action for the Lie part; X(t) (x) X(t) for the
    families, coefficients gathered by t-power."""
    ctx = m1.ctx
    if ctx != m2.ctx or m1.lie_labels != m2.lie_labels:
        raise LabelMismatch("tensor factors must share field and Lie labels")
    d1, d2 = m1.dim, m2.dim
    i1, i2 = ctx.eye(d1), ctx.eye(d2)
    lie = [
        Matrix(ctx, _kron(ctx, a.data, i2) + _kron(ctx, i1, b.data))
        for a, b in zip(m1.lie_action, m2.lie_action)
    ]
    fams = []
    for f1 in m1.families:
        f2 = m2.family_by_label(f1.label)
        deg = f1.degree + f2.degree
        ops = []
        for k in range(deg + 1):
            acc = ctx.zeros(d1 * d2, d1 * d2)
            for a in range(k + 1):
                acc = acc + _kron(ctx, f1.op(a).data, f2.op(k - a).data)
            ops.append(Matrix(ctx, acc))
        fams.append(family(f1.label, ops, root=f1.root))
    labels = [f"{a}(x){b}" for a in m1.labels for b in m2.labels]
    weights = None
    if m1.weights and m2.weights:
        weights = [
            tuple(x + y for x, y in zip(wa, wb))
            for wa in m1.weights for wb in m2.weights
        ]
    meta = {"name": f"{m1.meta.get('name','?')}(x){m2.meta.get('name','?')}"}
    return GModule(ctx, labels, m1.lie_labels, lie, fams, weights=weights,
                   brackets=m1.brackets, meta=meta)


def _pair_maps(ctx: FieldCtx, n: int, sign: int):
    """Injection/projection between the (anti)symmetric square and the tensor
    square.  sign=+1: basis e_i e_j (i<=j); sign=-1: e_i ^ e_j (i<j)."""
    pairs = [(i, j) for i in range(n) for j in range(i, n) if sign > 0 or i < j]
    d = len(pairs)
    iota = ctx.zeros(n * n, d)
    proj = ctx.zeros(d, n * n)
    half = ctx.inv(ctx.of(2))
    for col, (i, j) in enumerate(pairs):
        iota[i * n + j, col] = ctx.one
        if i != j:
            iota[j * n + i, col] = ctx.of(sign)
            proj[col, i * n + j] = half
            proj[col, j * n + i] = ctx.mul(ctx.of(sign), half)
        else:
            proj[col, i * n + i] = ctx.one
    return pairs, Matrix(ctx, iota), Matrix(ctx, proj)


def _squared(m: GModule, sign: int, name: str) -> GModule:
    ctx = m.ctx
    sq = tensor(m, m)
    pairs, iota, proj = _pair_maps(ctx, m.dim, sign)
    lie = [Matrix(ctx, exact_matmul(
        ctx, exact_matmul(ctx, proj.data, a.data), iota.data))
        for a in sq.lie_action]
    fams = []
    for f in sq.families:
        ops = [Matrix(ctx, exact_matmul(
            ctx, exact_matmul(ctx, proj.data, op.data), iota.data))
            for op in f.ops]
        fams.append(family(f.label, ops, root=f.root))
    sep = "." if sign > 0 else "^"
    labels = [f"{m.labels[i]}{sep}{m.labels[j]}" for i, j in pairs]
    weights = None
    if m.weights:
        weights = [
            tuple(x + y for x, y in zip(m.weights[i], m.weights[j]))
            for i, j in pairs
        ]
    meta = {"name": f"{name}({m.meta.get('name','?')})"}
    mod = GModule(ctx, labels, m.lie_labels, lie, fams, weights=weights,
                  brackets=m.brackets, meta=meta)
    mod.pair_index = {p: c for c, p in enumerate(pairs)}  # type: ignore
    return mod


def sym2(m: GModule) -> GModule:
    return _squared(m, +1, "Sym2")


def lambda2(m: GModule) -> GModule:
    return _squared(m, -1, "L2")


def submodule_generated(m: GModule, seeds: Sequence[np.ndarray]) -> Subspace:
    """Smallest subspace containing the seeds and invariant under the Lie
    action and every coefficient operator."""
    return invariant_closure(m.ctx, m.dim, list(seeds), m.all_operators())


def _operator_name(m: GModule, idx: int) -> str:
    if idx < len(m.lie_action):
        return m.lie_labels[idx]
    idx -= len(m.lie_action)
    for f in m.families:
        n = len(f.ops) - 1
        if idx < n:
            return f"{f.label}[t^{idx + 1}]"
        idx -= n
    return "?"


def quotient_module(m: GModule, w: Subspace,
                    labels: Optional[Sequence[str]] = None) -> GModule:
    """Quotient by an invariant subspace; basis = non-pivot coordinates."""
    ctx = m.ctx
    for k, op in enumerate(m.all_operators()):
        for v in w.basis.data:
            if not w.contains(op.mv(v)):
                raise NotInvariant(_operator_name(m, k))
    keep = [i for i in range(m.dim) if i not in set(w.pivots)]
    d = len(keep)

    def induce(op: Matrix) -> Matrix:
        out = ctx.zeros(d, d)
        for col, b in enumerate(keep):
            img = op.data[:, b].copy()
            residual, _ = w.reduce_vector(img)
            out[:, col] = residual[keep]
        return Matrix(ctx, out)

    lie = [induce(a) for a in m.lie_action]
    fams = [
        family(f.label, [induce(op) for op in f.ops], root=f.root)
        for f in m.families
    ]
    if labels is None:
        labels = [m.labels[i] + "~" for i in keep]
    weights = [m.weights[i] for i in keep] if m.weights else None
    meta = dict(m.meta)
    meta["name"] = meta.get("name", "module") + "/w"
    return GModule(ctx, labels, m.lie_labels, lie, fams, weights=weights,
                   brackets=m.brackets, meta=meta)


def quotient_module_with_basis(m: GModule, w: Subspace,
                               reps: Sequence[np.ndarray],
                               labels: Sequence[str],
                               weights: Optional[Sequence] = None,
                               name: str = "quotient") -> GModule:
    """Quotient of span(w, reps) by w, on the given representative basis.

    Operators must preserve the span; the induced matrices are read off from
    coordinates in the (w-basis + reps) spanning set.
    """
    ctx = m.ctx
    rows = list(w.basis.data) + [ctx.reduce(np.asarray(r)) for r in reps]
    solver = SpanSolver(ctx, np.stack(rows))
    nw, d = w.dim, len(reps)

    def induce(op: Matrix, opname: str) -> Matrix:
        out = ctx.zeros(d, d)
        for col in range(d):
            img = op.mv(rows[nw + col])
            coords = solver.coords(img)
            if coords is None:
                raise NotInvariant(opname, "(image leaves the span)")
            out[:, col] = coords[nw:]
        return Matrix(ctx, out)

    lie = [induce(a, l) for a, l in zip(m.lie_action, m.lie_labels)]
    fams = [
        family(f.label, [induce(op, f.label) for op in f.ops], root=f.root)
        for f in m.families
    ]
    return GModule(ctx, labels, m.lie_labels, lie, fams, weights=weights,
                   brackets=m.brackets, meta={"name": name})


def module_from_subspace(m: GModule, w: Subspace,
                         labels: Optional[Sequence[str]] = None,
                         name: str = "submodule") -> GModule:
    """Restriction of all operators to an invariant subspace."""
    ctx = m.ctx
    solver = SpanSolver(ctx, w.basis.data)
    d = w.dim

    def restrict(op: Matrix, opname: str) -> Matrix:
        out = ctx.zeros(d, d)
        for col in range(d):
            coords = solver.coords(op.mv(w.basis.data[col]))
            if coords is None:
                raise NotInvariant(opname)
            out[:, col] = coords
        return Matrix(ctx, out)

    lie = [restrict(a, l) for a, l in zip(m.lie_action, m.lie_labels)]
    fams = [
        family(f.label, [restrict(op, f.label) for op in f.ops], root=f.root)
        for f in m.families
    ]
    if labels is None:
        labels = [f"w{i}" for i in range(d)]
    return GModule(ctx, labels, m.lie_labels, lie, fams,
                   brackets=m.brackets, meta={"name": name})


def trivial_quotient_defect(m: GModule) -> Subspace:
    """The smallest submodule W such that the group acts trivially on m/W:
    the closure of the images of all Lie operators and all positive-degree
    coefficient operators."""
    seeds = []
    for op in m.all_operators():
        seeds.extend(list(op.data.T))
    return invariant_closure(m.ctx, m.dim, seeds, m.all_operators())


# ---------------------------------------------------------------------------
# intertwiners
# ---------------------------------------------------------------------------

def _constraint_pairs(m1: GModule, m2: GModule, mode: str):
    pairs = []
    if mode in ("algebra", "both"):
        if m1.lie_labels != m2.lie_labels:
            raise LabelMismatch("modules act under different Lie labels")
        alg = list(zip(m1.lie_action, m2.lie_action))
    else:
        alg = []
    if mode in ("group", "both"):
        grp = []
        for f1 in m1.families:
            f2 = m2.family_by_label(f1.label)
            for k in range(1, max(f1.degree, f2.degree) + 1):
                grp.append((f1.op(k), f2.op(k)))
    else:
        grp = []
    return alg, grp


def _intertwiner_space(ctx: FieldCtx, d1: int, d2: int,
                       op_pairs: Sequence[Tuple[Matrix, Matrix]]) -> Subspace:
    """Solutions f (d2 x d1, flattened row-major) of B f = f A for all pairs."""
    n = d1 * d2
    space: Optional[Subspace] = None
    for a, b in op_pairs:
        i1, i2 = ctx.eye(d1), ctx.eye(d2)
        lmat = ctx.reduce(_kron(ctx, b.data, i1) - _kron(ctx, i2, a.data.T))
        if space is None:
            space = kernel(Matrix(ctx, lmat))
        else:
            if space.dim == 0:
                return space
            resid = exact_matmul(ctx, space.basis.data, lmat.T)
            coeff_kernel = kernel(Matrix(ctx, resid.T))
            vecs = exact_matmul(ctx, coeff_kernel.basis.data, space.basis.data)
            space = Subspace.from_vectors(ctx, n, list(vecs))
    if space is None:
        space = Subspace.full(ctx, n)
    return space


@dataclass
class HomReport:
    dim: int
    basis: List[Matrix]
    dim_algebra: Optional[int] = None
    dim_group: Optional[int] = None
    basis_algebra: Optional[List[Matrix]] = None
    basis_group: Optional[List[Matrix]] = None


def hom_space(m1: GModule, m2: GModule, mode: str = "group") -> HomReport:
    """Equivariant linear maps m1 -> m2.

    algebra mode: f a = b f over the Lie generators; group mode: the same per
    positive t-power of every matched family; both computes both spaces."""
    if m1.ctx != m2.ctx:
        raise DimensionMismatch("field mismatch")
    ctx, d1, d2 = m1.ctx, m1.dim, m2.dim

    def solve_pairs(pairs):
        space = _intertwiner_space(ctx, d1, d2, pairs)
        mats = [Matrix(ctx, v.reshape(d2, d1).copy()) for v in space.basis.data]
        return space.dim, mats

    if mode == "algebra":
        alg, _ = _constraint_pairs(m1, m2, "algebra")
        dim, basis = solve_pairs(alg)
        return HomReport(dim=dim, basis=basis, dim_algebra=dim,
                         basis_algebra=basis)
    if mode == "group":
        _, grp = _constraint_pairs(m1, m2, "group")
        dim, basis = solve_pairs(grp)
        return HomReport(dim=dim, basis=basis, dim_group=dim,
                         basis_group=basis)
    if mode == "both":
        alg, grp = _constraint_pairs(m1, m2, "both")
        da, ba = solve_pairs(alg)
        dg, bg = solve_pairs(grp)
        return HomReport(dim=dg, basis=bg, dim_algebra=da, dim_group=dg,
                         basis_algebra=ba, basis_group=bg)
    raise ValueError(f"unknown mode {mode!r}")


def socle_via_homs(m: GModule, irreducibles: Sequence[GModule]) -> Subspace:
    """Sum of the images of all group-mode intertwiners L -> m over the given
    (asserted irreducible) modules L."""
    total = Subspace.zero(m.ctx, m.dim)
    for irr in irreducibles:
        rep = hom_space(irr, m, mode="group")
        for f in rep.basis:
            total = total.sum(Subspace.from_vectors(
                m.ctx, m.dim, list(f.data.T)))
    return total
