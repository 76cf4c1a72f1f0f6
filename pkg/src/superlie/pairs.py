"""Harish-Chandra pairs: a purely even algebra with a group-style module
structure on an odd space and a symmetric equivariant bracket back into the
even part.  Assembly checks the three pair axioms exactly:

1. the bracket is symmetric,
2. X(t)[v, w] = [X(t)v, X(t)w] as polynomial identities in t, where X(t)
   acts on the even part through the matching adjoint coefficient family,
3. [[v, v], v] = 0 symbolically in the odd coordinates.

The assembled object carries the total Lie superalgebra, which is also put
through the full Jacobi validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fields import FieldCtx
from .linalg import DimensionMismatch, Matrix, Subspace, kernel
from .modules import (
    CoeffOperatorFamily,
    GModule,
    family,
    module_from_json_dict,
    quotient_module,
    trivial_quotient_defect,
)
from .superalgebra import (
    LieSuperalgebra,
    SuperIdeal,
    algebra_from_json_dict,
    build_superalgebra,
)


class SymmetryViolation(ValueError):
    pass


class EquivarianceViolation(ValueError):
    def __init__(self, family_label: str, power: int, pair: Tuple[int, int]):
        super().__init__(
            f"equivariance fails for {family_label} at t^{power} on basis "
            f"pair {pair}")
        self.family_label = family_label
        self.power = power
        self.pair = pair


class CubicViolation(ValueError):
    def __init__(self, witness):
        super().__init__(f"[[v,v],v] does not vanish; witness {witness}")
        self.witness = witness


class NotNormal(ValueError):
    pass


class InvalidSubpair(ValueError):
    pass


@dataclass
class BilinearMap:
    """Symmetric bilinear map V x V -> g, stored sparsely on i <= j pairs."""

    ctx: FieldCtx
    dim_v: int
    dim_g: int
    tensor: Dict[Tuple[int, int], np.ndarray]

    @classmethod
    def from_entries(cls, ctx: FieldCtx, dim_v: int, dim_g: int,
                     entries: Dict[Tuple[int, int], np.ndarray]) -> "BilinearMap":
        t: Dict[Tuple[int, int], np.ndarray] = {}
        for (i, j), v in entries.items():
            v = ctx.reduce(np.asarray(v))
            if v.shape != (dim_g,):
                raise DimensionMismatch("bracket value length mismatch")
            key = (min(i, j), max(i, j))
            if key in t:
                if np.any(ctx.reduce(t[key] - v)):
                    raise SymmetryViolation(
                        f"conflicting values for pair {key}")
            elif np.any(v):
                t[key] = v
        return cls(ctx, dim_v, dim_g, t)

    def value(self, i: int, j: int) -> np.ndarray:
        v = self.tensor.get((min(i, j), max(i, j)))
        return v if v is not None else self.ctx.zeros(self.dim_g)

    def apply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = self.ctx.zeros(self.dim_g)
        for i in np.nonzero(x)[0]:
            for j in np.nonzero(y)[0]:
                v = self.tensor.get((min(i, j), max(i, j)))
                if v is not None:
                    out = self.ctx.reduce(
                        out + v * self.ctx.mul(x[int(i)], y[int(j)]))
        return out

    def is_zero(self) -> bool:
        return not self.tensor

    def annihilator(self) -> Subspace:
        """{v : [v, w] = 0 for all w}."""
        blocks = []
        for j in range(self.dim_v):
            a = self.ctx.zeros(self.dim_g, self.dim_v)
            for i in range(self.dim_v):
                a[:, i] = self.value(i, j)
            blocks.append(a)
        return kernel(Matrix(self.ctx, np.concatenate(blocks, axis=0)))


@dataclass(frozen=True)
class SubpairSpec:
    h_lie: Subspace
    h_generators: Tuple[str, ...]
    w: Subspace


@dataclass
class HCPair:
    even: LieSuperalgebra
    odd: GModule
    bracket: BilinearMap
    adjoint_families: Tuple[CoeffOperatorFamily, ...]
    algebra: LieSuperalgebra
    certificate: Dict = field(default_factory=dict)
    meta: Dict = field(default_factory=dict)

    @property
    def dims(self) -> Tuple[int, int]:
        return self.even.dim, self.odd.dim

    def adjoint_by_label(self, label: str) -> CoeffOperatorFamily:
        for f in self.adjoint_families:
            if f.label == label:
                return f
        raise KeyError(f"no adjoint family labeled {label}")


def _check_equivariance(odd: GModule, bracket: BilinearMap,
                        adjoint_families: Sequence[CoeffOperatorFamily]):
    ctx = odd.ctx
    adj = {f.label: f for f in adjoint_families}
    for fam in odd.families:
        if fam.label not in adj:
            raise EquivarianceViolation(fam.label, -1, (-1, -1))
        gfam = adj[fam.label]
        max_deg = max(2 * fam.degree, gfam.degree)
        for i in range(odd.dim):
            for j in range(i, odd.dim):
                base = bracket.value(i, j)
                for m in range(1, max_deg + 1):
                    lhs = ctx.zeros(bracket.dim_g)
                    for a in range(m + 1):
                        xa = fam.op(a).data[:, i]
                        xb = fam.op(m - a).data[:, j]
                        if np.any(xa) and np.any(xb):
                            lhs = ctx.reduce(lhs + bracket.apply(xa, xb))
                    rhs = gfam.op(m).mv(base)
                    if np.any(ctx.reduce(lhs - rhs)):
                        raise EquivarianceViolation(fam.label, m, (i, j))


def assemble_pair(even: LieSuperalgebra, odd: GModule, bracket: BilinearMap,
                  adjoint_families: Sequence[CoeffOperatorFamily],
                  meta: Optional[dict] = None) -> HCPair:
    """Validated Harish-Chandra pair.  Runs the symmetry, equivariance and
    cubic axioms, assembles the total superalgebra and validates Jacobi."""
    ctx = even.ctx
    if any(p for p in even.parities):
        raise DimensionMismatch("even part must be purely even")
    if odd.lie_labels != even.labels:
        raise DimensionMismatch("odd module does not act under the even basis")
    if bracket.dim_v != odd.dim or bracket.dim_g != even.dim:
        raise DimensionMismatch("bracket shape mismatch")
    for f in adjoint_families:
        if f.dim != even.dim:
            raise DimensionMismatch("adjoint family shape mismatch")
        f.validate()

    _check_equivariance(odd, bracket, adjoint_families)

    ne, no = even.dim, odd.dim
    basis = [(l, 0) for l in even.labels] + [(l, 1) for l in odd.labels]
    table: Dict[Tuple[int, int], Dict[int, object]] = {}
    for (i, j), row in even.table.items():
        if i <= j and row:
            table[(i, j)] = dict(row)
    for i in range(ne):
        a = odd.lie_action[i].data
        for j in range(no):
            entry = {
                ne + int(k): a[int(k), j] for k in np.nonzero(a[:, j])[0]
            }
            if entry:
                table[(i, ne + j)] = entry
    for (i, j), v in bracket.tensor.items():
        entry = {int(k): v[int(k)] for k in np.nonzero(v)[0]}
        if entry:
            table[(ne + i, ne + j)] = entry
    meta = dict(meta or {})
    meta.setdefault("name", "pair")
    alg = build_superalgebra(ctx, basis, table, meta=meta)
    cubic = alg.validate_cubic_odd()
    if not cubic.ok:
        raise CubicViolation(cubic.witness)
    cert = {
        "symmetric": True,
        "equivariant_families": [f.label for f in odd.families],
        "cubic": True,
        "jacobi": True,
        "group_level_assumptions": "declared, not computed",
    }
    return HCPair(even=even, odd=odd, bracket=bracket,
                  adjoint_families=tuple(adjoint_families), algebra=alg,
                  certificate=cert, meta=meta)


def is_split(pair: HCPair) -> bool:
    return pair.bracket.is_zero()


def check_sas_conditions(pair: HCPair):
    """Module-level SAS conditions: (1) the group acts with no nonzero
    trivial quotient on the odd part; (2) the bracket-annihilator contains no
    nonzero invariant subspace.  The group-level almost-simplicity of the even
    group is an input assumption, recorded in the details."""
    from .linalg import largest_invariant_within

    odd = pair.odd
    defect = trivial_quotient_defect(odd)
    cond1 = defect.dim == odd.dim
    ann = pair.bracket.annihilator()
    core = largest_invariant_within(ann, odd.all_operators())
    cond2 = core.dim == 0
    details = {
        "trivial_quotient_defect_dim": defect.dim,
        "odd_dim": odd.dim,
        "annihilator_dim": ann.dim,
        "annihilator_core_dim": core.dim,
        "group_assumption": "even group almost-simple: declared, not computed",
    }
    if not cond1:
        details["defect"] = defect
    if not cond2:
        details["annihilator_core"] = core
    return cond1, cond2, details


def _vector_action(pair: HCPair, g_vec: np.ndarray) -> Matrix:
    """Action of an even element (in g coordinates) on the odd part."""
    ctx = pair.even.ctx
    out = ctx.zeros(pair.odd.dim, pair.odd.dim)
    for i in np.nonzero(g_vec)[0]:
        out = ctx.reduce(
            out + pair.odd.lie_action[int(i)].data * g_vec[int(i)])
    return Matrix(ctx, out)


def check_normality(pair: HCPair, s: SubpairSpec) -> Dict:
    """Normality conditions for a subpair, at the level checkable from
    module data.  cond1 is the algebra-level ideal condition; cond2-cond4
    are checked directly on the declared generators."""
    ctx = pair.even.ctx
    odd = pair.odd
    if s.h_lie.ambient_dim != pair.even.dim or s.w.ambient_dim != odd.dim:
        raise InvalidSubpair("subpair ambient dimensions do not match")
    # subpair internal validity: w closed under H, bracket(w, w) in h_lie
    for label in s.h_generators:
        fam = odd.family_by_label(label)
        for op in fam.ops[1:]:
            for v in s.w.basis.data:
                if not s.w.contains(op.mv(v)):
                    raise InvalidSubpair(f"w not closed under {label}")
    for h in s.h_lie.basis.data:
        act = _vector_action(pair, h)
        for v in s.w.basis.data:
            if not s.w.contains(act.mv(v)):
                raise InvalidSubpair("w not closed under Lie(H)")
    for v1 in s.w.basis.data:
        for v2 in s.w.basis.data:
            if not s.h_lie.contains(pair.bracket.apply(v1, v2)):
                raise InvalidSubpair("bracket(w, w) leaves Lie(H)")

    report: Dict[str, bool] = {}
    # (1) at algebra level: Lie(H) is an ideal, stable under adjoint families
    ok = True
    for h in s.h_lie.basis.data:
        full = pair.even.ctx.zeros(pair.even.dim)
        full[:] = h
        for j in range(pair.even.dim):
            if not s.h_lie.contains(pair.even.bracket_with_basis(full, j)):
                ok = False
    for gfam in pair.adjoint_families:
        for op in gfam.ops[1:]:
            for h in s.h_lie.basis.data:
                if not s.h_lie.contains(op.mv(h)):
                    ok = False
    report["cond1_algebra_level"] = ok
    # (2) w invariant under every operator of the whole pair
    ok = True
    for op in odd.all_operators():
        for v in s.w.basis.data:
            if not s.w.contains(op.mv(v)):
                ok = False
    report["cond2"] = ok
    # (3) H acts trivially on V/w: positive-power images of the generator
    # families and the images of Lie(H) land in w
    ok = True
    for label in s.h_generators:
        fam = odd.family_by_label(label)
        for op in fam.ops[1:]:
            for col in op.data.T:
                if not s.w.contains(col):
                    ok = False
    for h in s.h_lie.basis.data:
        act = _vector_action(pair, h)
        for col in act.data.T:
            if not s.w.contains(col):
                ok = False
    report["cond3"] = ok
    # (4) [V, w] inside Lie(H)
    ok = True
    for v in s.w.basis.data:
        for i in range(odd.dim):
            e = ctx.zeros(odd.dim)
            e[i] = ctx.one
            if not s.h_lie.contains(pair.bracket.apply(e, v)):
                ok = False
    report["cond4"] = ok
    report["ok"] = all(report.values())
    return report


def quotient_pair(pair: HCPair, s: SubpairSpec) -> HCPair:
    report = check_normality(pair, s)
    if not report["ok"]:
        raise NotNormal(f"normality criterion fails: {report}")
    ctx = pair.even.ctx
    ideal = SuperIdeal(pair.even, s.h_lie,
                       Subspace.zero(ctx, 0))
    even_q = pair.even.quotient(ideal)
    keep_g = [i for i in range(pair.even.dim) if i not in set(s.h_lie.pivots)]
    odd_q_all = quotient_module(pair.odd, s.w)
    odd_q = GModule(
        ctx, odd_q_all.labels, even_q.labels,
        [odd_q_all.lie_action[i] for i in keep_g],
        odd_q_all.families, weights=odd_q_all.weights,
        meta={"name": pair.meta.get("name", "pair") + "/sub"})
    keep_v = [i for i in range(pair.odd.dim) if i not in set(s.w.pivots)]
    entries: Dict[Tuple[int, int], np.ndarray] = {}
    for a, i in enumerate(keep_v):
        for b, j in enumerate(keep_v):
            if a > b:
                continue
            residual, _ = s.h_lie.reduce_vector(pair.bracket.value(i, j))
            entries[(a, b)] = residual[keep_g]
    bracket_q = BilinearMap.from_entries(
        ctx, len(keep_v), len(keep_g), entries)
    adj_q = []
    for gfam in pair.adjoint_families:
        ops = []
        for op in gfam.ops:
            out = ctx.zeros(len(keep_g), len(keep_g))
            for col, b in enumerate(keep_g):
                img = op.data[:, b].copy()
                residual, _ = s.h_lie.reduce_vector(img)
                out[:, col] = residual[keep_g]
            ops.append(Matrix(ctx, out))
        adj_q.append(family(gfam.label, ops, root=gfam.root))
    return assemble_pair(even_q, odd_q, bracket_q, adj_q,
                         meta={"name": pair.meta.get("name", "pair") + "/q"})


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def pair_to_json_dict(pair: HCPair) -> dict:
    ctx = pair.even.ctx

    def mat(m: Matrix):
        return [[ctx.scalar_to_str(x) for x in row] for row in m.data.tolist()]

    d = pair.even.to_json_dict()
    d["odd_action"] = pair.odd.to_json_dict()
    d["odd_bracket"] = [
        [i, j, [ctx.scalar_to_str(x) for x in v.tolist()]]
        for (i, j), v in sorted(pair.bracket.tensor.items())
    ]
    d["adjoint_families"] = [
        {"label": f.label, "root": list(f.root) if f.root else None,
         "ops": [mat(op) for op in f.ops]}
        for f in pair.adjoint_families
    ]
    return d


def pair_from_json_dict(d: dict) -> HCPair:
    even = algebra_from_json_dict(
        {k: d[k] for k in ("field", "basis", "brackets", "meta")})
    odd = module_from_json_dict(d["odd_action"])
    ctx = even.ctx
    entries = {
        (int(i), int(j)): ctx.vec(v) for i, j, v in d["odd_bracket"]
    }
    bracket = BilinearMap.from_entries(ctx, odd.dim, even.dim, entries)
    adj = [
        family(e["label"], [Matrix.from_rows(ctx, m) for m in e["ops"]],
               root=e.get("root"))
        for e in d["adjoint_families"]
    ]
    return assemble_pair(even, odd, bracket, adj, meta=d.get("meta", {}))


def pair_from_json(s: str) -> HCPair:
    return pair_from_json_dict(json.loads(s))
