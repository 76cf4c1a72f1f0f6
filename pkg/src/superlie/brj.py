"""Staged construction of the exceptional 10|12-dimensional superalgebra in
characteristic 5.

Pipeline over F_p (p = 5 by default):

  1. the rank-2 symplectic algebra g on its 4-dimensional module V,
  2. the 5-dimensional quotient of the exterior square of V by the span of
     the invariant form element,
  3. the 20-dimensional tensor module N, its 16-dimensional submodule M
     generated by a highest vector, and the 4-dimensional socle of M,
  4. the 12-dimensional quotient U = M/socle on an explicit weight basis,
  5. the space of equivariant maps Sym^2(U) -> g, expected 1-dimensional
     exactly for p = 5,
  6. the normalized symmetric bracket, pair assembly, and the simplicity and
     module-level SAS verdicts.

Each stage's dimension is asserted against the expected profile; a mismatch
raises PipelineAssertion carrying the partial report, which is exactly what
happens at the hom stage for p != 5.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .fields import FieldCtx
from .linalg import Matrix, Subspace
from .modules import (
    GModule,
    family,
    hom_space,
    lambda2,
    module_from_subspace,
    quotient_module_with_basis,
    socle_via_homs,
    submodule_generated,
    sym2,
    tensor,
)
from .pairs import BilinearMap, HCPair, assemble_pair, check_sas_conditions
from .superalgebra import LieSuperalgebra
from .constructions import (
    algebra_from_matrices,
    conjugation_family,
    even_bracket_dict,
)

EXPECTED_STAGE_DIMS = {
    "V": 4,
    "L2V": 6,
    "Lw2": 5,
    "N": 20,
    "M": 16,
    "socle": 4,
    "U": 12,
    "Sym2U": 78,
    "hom": 1,
}


class PipelineAssertion(AssertionError):
    def __init__(self, stage: str, expected, got, report=None):
        super().__init__(f"stage {stage}: expected {expected}, got {got}")
        self.stage = stage
        self.expected = expected
        self.got = got
        self.report = report


@dataclass
class PipelineReport:
    p: int
    stage_dims: Dict[str, int] = field(default_factory=dict)
    socle_matches_expected: Optional[bool] = None
    hom_dim_group: Optional[int] = None
    hom_dim_algebra: Optional[int] = None
    first_constant: Optional[str] = None
    pair: Optional[HCPair] = None
    algebra: Optional[LieSuperalgebra] = None
    simplicity: Optional[str] = None
    sas: Optional[Tuple[bool, bool]] = None
    seconds: Dict[str, float] = field(default_factory=dict)


def _check(report: PipelineReport, stage: str, got: int):
    report.stage_dims[stage] = got
    want = EXPECTED_STAGE_DIMS[stage]
    if got != want:
        raise PipelineAssertion(stage, want, got, report)


def _e(ctx: FieldCtx, a: int, b: int) -> np.ndarray:
    m = ctx.zeros(4, 4)
    m[a, b] = ctx.one
    return m


# root-vector data: label, weight in the (e1, e2) lattice, matrix builder
def _sp4_elements(ctx: FieldCtx):
    e = lambda a, b: _e(ctx, a, b)
    roots = [
        ("x+2e1", (2, 0), e(0, 2)),
        ("x+2e2", (0, 2), e(1, 3)),
        ("x+e1-e2", (1, -1), e(0, 1) - e(3, 2)),
        ("x+e1+e2", (1, 1), e(0, 3) + e(1, 2)),
        ("x-2e1", (-2, 0), e(2, 0)),
        ("x-2e2", (0, -2), e(3, 1)),
        ("x-e1+e2", (-1, 1), e(1, 0) - e(2, 3)),
        ("x-e1-e2", (-1, -1), e(3, 0) + e(2, 1)),
    ]
    cartan = [
        ("h1", (0, 0), e(0, 0) - e(2, 2)),
        ("h2", (0, 0), e(1, 1) - e(3, 3)),
    ]
    return roots, cartan


def sp4_algebra(ctx: FieldCtx) -> LieSuperalgebra:
    """Rank-2 symplectic algebra on a weight basis: eight root vectors in the
    order +2e1, +2e2, +e1-e2, +e1+e2 and their negatives, then h1, h2."""
    roots, cartan = _sp4_elements(ctx)
    elems = [(l, 0, m) for l, _, m in roots + cartan]
    alg = algebra_from_matrices(ctx, elems, [0, 0, 0, 0],
                                meta={"name": "sp4"})
    alg.root_data = tuple((l, w) for l, w, _ in roots)  # type: ignore
    return alg


def sp4_natural_module(g: LieSuperalgebra) -> GModule:
    """The defining 4-dimensional module v+e1, v+e2, v-e1, v-e2 with one
    unipotent family 1 + t x per root vector (every root vector squares to
    zero in this realization)."""
    ctx = g.ctx
    roots, _ = _sp4_elements(ctx)
    lie = [Matrix(ctx, m) for m in g.matrix_basis]
    fams = [
        family(l, [Matrix.identity(ctx, 4), Matrix(ctx, m)], root=w)
        for l, w, m in roots
    ]
    return GModule(ctx, ["v+e1", "v+e2", "v-e1", "v-e2"], g.labels, lie, fams,
                   weights=[(1, 0), (0, 1), (-1, 0), (0, -1)],
                   brackets=even_bracket_dict(g), meta={"name": "V"})


def sp4_adjoint_module(g: LieSuperalgebra) -> GModule:
    ctx = g.ctx
    roots, _ = _sp4_elements(ctx)
    lie = [g.ad(i) for i in range(g.dim)]
    fams = [conjugation_family(g, l, m, root=w) for l, w, m in roots]
    weights = [w for _, w, _ in roots] + [(0, 0), (0, 0)]
    return GModule(ctx, g.labels, g.labels, lie, fams, weights=weights,
                   brackets=even_bracket_dict(g), meta={"name": "adjoint-sp4"})


def _vector(ctx: FieldCtx, dim: int, terms: Dict[int, int]) -> np.ndarray:
    v = ctx.zeros(dim)
    for i, c in terms.items():
        v[i] = ctx.of(c)
    return v


# index helpers for the 20-dimensional tensor module N = V (x) Lw2:
# N index = 5 * (V index) + (Lw2 index), with Lw2 basis order
# w+e1+e2, w+e1-e2, w0, w-e1+e2, w-e1-e2.
_W = {"++": 0, "+-": 1, "0": 2, "-+": 3, "--": 4}


def _n_idx(v: int, w: str) -> int:
    return 5 * v + _W[w]


def expected_socle_vectors(ctx: FieldCtx) -> List[np.ndarray]:
    """The four lowest-layer vectors of M, one per weight +-e1, +-e2."""
    return [
        _vector(ctx, 20, {_n_idx(0, "0"): 1, _n_idx(1, "+-"): 1,
                          _n_idx(3, "++"): -1}),
        _vector(ctx, 20, {_n_idx(1, "0"): -1, _n_idx(0, "-+"): -1,
                          _n_idx(2, "++"): 1}),
        _vector(ctx, 20, {_n_idx(3, "0"): -1, _n_idx(0, "--"): -1,
                          _n_idx(2, "+-"): 1}),
        _vector(ctx, 20, {_n_idx(2, "0"): 1, _n_idx(1, "--"): 1,
                          _n_idx(3, "-+"): -1}),
    ]


def u_basis_vectors(ctx: FieldCtx):
    """Weight-vector representatives for U = M/socle, eight long-weight pure
    tensors and four short-weight combinations."""
    labels = ["u+2e1+e2", "u+2e1-e2", "u+e1+2e2", "u+e1-2e2",
              "u-2e1+e2", "u-2e1-e2", "u-e1-2e2", "u-e1+2e2",
              "u+e1", "u+e2", "u-e2", "u-e1"]
    weights = [(2, 1), (2, -1), (1, 2), (1, -2),
               (-2, 1), (-2, -1), (-1, -2), (-1, 2),
               (1, 0), (0, 1), (0, -1), (-1, 0)]
    vecs = [
        _vector(ctx, 20, {_n_idx(0, "++"): 1}),
        _vector(ctx, 20, {_n_idx(0, "+-"): 1}),
        _vector(ctx, 20, {_n_idx(1, "++"): 1}),
        _vector(ctx, 20, {_n_idx(3, "+-"): 1}),
        _vector(ctx, 20, {_n_idx(2, "-+"): 1}),
        _vector(ctx, 20, {_n_idx(2, "--"): 1}),
        _vector(ctx, 20, {_n_idx(3, "--"): 1}),
        _vector(ctx, 20, {_n_idx(1, "-+"): 1}),
        _vector(ctx, 20, {_n_idx(1, "+-"): 1, _n_idx(0, "0"): -2}),
        _vector(ctx, 20, {_n_idx(0, "-+"): 1, _n_idx(1, "0"): -2}),
        _vector(ctx, 20, {_n_idx(0, "--"): 1, _n_idx(3, "0"): -2}),
        _vector(ctx, 20, {_n_idx(1, "--"): 1, _n_idx(2, "0"): -2}),
    ]
    return labels, weights, vecs


# Stability of a weight-(2, 0) vector of Sym^2(U) under the two simple
# positive root subgroups, in the coordinates
#   alpha u+e1+2e2.u+e1-2e2 + beta u+2e1+e2.u-e2
#   + gamma u+2e1-e2.u+e2 + delta u+e1.u+e1.
# The rows are alpha+2beta, gamma-2delta, alpha+delta, beta+gamma; the
# determinant is +-5, so the kernel is nonzero exactly in characteristic 5.
# The 12-dimensional module U itself only exists for p = 5 (the structure
# constants admit no characteristic-0 lift), so for p != 5 the hom stage is
# this system read as an integer matrix and reduced mod p.
HIGHEST_WEIGHT_SYSTEM = [
    [1, 2, 0, 0],
    [0, 0, 1, -2],
    [1, 0, 0, 1],
    [0, 1, 1, 0],
]


def highest_weight_hom_bound(ctx: FieldCtx) -> int:
    from .linalg import kernel as _kernel
    return _kernel(Matrix.from_rows(ctx, HIGHEST_WEIGHT_SYSTEM)).dim


def _first_nonzero_scan(ctx: FieldCtx, bracket: BilinearMap):
    """First nonzero structure constant in the (i <= j, target) lexicographic
    scan; used to normalize the bracket."""
    for i in range(bracket.dim_v):
        for j in range(i, bracket.dim_v):
            v = bracket.value(i, j)
            for k in range(bracket.dim_g):
                if not ctx.is_zero(v[k]):
                    return (i, j, k), v[k]
    return None, None


def brj25(p: int = 5, skip_simplicity: bool = False,
          seed: int = 0) -> PipelineReport:
    ctx = FieldCtx.prime(p)
    report = PipelineReport(p=p)
    t0 = time.monotonic()

    g = sp4_algebra(ctx)
    v_mod = sp4_natural_module(g)
    _check(report, "V", v_mod.dim)

    l2 = lambda2(v_mod)
    _check(report, "L2V", l2.dim)
    # the invariant form element v+e1 ^ v-e1 + v+e2 ^ v-e2
    z = _vector(ctx, 6, {l2.pair_index[(0, 2)]: 1, l2.pair_index[(1, 3)]: 1})
    zspan = Subspace.from_vectors(ctx, 6, [z])
    for op in l2.all_operators():
        if not zspan.contains(op.mv(z)):
            raise PipelineAssertion("L2V", "invariant form element",
                                    "not invariant", report)
    w_labels = ["w+e1+e2", "w+e1-e2", "w0", "w-e1+e2", "w-e1-e2"]
    w_weights = [(1, 1), (1, -1), (0, 0), (-1, 1), (-1, -1)]
    w_reps = [
        _vector(ctx, 6, {l2.pair_index[(0, 1)]: 1}),
        _vector(ctx, 6, {l2.pair_index[(0, 3)]: 1}),
        _vector(ctx, 6, {l2.pair_index[(0, 2)]: 1}),
        _vector(ctx, 6, {l2.pair_index[(1, 2)]: -1}),
        _vector(ctx, 6, {l2.pair_index[(2, 3)]: 1}),
    ]
    w_mod = quotient_module_with_basis(l2, zspan, w_reps, w_labels,
                                       weights=w_weights, name="Lw2")
    _check(report, "Lw2", w_mod.dim)
    report.seconds["modules"] = time.monotonic() - t0

    t0 = time.monotonic()
    n_mod = tensor(v_mod, w_mod)
    _check(report, "N", n_mod.dim)
    highest = _vector(ctx, 20, {_n_idx(0, "++"): 1})
    m_sub = submodule_generated(n_mod, [highest])
    _check(report, "M", m_sub.dim)
    m_mod = module_from_subspace(n_mod, m_sub, name="M")
    soc_in_m = socle_via_homs(m_mod, [v_mod])
    report.stage_dims["socle"] = soc_in_m.dim
    if p != 5:
        # M is irreducible away from characteristic 5 and the quotient
        # module does not exist; the hom stage degenerates to the
        # highest-weight stability system.
        report.hom_dim_group = highest_weight_hom_bound(ctx)
        _check(report, "hom", report.hom_dim_group)
        return report
    if soc_in_m.dim != 4:
        raise PipelineAssertion("socle", 4, soc_in_m.dim, report)
    # back to ambient coordinates of N and against the expected span
    soc_vecs = [
        sum((x * b for x, b in zip(row, m_sub.basis.data)),
            start=ctx.zeros(20))
        for row in soc_in_m.basis.data
    ]
    soc = Subspace.from_vectors(ctx, 20, [ctx.reduce(v) for v in soc_vecs])
    expected = Subspace.from_vectors(ctx, 20, expected_socle_vectors(ctx))
    report.socle_matches_expected = soc == expected
    if not report.socle_matches_expected:
        raise PipelineAssertion("socle", "span of the four layer vectors",
                                "different subspace", report)
    u_labels, u_weights, u_vecs = u_basis_vectors(ctx)
    u_mod = quotient_module_with_basis(n_mod, soc, u_vecs, u_labels,
                                       weights=u_weights, name="U")
    _check(report, "U", u_mod.dim)
    report.seconds["submodule"] = time.monotonic() - t0

    t0 = time.monotonic()
    s2u = sym2(u_mod)
    _check(report, "Sym2U", s2u.dim)
    adj = sp4_adjoint_module(g)
    rep = hom_space(s2u, adj, mode="both")
    report.hom_dim_group = rep.dim_group
    report.hom_dim_algebra = rep.dim_algebra
    report.seconds["hom"] = time.monotonic() - t0
    _check(report, "hom", rep.dim_group)
    if rep.dim_algebra != rep.dim_group:
        raise PipelineAssertion("hom", "algebra dim == group dim",
                                (rep.dim_algebra, rep.dim_group), report)
    if highest_weight_hom_bound(ctx) != rep.dim_group:
        raise PipelineAssertion("hom", "highest-weight bound == hom dim",
                                highest_weight_hom_bound(ctx), report)

    t0 = time.monotonic()
    f = rep.basis_group[0]  # 10 x 78, columns indexed by sym2 pairs
    half = ctx.inv(ctx.of(2))
    entries = {}
    for (i, j), col in s2u.pair_index.items():
        val = f.data[:, col].copy()
        if i != j:
            val = ctx.reduce(val * half)
        entries[(i, j)] = val
    bracket = BilinearMap.from_entries(ctx, 12, 10, entries)
    pos, c = _first_nonzero_scan(ctx, bracket)
    scale = ctx.inv(c)
    entries = {k: ctx.reduce(v * scale) for k, v in bracket.tensor.items()}
    bracket = BilinearMap.from_entries(ctx, 12, 10, entries)
    report.first_constant = f"[{u_labels[pos[0]]},{u_labels[pos[1]]}] " \
                            f"-> {g.labels[pos[2]]}"

    roots, _ = _sp4_elements(ctx)
    adj_fams = [conjugation_family(g, l, m, root=w) for l, w, m in roots]
    pair = assemble_pair(g, u_mod, bracket, adj_fams,
                         meta={"name": f"brj(2;5)@p={p}"})
    report.pair = pair
    report.algebra = pair.algebra
    if pair.algebra.dims != (10, 12):
        raise PipelineAssertion("pair", (10, 12), pair.algebra.dims, report)
    report.sas = check_sas_conditions(pair)[:2]
    report.seconds["pair"] = time.monotonic() - t0

    if not skip_simplicity:
        t0 = time.monotonic()
        verdict = pair.algebra.is_graded_simple(seed=seed)
        report.simplicity = verdict.verdict
        report.seconds["simplicity"] = time.monotonic() - t0
    return report
