import numpy as np
import pytest

from superlie.fields import FieldCtx
from superlie.linalg import Subspace
from superlie.brj import (
    EXPECTED_STAGE_DIMS,
    PipelineAssertion,
    brj25,
    expected_socle_vectors,
    highest_weight_hom_bound,
    sp4_algebra,
    sp4_natural_module,
)

F5 = FieldCtx.prime(5)


@pytest.fixture(scope="module")
def report5():
    return brj25(p=5, seed=0)


class TestBuildingBlocks:
    def test_sp4_is_a_lie_algebra(self):
        g = sp4_algebra(F5)
        assert g.dims == (10, 0)
        assert g.validate_jacobi(full=True).ok

    def test_natural_module_validates(self):
        g = sp4_algebra(F5)
        v = sp4_natural_module(g)
        assert v.dim == 4
        v.validate()

    def test_highest_weight_system_detects_char5(self):
        assert highest_weight_hom_bound(FieldCtx.prime(5)) == 1
        assert highest_weight_hom_bound(FieldCtx.prime(7)) == 0
        assert highest_weight_hom_bound(FieldCtx.prime(3)) == 0
        assert highest_weight_hom_bound(FieldCtx.rationals()) == 0


class TestChar5Pipeline:
    def test_stage_dims(self, report5):
        assert report5.stage_dims == EXPECTED_STAGE_DIMS

    def test_socle(self, report5):
        assert report5.socle_matches_expected
        vecs = expected_socle_vectors(F5)
        assert Subspace.from_vectors(F5, 20, vecs).dim == 4

    def test_hom_dims(self, report5):
        assert report5.hom_dim_group == 1
        assert report5.hom_dim_algebra == 1

    def test_normalized_first_constant(self, report5):
        assert report5.first_constant == "[u+2e1+e2,u-2e1+e2] -> x+2e2"

    def test_total_algebra(self, report5):
        alg = report5.algebra
        assert alg.dims == (10, 12)
        assert alg.validate_jacobi(full=True).ok
        assert alg.validate_cubic_odd().ok

    def test_sas(self, report5):
        assert report5.sas == (True, True)

    def test_simplicity(self, report5):
        assert report5.simplicity == "GradedSimple"

    def test_skip_simplicity(self):
        rep = brj25(p=5, skip_simplicity=True)
        assert rep.simplicity is None
        assert rep.algebra.dims == (10, 12)


class TestOtherCharacteristics:
    @pytest.mark.parametrize("p", [3, 7])
    def test_halts_at_hom_stage(self, p):
        with pytest.raises(PipelineAssertion) as e:
            brj25(p=p)
        assert e.value.stage == "hom"
        assert e.value.expected == 1
        assert e.value.got == 0
        partial = e.value.report.stage_dims
        assert partial["M"] == 16
        assert partial["hom"] == 0
