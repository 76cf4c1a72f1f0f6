import pytest

from superlie.census import (
    GRID_PRESETS,
    build_from_params,
    grid_d21,
    grid_family_catalog,
    run_census,
    rows_to_jsonl,
    rows_to_tsv,
)
from superlie.fields import FieldCtx

F5 = FieldCtx.prime(5)


class TestBuildDispatch:
    def test_known_families(self):
        assert build_from_params("sl", {"m": 2, "n": 1}, F5).dims == (4, 4)
        assert build_from_params("psq", {"n": 3}, F5).dims == (8, 8)
        assert build_from_params(
            "spo", {"m": 1, "odd": 3}, F5).dims == (6, 6)

    def test_unknown_family_raises(self):
        with pytest.raises(ValueError):
            build_from_params("nope", {}, F5)

    def test_unknown_check_raises(self):
        rows = run_census([("sl", {"m": 2, "n": 1}, 5)], ("frobnicate",))
        assert rows[0].error is not None
        assert "frobnicate" in rows[0].error


class TestDeterminism:
    def test_family_catalog_repeatable(self):
        grid = grid_family_catalog()
        a = run_census(grid, ("simple",), seed=0, threads=1)
        b = run_census(grid, ("simple",), seed=0, threads=1)
        assert rows_to_tsv(a, ("simple",)) == rows_to_tsv(b, ("simple",))
        assert rows_to_jsonl(a) == rows_to_jsonl(b)

    def test_threads_do_not_change_output(self):
        grid = grid_d21()
        a = run_census(grid, ("simple",), seed=0, threads=1)
        b = run_census(grid, ("simple",), seed=0, threads=4)
        assert rows_to_tsv(a, ("simple",)) == rows_to_tsv(b, ("simple",))

    def test_rows_sorted(self):
        rows = run_census(grid_family_catalog(), (), threads=2)
        keys = [r.sort_key() for r in rows]
        assert keys == sorted(keys)


class TestErrorRows:
    def test_d21_grid_captures_invalid_points(self):
        rows = run_census(grid_d21(), ("simple",), threads=2)
        errors = [r for r in rows if r.error]
        # points off the parameter plane fail validation but do not abort
        assert len(errors) == 3
        for r in errors:
            assert "JacobiViolation" in r.error
            assert r.dims is None
        good = [r for r in rows if not r.error]
        assert all(r.dims == (9, 8) for r in good)


class TestPresets:
    def test_presets_are_wired(self):
        for name, (gridf, checks) in GRID_PRESETS.items():
            grid = gridf()
            assert grid, name
            assert all(len(j) == 3 for j in grid)
            assert checks

    def test_tsv_header_matches_checks(self):
        rows = run_census([("psq", {"n": 2}, 5)], ("simple", "center_dim"))
        text = rows_to_tsv(rows, ("simple", "center_dim"))
        header = text.splitlines()[0].split("\t")
        assert header == ["family", "params", "p", "dim_even", "dim_odd",
                          "simple", "center_dim", "error"]
        assert text.endswith("\n")
