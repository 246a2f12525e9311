import math

import pytest

import vpmg


def test_small_solve():
    r = vpmg.solve(dim=2, degree=2, levels=1, keep_solution=True)
    assert r["status"] == "ok"
    assert r["final_relres"] <= 1e-8
    assert len(r["solution"]) == r["n_dofs"] == 16 * 9
    assert r["residuals"][-1] / r["residuals"][0] == pytest.approx(r["final_relres"])


def test_mixed_matches_double():
    d = vpmg.solve(dim=2, degree=3, levels=2)
    m = vpmg.solve(dim=2, degree=3, levels=2, precision="mixed")
    assert m["status"] == "ok"
    assert abs(m["iterations"] - d["iterations"]) <= 2


def test_invalid_input_raises():
    with pytest.raises(ValueError, match="clamped kernel requires degree >= 3"):
        vpmg.solve(dim=2, degree=2, levels=1, kernel="clamped")
    with pytest.raises(ValueError):
        vpmg.solve(kernel="patchy")


def test_table_keeps_failed_rows():
    rows = vpmg.table(2, [1], [2, 3], kernel="clamped")
    assert rows[0]["status"].startswith("error: ")
    assert rows[1]["status"] == "ok"


def test_bank():
    rows = vpmg.bank([3], dim=3)
    assert [r["layout"] for r in rows] == ["basic", "conflict_free"]
    assert rows[0]["excess"] > 0
    assert rows[1]["excess"] == 0


def test_partition_covers_mesh():
    rows = vpmg.partition(dim=3, levels=2, ranks=3)
    assert sum(r["owned_cells"] for r in rows) == 512
    assert sum(r["owned_patches"] for r in rows) == 343


def test_fractional_iterations():
    assert vpmg.fractional_iterations([1.0, 0.1, 0.01, 1e-3, 1e-8]) == pytest.approx(4.0)
    assert vpmg.fractional_iterations([2.0, 2e-9], rtol=1e-8) == pytest.approx(8 / 9)
    with pytest.raises(ValueError):
        vpmg.fractional_iterations([0.0])
    assert math.isfinite(vpmg.fractional_iterations([1.0, 0.5]))
    assert vpmg.parse_int_list("1,3-4") == [1, 3, 4]
