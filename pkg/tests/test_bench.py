import csv
import dataclasses
import math

import numpy as np
import pytest

from bltsolve.bench import (
    FIELDS,
    TABLE_ALPHA,
    TABLE_IT,
    BenchConfig,
    BenchRow,
    best_row,
    dump_problem,
    emit_table,
    read_table,
    run_bench,
    spectrum_dump,
    sweep,
)
from bltsolve.core import ComplexVec, from_coo
from bltsolve.mmio import read_mm
from bltsolve.problems import AssembledProblem, ProblemSpec, build_problem

from conftest import sparse_spd


def strip_times(rows):
    return [dataclasses.replace(r, wall_seconds=0.0, factor_seconds=0.0) for r in rows]


def test_config_validation():
    with pytest.raises(ValueError):
        BenchConfig(["ex1"], [8], [])
    with pytest.raises(ValueError):
        BenchConfig([], [8], ["blt"])
    with pytest.raises(ValueError):
        BenchConfig(["ex1"], [8], ["ilu"])
    with pytest.raises(ValueError):
        BenchConfig(["ex1"], [8], ["blt"], {"blt": "best"})
    cfg = BenchConfig(["Ex1"], [8], ["blt"])
    assert (cfg.restart, cfg.tol, cfg.maxit) == (5, 1e-10, 500)


def test_table_alpha_used_and_recorded():
    rows = run_bench(BenchConfig(["ex3"], [32], ["blt"]))
    assert len(rows) == 1
    r = rows[0]
    assert r.alpha == TABLE_ALPHA[("ex3", "blt")][32] == 0.4
    assert r.converged and r.error == ""
    assert r.factor_seconds > 0 and r.wall_seconds >= r.factor_seconds


def test_explicit_alphas_expand_rows():
    rows = run_bench(BenchConfig(["ex1"], [8], ["blt", "none"], {"blt": [0.5, 1.0, 1.5]}))
    assert [r.method for r in rows] == ["blt"] * 3 + ["none"]
    assert [r.alpha for r in rows] == [0.5, 1.0, 1.5, None]


def test_missing_table_entry_is_a_row_not_a_crash():
    rows = run_bench(BenchConfig(["ex1"], [8], ["gsor", "blt"], {"blt": [1.0]}))
    assert "no tabulated alpha" in rows[0].error and not rows[0].converged
    assert rows[1].converged


def test_auto_alpha_only_for_blt():
    rows = run_bench(BenchConfig(["ex1"], [6], ["blt", "mhss"], {"blt": "auto", "mhss": "auto"}))
    assert rows[0].error == "" and rows[0].alpha > 0
    assert "only defined for blt" in rows[1].error


def test_assembly_failure_recorded_per_row():
    cfg = BenchConfig(["ex4"], [8], ["blt"], {"blt": [1.0]}, params={"ex4": {"sigma1": -1e4}})
    rows = run_bench(cfg)
    assert len(rows) == 1 and "not positive definite" in rows[0].error


def test_batch_is_deterministic():
    cfg = BenchConfig(["ex1", "ex4"], [8], ["blt", "gsor", "mhss", "none"],
                      {"blt": [1.0], "gsor": [0.5], "mhss": [2.0]})
    assert strip_times(run_bench(cfg)) == strip_times(run_bench(cfg))


def test_unpreconditioned_ex2_does_not_converge():
    rows = run_bench(BenchConfig(["ex2"], [64], ["none"]))
    assert not rows[0].converged and rows[0].total_inner == 500


def test_blt_ex1_table_cell():
    rows = run_bench(BenchConfig(["ex1"], [32], ["blt"]))
    assert rows[0].converged and rows[0].total_inner == 6


def test_dagger_cells_do_not_converge():
    cells = [(ex, meth, m) for (ex, meth), tab in TABLE_IT.items() for m, v in tab.items()
             if v == "dagger" and m <= 64]
    assert cells
    for ex, meth, m in cells:
        row = run_bench(BenchConfig([ex], [m], [meth]))[0]
        assert not row.converged, (ex, meth, m)


def test_numeric_cells_converge_at_smallest_size():
    cells = [(ex, meth) for (ex, meth), tab in TABLE_IT.items() if isinstance(tab.get(32), int)]
    bad = []
    for ex, meth in cells:
        row = run_bench(BenchConfig([ex], [32], [meth]))[0]
        if not row.converged:
            bad.append(f"{ex}/{meth}: IT={row.total_inner} relres={row.final_relres:.1e}")
    assert not bad, "cells with a finite reported count that did not converge: " + "; ".join(bad)


# -- serialization ----------------------------------------------------------


def _rows():
    return [
        BenchRow("ex1", 32, "blt", 1.4, True, 2, 6, 3.25e-11, 0.125, 0.0625),
        BenchRow("ex2", 64, "none", None, False, 100, 500, 0.1 + 0.2, 1.0 / 3.0, 0.0),
        BenchRow("ex4", 8, "gsor", None, False, 0, 0, math.nan, 0.0, 0.0, "LookupError: x"),
    ]


def test_single_row_csv(tmp_path):
    path = emit_table(_rows()[:1], tmp_path / "r.csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[0].split(",") == FIELDS[: len(FIELDS)]
    assert FIELDS[:10] == ["example", "m", "method", "alpha", "converged", "outer_cycles",
                           "total_inner", "final_relres", "wall_seconds", "factor_seconds"]


@pytest.mark.parametrize("suffix,fmt", [(".csv", "csv"), (".json", "json")])
def test_round_trip(tmp_path, suffix, fmt):
    rows = _rows()
    back = read_table(emit_table(rows, tmp_path / ("r" + suffix), fmt))
    for a, b in zip(rows, back):
        for f in FIELDS:
            va, vb = getattr(a, f), getattr(b, f)
            if isinstance(va, float) and math.isnan(va):
                assert math.isnan(vb)
            else:
                assert va == vb, f


def test_csv_uses_17_digits(tmp_path):
    path = emit_table(_rows()[1:2], tmp_path / "r.csv")
    row = next(csv.DictReader(path.open()))
    assert row["final_relres"] == "0.30000000000000004"
    assert row["converged"] == "false" and row["alpha"] == ""


def test_emit_errors(tmp_path):
    with pytest.raises(ValueError):
        emit_table([], tmp_path / "r.csv")
    with pytest.raises(ValueError):
        emit_table(_rows(), tmp_path / "r.xml", "xml")
    with pytest.raises(OSError, match="missing"):
        emit_table(_rows(), tmp_path / "missing" / "r.csv")


# -- spectrum, sweep, dump --------------------------------------------------


def test_spectrum_dump_ex1(tmp_path):
    rep = spectrum_dump("ex1", 4, 1.4, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert len(lines) == 1 + 32 + 1
    assert lines[-1].startswith("# all_within=")
    assert ("all_within=true" in lines[-1]) == rep.all_within


def test_spectrum_dump_zero_t(tmp_path, rng):
    W = sparse_spd(rng, 9)
    prob = AssembledProblem(W, from_coo(9, [], [], []), ComplexVec(np.ones(9), np.ones(9)))
    spectrum_dump(prob, alpha=0.8, path=tmp_path / "s.csv")
    rows = list(csv.DictReader(l for l in (tmp_path / "s.csv").open() if not l.startswith("#")))
    assert len(rows) == 18
    assert all(float(r["dist"]) <= 1e-8 for r in rows)


def test_spectrum_dump_size_guard(tmp_path):
    with pytest.raises(ValueError, match="smaller|m <="):
        spectrum_dump("ex1", 32, 1.0, tmp_path / "s.csv")


def test_sweep_finds_a_best_alpha():
    rows = sweep("ex3", 16, "blt", 0.1, 1.0, 4)
    assert [r.alpha for r in rows] == pytest.approx([0.1, 0.4, 0.7, 1.0])
    best = best_row(rows)
    assert best.converged and best.total_inner == min(r.total_inner for r in rows if r.converged)
    log_rows = sweep("ex3", 8, "gsor", 0.01, 1.0, 3, log_scale=True)
    assert [r.alpha for r in log_rows] == pytest.approx([0.01, 0.1, 1.0])
    with pytest.raises(ValueError):
        sweep("ex3", 8, "blt", 1.0, 0.5, 3)


def test_dump_problem_round_trip(tmp_path):
    paths = dump_problem("ex2", 4, tmp_path / "p")
    prob = build_problem(ProblemSpec("ex2", 4))
    assert np.array_equal(read_mm(paths[0]).to_dense(), prob.W.to_dense())
    assert np.array_equal(read_mm(paths[1]).to_dense(), prob.T.to_dense())
    data = np.loadtxt(paths[2], delimiter=",", skiprows=1)
    assert np.array_equal(data[:, 0], prob.b.re) and np.array_equal(data[:, 1], prob.b.im)
