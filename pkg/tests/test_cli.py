import json
import subprocess
import sys

import pytest

from bltsolve.bench import read_table
from bltsolve.cli import main


def test_bench_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    rc = main(["bench", "--example", "ex1,ex3", "--m", "8", "--method", "blt,none", "--alpha", "0.9",
               "--out", str(out)])
    assert rc == 0
    rows = read_table(out)
    assert [(r.example, r.method) for r in rows] == [("ex1", "blt"), ("ex1", "none"), ("ex3", "blt"), ("ex3", "none")]
    assert rows[0].alpha == 0.9
    assert "ex1 m=8" in capsys.readouterr().out


def test_bench_json_by_suffix(tmp_path):
    out = tmp_path / "r.json"
    assert main(["bench", "--m", "6", "--alpha-auto", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data[0]["method"] == "blt" and data[0]["alpha"] > 0


def test_bench_table_alphas(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["bench", "--example", "ex3", "--m", "32", "--alpha-table", "--out", str(out)]) == 0
    assert read_table(out)[0].alpha == 0.4


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# defaults\nexample = ex4\nm = 6\nmethod = gsor\nalpha = 0.3\nmaxit = 25\n")
    out = tmp_path / "r.csv"
    assert main(["--config", str(cfg), "bench", "--m", "5", "--out", str(out)]) == 0
    r = read_table(out)[0]
    assert (r.example, r.m, r.method, r.alpha) == ("ex4", 5, "gsor", 0.3)
    assert r.total_inner <= 25


def test_spectrum(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--example", "ex1", "--m", "3", "--alpha", "1.4", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 18 + 1
    assert "all_within" in capsys.readouterr().out


def test_spectrum_auto_alpha(tmp_path):
    assert main(["spectrum", "--m", "3", "--out", str(tmp_path / "s.csv")]) == 0


def test_sweep(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert main(["sweep", "--example", "ex3", "--m", "8", "--alpha-min", "0.2", "--alpha-max", "1",
                 "--steps", "3", "--out", str(out)]) == 0
    assert len(read_table(out)) == 3
    assert "best alpha=" in capsys.readouterr().out


def test_dump_problem(tmp_path):
    assert main(["dump-problem", "--example", "ex4", "--m", "3", "--out", str(tmp_path / "p")]) == 0
    assert sorted(p.name for p in (tmp_path / "p").iterdir()) == ["T.mtx", "W.mtx", "b.csv"]


@pytest.mark.parametrize(
    "argv",
    [
        ["bench", "--method", "bogus"],
        ["bench", "--m", "x"],
        ["bench", "--alpha", "1", "--alpha-auto"],
        ["spectrum", "--m", "40"],
        ["frobnicate"],
        [],
    ],
)
def test_argument_errors_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as e:
        raise SystemExit(main(argv))
    assert e.value.code == 2


def test_bad_config_line_exits_2(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("no equals sign here\n")
    assert main(["--config", str(cfg), "bench"]) == 2


def test_unwritable_output_exits_1(tmp_path):
    assert main(["bench", "--m", "4", "--alpha", "1", "--out", str(tmp_path / "nope" / "r.csv")]) == 1


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "bltsolve.cli", "dump-problem", "--m", "2", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "W.mtx" in res.stdout
