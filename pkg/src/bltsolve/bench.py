"""Benchmark driver: problems x sizes x preconditioners under GMRES(restart)."""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .krylov import GmresConfig, solve_problem
from .mmio import write_mm
from .precond import Kind, prepare
from .problems import AssembledProblem, Example, ProblemSpec, build_problem
from .spectral import select_alpha, verify_clustering, write_spectrum_csv

__all__ = [
    "TABLE_ALPHA",
    "TABLE_IT",
    "BenchConfig",
    "BenchRow",
    "run_bench",
    "emit_table",
    "read_table",
    "spectrum_dump",
    "sweep",
    "best_row",
    "dump_problem",
]

log = logging.getLogger(__name__)

_SIZES = (32, 64, 128, 256, 512, 1024)


def _row(values):
    return {m: v for m, v in zip(_SIZES, values) if v is not None}


# Reported optimal parameters per (example, method), keyed by m.
TABLE_ALPHA = {
    ("ex1", "mhss"): _row([10, 9.1, 4.7, 5.1, 10.5, None]),
    ("ex1", "gsor"): _row([0.037, 0.457, 0.432, 0.418, 0.412, 0.411]),
    ("ex1", "blt"): _row([1.4, 1.4, 1.5, 1.5, 1.5, 1.5]),
    ("ex2", "mhss"): _row([81, 110, None, None, None, None]),
    ("ex2", "gsor"): _row([0.099] * 6),
    ("ex2", "blt"): _row([0.4] * 6),
    ("ex3", "mhss"): _row([52, 18, None, None, None, None]),
    ("ex3", "gsor"): _row([0.776, 0.566, 0.354, 0.199, 0.106, 0.055]),
    ("ex3", "blt"): _row([0.4, 0.7, 1.0, 1.4, 1.7, 2.0]),
    ("ex4", "mhss"): _row([130, 10, 13, 8, None, None]),
    ("ex4", "gsor"): _row([0.038] * 5 + [0.037]),
    ("ex4", "blt"): _row([2.1, 2.2, 2.3, 2.4, 2.5, 2.3]),
}

_DAGGER = "dagger"

# Reported GMRES(5) iteration counts; "dagger" = no convergence in 500.
TABLE_IT = {
    ("ex1", "none"): dict(zip(_SIZES, [349] + [_DAGGER] * 5)),
    ("ex1", "mhss"): _row([54, 26, 71, 114, 179, None]),
    ("ex1", "gsor"): _row([23, 25, 26, 26, 27, 27]),
    ("ex1", "blt"): _row([6, 7, 7, 7, 7, 7]),
    ("ex2", "none"): dict(zip(_SIZES, [_DAGGER] * 6)),
    ("ex2", "mhss"): dict(zip(_SIZES, [73, 243] + [_DAGGER] * 4)),
    ("ex2", "gsor"): _row([65, 70, 71, 67, 63, 61]),
    ("ex2", "blt"): _row([8] * 6),
    ("ex3", "none"): dict(zip(_SIZES, [235] + [_DAGGER] * 5)),
    ("ex3", "mhss"): dict(zip(_SIZES, [120, 272] + [_DAGGER] * 4)),
    ("ex3", "gsor"): _row([7, 8, 11, 22, 52, 117]),
    ("ex3", "blt"): _row([4, 5, 7, 9, 12, 18]),
    ("ex4", "none"): dict(zip(_SIZES, [138] + [_DAGGER] * 5)),
    ("ex4", "mhss"): dict(zip(_SIZES, [12, 28, 84, 283, _DAGGER, _DAGGER])),
    ("ex4", "gsor"): _row([69, 92, 75, 66, 67, 152]),
    ("ex4", "blt"): _row([21, 21, 19, 21, 20, 20]),
}


@dataclass
class BenchConfig:
    """One benchmark batch.

    ``alphas`` maps a method name to ``"table"`` (reported optimum),
    ``"auto"`` (eigenvalue-based choice, BLT only) or a list of values.
    Methods missing from ``alphas`` use ``"table"``.
    """

    examples: list
    sizes: list
    methods: list
    alphas: dict = field(default_factory=dict)
    restart: int = 5
    tol: float = 1e-10
    maxit: int = 500
    ordering: str = "rcm"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.examples:
            raise ValueError("no examples given")
        if not self.sizes:
            raise ValueError("no sizes given")
        if not self.methods:
            raise ValueError("no methods given")
        self.examples = [Example.parse(e).value for e in self.examples]
        self.methods = [Kind(m).value for m in self.methods]
        for m in self.sizes:
            if int(m) < 1:
                raise ValueError(f"invalid size {m}")
        for key, spec in self.alphas.items():
            Kind(key)
            if isinstance(spec, str) and spec not in ("table", "auto"):
                raise ValueError(f"alpha choice for {key} must be 'table', 'auto' or a list")
        GmresConfig(self.restart, self.tol, self.maxit)


@dataclass
class BenchRow:
    example: str
    m: int
    method: str
    alpha: float | None
    converged: bool
    outer_cycles: int
    total_inner: int
    final_relres: float
    wall_seconds: float
    factor_seconds: float
    error: str = ""


FIELDS = [f.name for f in fields(BenchRow)]


def _alphas_for(cfg: BenchConfig, example: str, m: int, method: str, prob: AssembledProblem | None):
    if method == "none":
        return [None]
    choice = cfg.alphas.get(method, "table")
    if isinstance(choice, str):
        if choice == "table":
            try:
                return [float(TABLE_ALPHA[(example, method)][m])]
            except KeyError:
                raise LookupError(f"no tabulated alpha for {method} on {example} at m={m}") from None
        if method != "blt":
            raise LookupError(f"automatic alpha is only defined for blt, not {method}")
        return [select_alpha(prob.W, prob.T).alpha_chosen]
    return [float(a) for a in choice]


def _run_cell(prob, example, m, method, alpha, gcfg, ordering) -> BenchRow:
    t0 = time.perf_counter()
    P = prepare(method, prob.W, prob.T, alpha if alpha is not None else 1.0, ordering=ordering)
    _, rep = solve_problem(prob, P, gcfg)
    wall = time.perf_counter() - t0
    return BenchRow(example, m, method, alpha, rep.converged, rep.outer_cycles, rep.total_inner,
                    rep.final_relres, wall, P.factor_seconds)


def _failed(example, m, method, alpha, exc) -> BenchRow:
    return BenchRow(example, m, method, alpha, False, 0, 0, math.nan, 0.0, 0.0, f"{type(exc).__name__}: {exc}")


def run_bench(cfg: BenchConfig) -> list[BenchRow]:
    """Run every (example, m, method, alpha) cell; per-cell failures become
    rows with ``error`` set instead of aborting the batch."""
    gcfg = GmresConfig(cfg.restart, cfg.tol, cfg.maxit)
    rows = []
    for example in cfg.examples:
        for m in cfg.sizes:
            m = int(m)
            try:
                prob = build_problem(ProblemSpec(example, m, cfg.params.get(example, {})))
            except Exception as exc:  # recorded per row
                rows.extend(_failed(example, m, meth, None, exc) for meth in cfg.methods)
                continue
            for method in cfg.methods:
                try:
                    alphas = _alphas_for(cfg, example, m, method, prob)
                except Exception as exc:
                    rows.append(_failed(example, m, method, None, exc))
                    continue
                for alpha in alphas:
                    try:
                        row = _run_cell(prob, example, m, method, alpha, gcfg, cfg.ordering)
                    except Exception as exc:
                        row = _failed(example, m, method, alpha, exc)
                    log.info("%s m=%d %s alpha=%s -> %s", example, m, method, alpha, row.total_inner)
                    rows.append(row)
    return rows


# -- serialization ----------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def emit_table(rows, path, fmt: str = "csv") -> Path:
    """Write rows as CSV (fixed header) or a JSON array of objects."""
    if not rows:
        raise ValueError("no rows to write")
    path = Path(path)
    try:
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(FIELDS)
                for r in rows:
                    w.writerow([_fmt(getattr(r, f)) for f in FIELDS])
        elif fmt == "json":
            def clean(d):
                return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}
            path.write_text(json.dumps([clean(asdict(r)) for r in rows], indent=1) + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path


def _parse(name, text):
    if name in ("example", "method", "error"):
        return text
    if name in ("m", "outer_cycles", "total_inner"):
        return int(text)
    if name == "converged":
        return text == "true"
    if text == "":
        return None if name == "alpha" else math.nan
    return float(text)


def read_table(path) -> list[BenchRow]:
    """Inverse of :func:`emit_table` (format chosen by file suffix)."""
    path = Path(path)
    if path.suffix == ".json":
        rows = []
        for d in json.loads(path.read_text()):
            if d.get("final_relres") is None:
                d["final_relres"] = math.nan
            rows.append(BenchRow(**d))
        return rows
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != FIELDS:
            raise ValueError(f"{path}: unexpected header {header}")
        return [BenchRow(**{k: _parse(k, v) for k, v in zip(header, line)}) for line in reader]


# -- other batch products ---------------------------------------------------


def spectrum_dump(example, m: int | None = None, alpha: float = 1.0, path="spectrum.csv", params=None):
    """Eigenvalues of the BLT-preconditioned matrix with per-pair quotients.

    ``example`` is an example name (with ``m``) or an assembled problem.
    Returns the :class:`~bltsolve.spectral.SpectrumReport`.
    """
    if isinstance(example, AssembledProblem):
        prob = example
    else:
        if m is None:
            raise ValueError("m is required with an example name")
        if 2 * m * m > 2000:
            raise ValueError(f"2m^2 = {2 * m * m} exceeds 2000; choose m <= 31 for a dense spectrum")
        prob = build_problem(ProblemSpec(example, m, params or {}))
    report = verify_clustering(prob, alpha=alpha)
    write_spectrum_csv(report, path)
    return report


def sweep(example, m: int, method: str, alpha_min: float, alpha_max: float, steps: int,
          log_scale: bool = False, **cfg_kw) -> list[BenchRow]:
    """Grid search over alpha for one problem; the best row has the fewest
    iterations among converged runs."""
    if steps < 1 or not 0 < alpha_min <= alpha_max:
        raise ValueError("need 0 < alpha_min <= alpha_max and steps >= 1")
    grid = np.geomspace(alpha_min, alpha_max, steps) if log_scale else np.linspace(alpha_min, alpha_max, steps)
    cfg = BenchConfig([example], [m], [method], {method: [float(a) for a in grid]}, **cfg_kw)
    return run_bench(cfg)


def best_row(rows):
    ok = [r for r in rows if r.converged]
    return min(ok, key=lambda r: (r.total_inner, r.alpha)) if ok else None


def dump_problem(example, m: int, out_dir, params=None) -> list[Path]:
    """Write ``W.mtx``, ``T.mtx`` and ``b.csv`` for an assembled problem."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prob = build_problem(ProblemSpec(example, m, params or {}))
    tag = f"{prob.spec.example.value} m={m} normalized={prob.normalized}"
    write_mm(out / "W.mtx", prob.W, tag)
    write_mm(out / "T.mtx", prob.T, tag)
    with (out / "b.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im"])
        for re, im in zip(prob.b.re, prob.b.im):
            w.writerow([f"{re:.17g}", f"{im:.17g}"])
    return [out / "W.mtx", out / "T.mtx", out / "b.csv"]
