"""Command-line entry point: ``bltsolve {bench,spectrum,sweep,dump-problem}``.

Exit status: 0 when the batch completes, 1 on a fatal error, 2 on bad
arguments. A ``--config`` file of ``key=value`` lines supplies defaults that
command-line flags override.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import bench

log = logging.getLogger("bltsolve")


class _ArgError(Exception):
    pass


def _floats(text):
    return [float(t) for t in str(text).replace(",", " ").split()]


def _ints(text):
    return [int(t) for t in str(text).replace(",", " ").split()]


def _words(text):
    return [t for t in str(text).replace(",", " ").split()]


def read_config(path) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _ArgError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bltsolve", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value file with default option values")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def solver_opts(sp):
        sp.add_argument("--restart", type=int, default=5)
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--maxit", type=int, default=500)
        sp.add_argument("--ordering", choices=["rcm", "amd", "natural"], default="rcm")

    b = sub.add_parser("bench", help="run GMRES on the test problems")
    b.add_argument("--example", default="ex1", help="comma list, e.g. ex1,ex2")
    b.add_argument("--m", default="32", help="comma list of grid sizes")
    b.add_argument("--method", default="blt", help="comma list of none,blt,gsor,mhss")
    g = b.add_mutually_exclusive_group()
    g.add_argument("--alpha", help="comma list of explicit alpha values")
    g.add_argument("--alpha-auto", action="store_true", help="eigenvalue-based alpha (blt)")
    g.add_argument("--alpha-table", action="store_true", help="reported optimal alpha (default)")
    solver_opts(b)
    b.add_argument("--out", default="results.csv")
    b.add_argument("--format", choices=["csv", "json"], default=None)

    s = sub.add_parser("spectrum", help="dump the BLT-preconditioned spectrum")
    s.add_argument("--example", default="ex1")
    s.add_argument("--m", type=int, default=4)
    s.add_argument("--alpha", type=float, default=None, help="default: automatic choice")
    s.add_argument("--out", default="spectrum.csv")

    w = sub.add_parser("sweep", help="grid search over alpha")
    w.add_argument("--example", default="ex1")
    w.add_argument("--m", type=int, default=32)
    w.add_argument("--method", default="blt")
    w.add_argument("--alpha-min", type=float, default=0.1)
    w.add_argument("--alpha-max", type=float, default=2.0)
    w.add_argument("--steps", type=int, default=20)
    w.add_argument("--log-scale", action="store_true")
    solver_opts(w)
    w.add_argument("--out", default="sweep.csv")
    w.add_argument("--format", choices=["csv", "json"], default=None)

    d = sub.add_parser("dump-problem", help="write W, T (Matrix Market) and b (CSV)")
    d.add_argument("--example", default="ex1")
    d.add_argument("--m", type=int, default=8)
    d.add_argument("--out", default="problem")
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            dests = {a.dest: a for a in sp._actions}
            defaults = {}
            for key, value in values.items():
                if key in dests:
                    a = dests[key]
                    if a.const is True and a.nargs == 0:
                        defaults[key] = value.lower() in ("1", "true", "yes")
                    elif a.type is not None:
                        defaults[key] = a.type(value)
                    else:
                        defaults[key] = value
            sp.set_defaults(**defaults)


def _fmt_of(args):
    if args.format:
        return args.format
    return "json" if str(args.out).endswith(".json") else "csv"


def _summary(rows):
    for r in rows:
        status = "ok" if r.converged else ("error: " + r.error if r.error else "not converged")
        alpha = "-" if r.alpha is None else f"{r.alpha:g}"
        print(f"{r.example} m={r.m:<5d} {r.method:<5s} alpha={alpha:<8s} IT={r.total_inner:<4d} "
              f"relres={r.final_relres:.2e} {status}")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _parser()
    try:
        _apply_config(parser, argv)
    except (_ArgError, OSError, ValueError) as exc:
        print(f"bltsolve: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "bench":
            methods = _words(args.method)
            if args.alpha:
                alphas = {m: _floats(args.alpha) for m in methods}
            elif args.alpha_auto:
                alphas = {m: "auto" for m in methods}
            else:
                alphas = {m: "table" for m in methods}
            cfg = bench.BenchConfig(_words(args.example), _ints(args.m), methods, alphas,
                                    args.restart, args.tol, args.maxit, args.ordering)
            rows = bench.run_bench(cfg)
            bench.emit_table(rows, args.out, _fmt_of(args))
            _summary(rows)
        elif args.command == "sweep":
            rows = bench.sweep(args.example, args.m, args.method, args.alpha_min, args.alpha_max, args.steps,
                               args.log_scale, restart=args.restart, tol=args.tol, maxit=args.maxit,
                               ordering=args.ordering)
            bench.emit_table(rows, args.out, _fmt_of(args))
            best = bench.best_row(rows)
            if best is None:
                print("no alpha in the grid converged")
            else:
                print(f"best alpha={best.alpha:g} IT={best.total_inner}")
        elif args.command == "spectrum":
            alpha = args.alpha
            if alpha is None:
                from .problems import ProblemSpec, build_problem
                from .spectral import select_alpha

                prob = build_problem(ProblemSpec(args.example, args.m))
                alpha = select_alpha(prob.W, prob.T).alpha_chosen
            rep = bench.spectrum_dump(args.example, args.m, alpha, args.out)
            print(f"{len(rep.eigenvalues)} eigenvalues, max|lam-1|={rep.max_dist:.6g}, "
                  f"r1={rep.theorem1_radius:.6g}, r2={rep.theorem2_radius}, all_within={rep.all_within}")
        elif args.command == "dump-problem":
            for path in bench.dump_problem(args.example, args.m, args.out):
                print(path)
    except ValueError as exc:
        print(f"bltsolve: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"bltsolve: fatal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
