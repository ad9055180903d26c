"""Command-line interface: ``hexlogit {simulate, estimate, verify, qq}``.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 data error,
4 numerical failure (no informative subgraphs, identification failure).
"""

from __future__ import annotations

import argparse
import csv
import itertools
import logging
import os
import sys
import time

import numpy as np

from . import __version__
from .condlogit import FitConfig
from .errors import HexLogitError, InvalidArgumentError
from .simulation import MODELS, REGIMES

log = logging.getLogger("hexlogit")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _level(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("must lie strictly between 0 and 1")
    return v


def _add_fit_args(p):
    g = p.add_argument_group("solver")
    g.add_argument("--tol", type=_positive_float, default=1e-8,
                   help="convergence tolerance on the Newton step and mean score (default: %(default)g)")
    g.add_argument("--max-iter", type=_positive_int, default=1000,
                   help="maximum Newton iterations (default: %(default)s)")
    g.add_argument("--ridge", type=float, default=0.0,
                   help="initial ridge added to the negative Hessian (default: %(default)g)")
    g.add_argument("--enumerator", choices=("auto", "dense", "sparse", "block"), default="auto",
                   help="informative-hexad enumerator for the dyad-level model (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexlogit",
        description="Conditional logit estimation for triadic (three-part) networks with fixed effects.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("simulate", help="run a Monte Carlo design cell",
                       description="Simulate networks, fit each replication and summarise.")
    p.add_argument("--n", type=_positive_int, default=20, help="part size N (default: %(default)s)")
    p.add_argument("--regime", choices=REGIMES, default="dense", help="sparsity regime (default: %(default)s)")
    p.add_argument("--delta", type=float, help="slope of c_N = delta * ln N for --regime custom")
    p.add_argument("--reps", type=_positive_int, default=200, help="replications K (default: %(default)s)")
    p.add_argument("--seed", type=int, default=42, help="64-bit seed (default: %(default)s)")
    p.add_argument("--model", choices=MODELS, default="dyad-fe", help="data-generating model and estimator")
    p.add_argument("--beta0", type=float, nargs="+", default=[1.0], help="true slope(s) (default: 1.0)")
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="worker processes (default: available CPUs)")
    p.add_argument("--out", help="summary JSON path (default: stdout)")
    p.add_argument("--records", help="write per-replication estimates to this CSV")
    p.add_argument("--qq", help="write Q-Q points of the estimates to this CSV")
    p.add_argument("--qq-svg", help="write a Q-Q scatter to this SVG")
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the JSON")
    _add_fit_args(p)

    p = sub.add_parser("estimate", help="estimate the slope on a network file",
                       description="Fit one network read from CSV (i,j,k,y,x1..xP or i,j,y,x1..xP).")
    p.add_argument("input", help="network CSV")
    p.add_argument("--n", type=_positive_int, help="part size (default: largest index in the file)")
    p.add_argument("--model", choices=MODELS, default="dyad-fe", help="estimator (default: %(default)s)")
    p.add_argument("--level", type=_level, default=0.95, help="confidence level for 'ci' (default: %(default)s)")
    p.add_argument("--dfc", action="store_true", help="scale the sandwich meat by G/(G-1)")
    p.add_argument("--threads", type=_positive_int, default=None, help="accepted for symmetry; fits run in one process")
    p.add_argument("--out", help="result JSON path (default: stdout)")
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the JSON")
    _add_fit_args(p)

    p = sub.add_parser("verify", help="run the exact oracles and enumerator cross-checks",
                       description="Check the closed-form conditional probabilities against exhaustive "
                                   "outcome enumeration and the enumerators against each other.")
    p.add_argument("--oracles", action="store_true", help="conditional-probability oracles")
    p.add_argument("--enumerators", action="store_true", help="enumerator cross-checks on random networks")
    p.add_argument("--wirings", action="store_true", help="wiring catalog and minimality sweep")
    p.add_argument("--scenarios", type=_positive_int, default=100, help="oracle scenarios (default: %(default)s)")
    p.add_argument("--trials", type=_positive_int, default=50, help="networks per cross-check cell (default: %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="seed (default: %(default)s)")
    p.add_argument("--out", help="report JSON path (default: stdout)")

    p = sub.add_parser("qq", help="Q-Q points from per-replication estimates",
                       description="Read estimates (a records CSV from 'simulate --records' or one number per "
                                   "line) and write Q-Q points against a fitted normal.")
    p.add_argument("input", help="records CSV or plain list of estimates")
    p.add_argument("--out", help="Q-Q CSV path (default: stdout)")
    p.add_argument("--svg", help="also write an SVG scatter")
    return parser


def _fit_config(args) -> FitConfig:
    return FitConfig(tol=args.tol, max_iter=args.max_iter, ridge=args.ridge)


def _emit(payload, path):
    from .io import dumps, write_json

    if path:
        write_json(payload, path)
    else:
        sys.stdout.write(dumps(payload))


def cmd_simulate(args) -> int:
    from .io import write_qq_csv, write_qq_svg
    from .simulation import SimulationConfig, qq_points, run_monte_carlo

    if args.regime == "custom" and args.delta is None:
        raise InvalidArgumentError("--regime custom needs --delta")
    if args.delta is not None and args.regime != "custom":
        raise InvalidArgumentError("--delta only applies to --regime custom")
    workers = args.threads or os.cpu_count() or 1
    cfg = SimulationConfig(n=args.n, beta0=tuple(args.beta0), regime=args.regime, delta=args.delta,
                           replications=args.reps, seed=args.seed, model=args.model, fit=_fit_config(args),
                           enumerator=args.enumerator, workers=min(workers, args.reps))
    t0 = time.perf_counter()
    summary, records = run_monte_carlo(cfg)
    payload = {"schema": 1, "kind": "summary", **summary.to_dict()}
    if args.timing:
        payload["seconds"] = time.perf_counter() - t0
    _emit(payload, args.out)
    if args.records:
        with open(args.records, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rep", "beta_hat", "se", "converged", "n_informative", "n_links", "rho_hat", "error"])
            for r in records:
                w.writerow([r.rep, "" if r.beta_hat is None else repr(r.beta_hat), "" if r.se is None else repr(r.se),
                            int(r.converged), r.n_informative, r.n_links, repr(r.rho_hat), r.error or ""])
    if args.qq or args.qq_svg:
        pts = qq_points([r.beta_hat for r in records if r.converged])
        if args.qq:
            write_qq_csv(pts, args.qq)
        if args.qq_svg:
            write_qq_svg(pts, args.qq_svg, title=f"N={args.n}, {args.regime}")
    return 0


def cmd_estimate(args) -> int:
    from .io import parse_network_csv, result_payload
    net = parse_network_csv(args.input, n=args.n)
    if (args.model == "dyadic") != (net.n3 == 1):
        raise InvalidArgumentError("--model dyadic needs an i,j,y file and the triadic models an i,j,k,y file")
    cfg = _fit_config(args)
    if args.model == "dyad-fe":
        from .hexad import fit
        res = fit(net, cfg, method=args.enumerator, dfc=args.dfc)
    elif args.model == "node-fe":
        from .alt import nodefe_fit
        res = nodefe_fit(net, cfg, dfc=args.dfc)
    else:
        from .alt import tetrad_fit
        res = tetrad_fit(net, cfg, dfc=args.dfc)
    if not res.converged:
        log.warning("solver did not converge after %d iterations", res.iterations)
    _emit(result_payload(res, args.level, args.timing), args.out)
    return 0


def cmd_verify(args) -> int:
    from .oracles import crosscheck_enumerators, sufficiency_report
    from .wiring import count_hexad_pairs_by_overlap, enumerate_wirings, find_identifying_pairs, verify_minimality

    run_all = not (args.oracles or args.enumerators or args.wirings)
    report = {"schema": 1, "kind": "verify"}
    ok = True
    if args.oracles or run_all:
        report["oracles"] = sufficiency_report(args.scenarios, args.seed)
        ok &= report["oracles"]["passed"]
    if args.enumerators or run_all:
        cells = [crosscheck_enumerators(n, d, args.seed + n, args.trials) for n in (4, 5, 6) for d in (0.1, 0.3, 0.6)]
        report["enumerators"] = cells
        ok &= all(c["failed"] == 0 for c in cells)
    if args.wirings or run_all:
        dyad = verify_minimality("dyad")
        top = enumerate_wirings((2,) * 6)
        unit = enumerate_wirings((1,) * 6)
        report["wirings"] = {
            "wiring_counts": {",".join(map(str, d)): len(enumerate_wirings(d))
                              for d in itertools.product(range(3), repeat=6) if enumerate_wirings(d)},
            "wirings_222222": top,
            "identifying_pairs_222222": [list(p) for p in find_identifying_pairs(top)],
            "wirings_111111": unit,
            "node_level_pairs_111111": [list(p) for p in find_identifying_pairs(unit, "node")],
            "minimality": {k: dyad[k] for k in ("sequences_swept", "passed", "counterexamples")},
            "pair_overlap_counts": {
                str(n): {"".join(map(str, q)): c for q, c in count_hexad_pairs_by_overlap(n).items()}
                for n in (2, 3)
            },
        }
        ok &= dyad["passed"] and len(report["wirings"]["identifying_pairs_222222"]) == 1
    report["passed"] = bool(ok)
    _emit(report, args.out)
    return 0 if ok else 1


def _read_estimates(path) -> list[float]:
    from .errors import DataError

    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and r[0].strip()]
    if rows and "beta_hat" in rows[0]:
        col = rows[0].index("beta_hat")
        conv = rows[0].index("converged") if "converged" in rows[0] else None
        rows = [r for r in rows[1:] if conv is None or r[conv] == "1"]
    else:
        col = 0
    out = []
    for lineno, r in enumerate(rows, start=2):
        if r[col].strip() == "":
            continue
        try:
            out.append(float(r[col]))
        except ValueError:
            raise DataError(f"not a number: {r[col]!r}", line=lineno) from None
    return out


def cmd_qq(args) -> int:
    from .io import write_qq_csv, write_qq_svg
    from .simulation import qq_points

    pts = qq_points(_read_estimates(args.input))
    if args.out:
        write_qq_csv(pts, args.out)
    else:
        sys.stdout.write("theoretical,empirical\n")
        for t, e in pts:
            sys.stdout.write(f"{float(t)!r},{float(e)!r}\n")
    if args.svg:
        write_qq_svg(pts, args.svg)
    return 0


COMMANDS = {"simulate": cmd_simulate, "estimate": cmd_estimate, "verify": cmd_verify, "qq": cmd_qq}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    np.seterr(over="ignore", under="ignore")
    try:
        return COMMANDS[args.command](args)
    except HexLogitError as exc:
        print(f"hexlogit {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hexlogit {args.command}: {exc}", file=sys.stderr)
        return 3


def manpage() -> str:
    """Markdown reference assembled from the argparse help of every subcommand."""
    parser = build_parser()
    saved = os.environ.get("COLUMNS")
    os.environ["COLUMNS"] = "100"  # fixed wrap width so the output is reproducible
    parts = ["# hexlogit(1)", "", "## NAME", "", "hexlogit - " + parser.description, "",
             "## SYNOPSIS", "", "```", parser.format_usage().strip(), "```", ""]
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for name, p in sub.choices.items():
        parts += [f"## hexlogit {name}", "", "```", p.format_help().strip(), "```", ""]
    parts += ["## EXIT STATUS", "", "0 success; 1 a verification check failed; 2 usage error; "
              "3 data or I/O error; 4 numerical failure (no informative subgraphs, identification failure).", ""]
    if saved is None:
        del os.environ["COLUMNS"]
    else:
        os.environ["COLUMNS"] = saved
    return "\n".join(parts)


if __name__ == "__main__":
    sys.exit(main())
