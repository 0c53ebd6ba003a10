"""Command-line entry point: ``pdmetric {dist,embed,bench,theory}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import bench, theory
from .diagram import InvalidDiagramError, read_diagram
from .features.gaussian import WEIGHT_FUNCTIONS, pss_embedding, pwg_embedding
from .features.landscape import landscape_profile
from .features.vectors import persistence_image, topological_vector
from .matching import diagram_distance
from .sliced import DEFAULT_DIRECTIONS, sliced_wasserstein_distance
from .validation import check_order

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _order(text):
    if text == "sw":
        return "sw"
    try:
        return check_order(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path):
    try:
        return read_diagram(path)
    except (InvalidDiagramError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from None
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_dist(args):
    a, b = _load(args.a), _load(args.b)
    if args.p == "sw":
        value = sliced_wasserstein_distance(a, b, args.directions)
    else:
        value = diagram_distance(a, b, args.p)
    print(_fmt(value))
    return EXIT_OK


def cmd_embed(args):
    d = _load(args.diagram)
    m = args.method
    if m in ("pwg", "pss"):
        e = pwg_embedding(d, args.weight or "persistence_squared", args.sigma) if m == "pwg" else pss_embedding(d, args.sigma)
        payload = {
            "bandwidth": e.bandwidth,
            "atoms": [[c[0], c[1], w] for c, w in zip(e.centers.tolist(), e.weights.tolist())],
        }
        print(json.dumps(payload))
    elif m == "ls":
        print(landscape_profile(d, args.k_max).to_json())
    else:
        if m == "im":
            v = persistence_image(d, args.resolution, args.sigma, args.weight or "persistence")
        else:
            v = topological_vector(d, args.length)
        print(",".join(format(x, ".17g") for x in v))
    return EXIT_OK


def cmd_bench(args):
    try:
        config = bench.ExperimentConfig.from_json(args.config)
    except bench.ConfigError as exc:
        raise UsageError(str(exc)) from None
    except OSError as exc:
        raise UsageError(f"{args.config}: {exc.strerror or exc}") from None
    if args.full:
        config = config.full_scale()
    if args.n_jobs == 0:
        raise UsageError("--n-jobs must be nonzero")
    table = bench.run_experiment(config, n_jobs=args.n_jobs)
    summary = bench.summarize(table)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bench.emit(table, out / "ratios.csv", "csv")
    bench.emit(summary, out / "summary.json", "json")
    bench.emit(summary, out / "boxplot.csv", "csv")
    bench.emit(summary, out / "distortion_boxplot.csv", "csv", orientation="distortion")
    for m, t in summary.trend.items():
        dec = ", ".join(f"{x:.4g}" for x in t["distortion"]["upper_decile_mean"])
        print(f"{m}: d1/dh upper-decile mean over {t['cardinalities']}: [{dec}]")
    if table.failures:
        for c, msg in sorted(table.failures.items()):
            print(f"bucket {c} failed: {msg}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def s_suite(k: int, k_large: int, threshold: float) -> dict:
    checks = []
    for j in range(1, k + 1):
        bound = theory.s_distance_lower_bound(range(1, j + 1), ())
        exact = diagram_distance(theory.s_truncation(j).diagram, theory.s_diagram(()).diagram, 1)
        checks.append({"k": j, "bound": bound, "d1": exact, "ok": abs(bound - exact) <= 1e-9})
    large = theory.s_distance_lower_bound(range(1, k_large + 1), ())
    return {
        "suite": "s",
        "truncations": checks,
        "k_large": k_large,
        "half_harmonic": large,
        "threshold": threshold,
        "exceeds_threshold": large > threshold,
        "passed": all(c["ok"] for c in checks) and large > threshold,
    }


def cauchy_suite(q_max: int, sigma: float) -> dict:
    tails, bounds = theory.pwg_cauchy_tail_grid(q_max, sigma)
    mask = ~np.isnan(tails)
    mask[0, :] = False
    pwg_ok = bool(np.all(tails[mask] <= bounds[mask] * (1 + 1e-12)))
    lt, lb = theory.landscape_cauchy_tail_grid(q_max)
    lmask = ~np.isnan(lt)
    ls_ok = bool(np.all(lt[lmask] <= lb[lmask] * (1 + 1e-12)))
    first = theory.landscape_cauchy_tail(1, 2)[0]
    return {
        "suite": "cauchy",
        "q_max": q_max,
        "sigma": sigma,
        "pwg_max_tail_over_bound": float(np.max(tails[mask] / bounds[mask])),
        "pwg_within_bound": pwg_ok,
        "landscape_max_tail_over_bound": float(np.max(lt[lmask] / lb[lmask])),
        "landscape_within_bound": ls_ok,
        "landscape_tail_1_2": first,
        "landscape_tail_1_2_expected": 1.0 / 96.0,
        "passed": pwg_ok and ls_ok and abs(first - 1.0 / 96.0) <= 1e-12,
    }


def cmd_theory(args):
    if args.suite == "packing":
        try:
            family = theory.assouad_packing(args.C, args.alpha, args.L)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        report = {"suite": "packing", **theory.verify_packing(family, args.p)}
    elif args.suite == "s":
        report = s_suite(args.k, args.k_large, args.threshold)
    else:
        report = cauchy_suite(args.q_max, args.sigma)
    print(json.dumps(report, indent=2))
    return EXIT_OK if report["passed"] else EXIT_DATA


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdmetric", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("dist", help="distance between two diagram CSV files")
    p.add_argument("--p", type=_order, default=1, help="1, 2, ..., inf, or sw")
    p.add_argument("--directions", type=int, default=DEFAULT_DIRECTIONS)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("embed", help="print the feature-map image of one diagram")
    p.add_argument("--method", required=True, choices=["pwg", "pss", "ls", "im", "tv"])
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--weight", choices=sorted(WEIGHT_FUNCTIONS))
    p.add_argument("--resolution", type=int, default=10)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("diagram")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("bench", help="run the distortion experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--full", action="store_true", help="100 diagrams per cardinality from 10 to 1000 (multi-hour)")
    p.add_argument("--n-jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("theory", help="numeric checks of the constructions, JSON report")
    p.add_argument("--suite", required=True, choices=["s", "cauchy", "packing"])
    p.add_argument("--C", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--p", type=_order, default=1)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--k-large", type=int, default=40_000)
    p.add_argument("--threshold", type=float, default=5.0)
    p.add_argument("--q-max", type=int, default=200)
    p.add_argument("--sigma", type=float, default=1.0)
    p.set_defaults(func=cmd_theory)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
        if getattr(args, "p", None) == "sw" and args.command != "dist":
            raise UsageError("--p sw is only valid for dist")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(exc, file=sys.stderr)
        return EXIT_DATA
    except (ValueError, InvalidDiagramError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
