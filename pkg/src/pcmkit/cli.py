"""Command-line interface.

Subcommands: ``generate`` (seeded benchmark datasets), ``cluster`` (one
algorithm run, model as JSON), ``sweep`` (parameter grid, report files),
``marginal-curve`` (membership curves as CSV) and ``report`` (re-emit
report files from a sweep JSON).

Exit codes: 0 on success, 1 on a domain error such as total cluster
elimination, 2 on usage errors.  Diagnostics go to stderr, data to
files or stdout.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import apcm, fuzzy, harness, pcm, upcm
from .dataset import PRESETS, generate_gaussian_mixture, load_points, save_points
from .errors import PcmkitError
from .fcm import FcmConfig, fcm_cluster, init_eta
from .model import ClusterModel

GENERATE_DEFAULT_SEED = 0


def _parse_floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {exc}")


def _parse_ints(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {exc}")


def _cut_rule(text):
    return text.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcmkit",
        description="Possibilistic c-means clustering experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a seeded benchmark dataset")
    p.add_argument("--preset", choices=sorted(PRESETS), required=True,
                   help="benchmark dataset recipe")
    p.add_argument("--seed", type=int, default=GENERATE_DEFAULT_SEED,
                   help=f"generator seed (default {GENERATE_DEFAULT_SEED})")
    p.add_argument("-o", "--output", required=True,
                   help="output CSV path; a .truth.json sidecar is written next to it")

    p = sub.add_parser("cluster", help="run one clustering algorithm")
    p.add_argument("--algo", choices=("fcm", "pcm", "apcm", "upcm"), required=True)
    p.add_argument("-i", "--input", required=True, help="input points CSV")
    p.add_argument("-o", "--output", required=True, help="output model JSON")
    p.add_argument("--m-ini", type=int, required=True,
                   help="initial cluster count (the cluster count for fcm/pcm)")
    p.add_argument("--alpha", type=float, default=0.0,
                   help="upcm noise level (default 0)")
    p.add_argument("--sigma-v", type=float, default=0.0,
                   help="upcm bandwidth uncertainty (default 0)")
    p.add_argument("--cut-rule", choices=("direct", "exp-neg"), default="direct",
                   help="upcm threshold rule (default direct)")
    p.add_argument("--alpha-apcm", type=float, default=None,
                   help="apcm bandwidth scaling; no default, required for --algo apcm")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the FCM initialization (default 0)")
    p.add_argument("--tol", type=float, default=1e-4,
                   help="convergence tolerance on prototype displacement (default 1e-4)")
    p.add_argument("--max-iter", type=int, default=200,
                   help="iteration cap (default 200)")

    p = sub.add_parser("sweep", help="run an (alpha, sigma_v) parameter sweep")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--grid", choices=sorted(harness.DEFAULT_GRIDS),
                     help="calibrated default grid over its preset dataset")
    src.add_argument("-i", "--input", help="input points CSV for a custom grid")
    p.add_argument("--data-seed", type=int, default=GENERATE_DEFAULT_SEED,
                   help="dataset seed when --grid generates its preset "
                        f"(default {GENERATE_DEFAULT_SEED})")
    p.add_argument("--algo", choices=("upcm", "apcm"), default="upcm",
                   help="algorithm to sweep (default upcm)")
    p.add_argument("--m-ini", type=int, default=None,
                   help="initial cluster count; default comes from --grid, required with -i")
    p.add_argument("--alpha-values", type=_parse_floats, default=None,
                   help="comma-separated noise levels; default comes from --grid, required with -i")
    p.add_argument("--sigma-v-values", type=_parse_floats, default=None,
                   help="comma-separated sigma_v values; default comes from --grid, required with -i")
    p.add_argument("--cut-rule", choices=("direct", "exp-neg"), default="exp-neg",
                   help="threshold rule for custom upcm grids (default exp-neg)")
    p.add_argument("--seeds", type=_parse_ints, required=True,
                   help="comma-separated FCM seeds, one repetition each (required)")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel cell execution (default 1)")
    p.add_argument("--tol", type=float, default=1e-4,
                   help="convergence tolerance (default 1e-4)")
    p.add_argument("--max-iter", type=int, default=200,
                   help="iteration cap (default 200)")
    p.add_argument("-o", "--output", required=True,
                   help="output base path; .csv/.json/_long.csv are added")

    p = sub.add_parser("marginal-curve",
                       help="membership curves under bandwidth uncertainty, long CSV")
    p.add_argument("--x0", type=float, default=12.5, help="curve center (default 12.5)")
    p.add_argument("--v0", type=float, default=2.5, help="estimated bandwidth (default 2.5)")
    p.add_argument("--sigma-v", type=_parse_floats, default=(0.0, 0.5, 1.0, 2.0),
                   help="comma-separated spreads (default 0,0.5,1,2)")
    p.add_argument("--x-min", type=float, default=0.0, help="curve start (default 0)")
    p.add_argument("--x-max", type=float, default=25.0, help="curve end (default 25)")
    p.add_argument("--steps", type=int, default=251, help="sample count (default 251)")
    p.add_argument("-o", "--output", default=None, help="output CSV (default stdout)")

    p = sub.add_parser("report", help="re-emit report files from a sweep JSON")
    p.add_argument("-i", "--input", required=True, help="sweep result JSON")
    p.add_argument("-o", "--output", required=True, help="output base path")
    p.add_argument("--formats", default="csv,long",
                   help="comma-separated subset of csv,json,long (default csv,long)")

    return parser


def _cmd_generate(args) -> int:
    spec = PRESETS[args.preset](seed=args.seed)
    data = generate_gaussian_mixture(spec)
    save_points(data, args.output)
    print(f"wrote {data.n_points} points to {args.output}", file=sys.stderr)
    return 0


def _cmd_cluster(args) -> int:
    data = load_points(args.input)
    if args.algo == "fcm":
        result = fcm_cluster(data, FcmConfig(c=args.m_ini, seed=args.seed,
                                             tol=args.tol, max_iter=args.max_iter))
        model = ClusterModel(
            algorithm="fcm",
            prototypes=result.prototypes,
            memberships=result.memberships,
            bandwidths=init_eta(data, result),
            bandwidth_kind="eta",
            labels=np.argmax(result.memberships, axis=1),
            converged=result.converged,
            n_iter=result.n_iter,
        )
    elif args.algo == "pcm":
        model = pcm.run(data, pcm.PcmConfig(
            c=args.m_ini, tol=args.tol, max_iter=args.max_iter, seed=args.seed))
    elif args.algo == "apcm":
        if args.alpha_apcm is None:
            raise ValueError("--alpha-apcm is required for --algo apcm")
        model = apcm.apcm_run(data, apcm.ApcmConfig(
            m_ini=args.m_ini, alpha_apcm=args.alpha_apcm, tol=args.tol,
            max_iter=args.max_iter, seed=args.seed))
    else:
        model = upcm.upcm_run(data, upcm.UpcmConfig(
            m_ini=args.m_ini, alpha=args.alpha, sigma_v=args.sigma_v,
            cut_rule=_cut_rule(args.cut_rule), tol=args.tol,
            max_iter=args.max_iter, seed=args.seed))
    model.save_json(args.output)
    print(f"{model.algorithm}: {model.n_clusters} cluster(s) after "
          f"{model.n_iter} iteration(s), converged={model.converged}", file=sys.stderr)
    return 0


def _cmd_sweep(args) -> int:
    if args.grid:
        grid = harness.DEFAULT_GRIDS[args.grid]
        data = generate_gaussian_mixture(PRESETS[grid["preset"]](seed=args.data_seed))
        m_ini = grid["m_ini"] if args.m_ini is None else args.m_ini
        alpha_values = grid["alpha_values"] if args.alpha_values is None else args.alpha_values
        sigma_values = grid["sigma_v_values"] if args.sigma_v_values is None else args.sigma_v_values
        cut_rule = grid["cut_rule"]
    else:
        data = load_points(args.input)
        if args.m_ini is None or args.alpha_values is None or args.sigma_v_values is None:
            raise ValueError("custom sweeps need --m-ini, --alpha-values and --sigma-v-values")
        m_ini, alpha_values, sigma_values = args.m_ini, args.alpha_values, args.sigma_v_values
        cut_rule = _cut_rule(args.cut_rule)
    spec = harness.SweepSpec(
        data=data, m_ini=m_ini, alpha_values=alpha_values,
        sigma_v_values=sigma_values, seeds=args.seeds, algorithm=args.algo,
        cut_rule=cut_rule, tol=args.tol, max_iter=args.max_iter,
    )
    result = harness.run_sweep(spec, jobs=args.jobs)
    written = harness.emit_report(result, args.output, formats=("csv", "json", "long"))
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_marginal_curve(args) -> int:
    if args.steps < 2:
        raise ValueError("--steps must be at least 2")
    xs = np.linspace(args.x_min, args.x_max, args.steps)
    rows = fuzzy.marginal_curve(args.x0, args.v0, args.sigma_v, xs)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["x", "sigma_v", "mu"])
        for x, sigma_v, mu in rows:
            writer.writerow([repr(x), repr(sigma_v), repr(mu)])
    finally:
        if args.output:
            out.close()
    return 0


def _cmd_report(args) -> int:
    formats = tuple(args.formats.split(","))
    unknown = set(formats) - {"csv", "json", "long"}
    if unknown:
        raise ValueError(f"unknown report format(s): {sorted(unknown)}")
    result = harness.load_sweep_result(args.input)
    written = harness.emit_report(result, args.output, formats=formats)
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "cluster": _cmd_cluster,
    "sweep": _cmd_sweep,
    "marginal-curve": _cmd_marginal_curve,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PcmkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
