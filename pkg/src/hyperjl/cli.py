"""Command-line front end.

    hyperjl gen          --n 64 --dim 128 --seed 0 --output pts.csv
    hyperjl reduce       --input pts.csv --output low.csv --epsilon 0.2 --seed 0
    hyperjl embed-plane  --input sep.csv --output plane.csv --epsilon 0.5
    hyperjl distort      --input pts.csv low.csv
    hyperjl bench        --output timings.csv

Reports go to stdout as JSON (sorted keys). Exit status: 0 on success, 1 on
usage or I/O errors, 2 when a certificate cannot be produced.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from hyperjl.fileio import FORMATS, FormatError, read_pointset, write_pointset
from hyperjl.harness import distortion, gen_random, gen_separated, pairwise_distances
from hyperjl.plane import embed_plane, separated_instance
from hyperjl.projection import ProjectionError, ProjectionSpec, apply, make_projection
from hyperjl.reduction import CertificateError, reduce

METHOD_NAMES = {"dense": "dense-gaussian", "fast": "fast-hadamard"}
EXIT_OK, EXIT_USAGE, EXIT_CERT = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"
    sys.stdout.write(text)
    if getattr(args, "report", None):
        with open(args.report, "w") as fh:
            fh.write(text)


def _epsilon(args) -> float:
    if args.epsilon is None or not 0.0 < args.epsilon < 1.0:
        raise UsageError(f"--epsilon must lie in (0, 1), got {args.epsilon!r}")
    return args.epsilon


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def cmd_gen(args) -> int:
    _need(args, "n", "dim", "output")
    report = {"n": args.n, "dim": args.dim, "seed": args.seed}
    if args.delta_min is None:
        ps = gen_random(args.n, args.dim, args.seed, args.z_spread, args.x_spread)
        report.update(kind="random", z_spread=args.z_spread, x_spread=args.x_spread)
    elif args.delta_min == "auto":
        eps = _epsilon(args)
        ps, delta = separated_instance(args.n, args.dim, eps, seed=args.seed, jitter=args.jitter)
        report.update(kind="separated", delta_min=delta, epsilon=eps, jitter=args.jitter)
    else:
        try:
            delta = float(args.delta_min)
        except ValueError:
            raise UsageError(f"--delta-min must be a number or 'auto', got {args.delta_min!r}") from None
        ps = gen_separated(args.n, args.dim, delta, seed=args.seed, jitter=args.jitter)
        report.update(kind="separated", delta_min=delta, jitter=args.jitter)
    write_pointset(ps, args.output, args.format)
    _dump(report, args)
    return EXIT_OK


def _worst_pairs(certificate, count=5):
    worst = sorted(certificate, key=lambda r: (r.upper_bound - r.delta_out, r.i, r.j))[:count]
    return [
        {
            "i": r.i,
            "j": r.j,
            "delta_in": r.delta_in,
            "delta_out": r.delta_out,
            "thm1_upper": r.upper_bound,
            "tanh_upper": r.sharp_bound,
        }
        for r in worst
    ]


def cmd_reduce(args) -> int:
    _need(args, "input", "output")
    eps = _epsilon(args)
    ps = read_pointset(args.input, args.format)
    try:
        result = reduce(
            ps, eps, args.seed, max_attempts=args.max_attempts, method=METHOD_NAMES[args.method]
        )
    except ProjectionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CERT
    except CertificateError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CERT
    write_pointset(result.reduced, args.output, args.format)
    rep = distortion(pairwise_distances(ps), pairwise_distances(result.reduced))
    cert = result.certificate
    _dump(
        {
            "n": len(ps),
            "dim_in": ps.dim,
            "dim_out": result.reduced.dim,
            "epsilon": eps,
            "seed": args.seed,
            "method": result.map.method,
            "attempts": result.attempts,
            "scale": result.map.scale,
            "min_ratio": rep.min_ratio,
            "max_ratio": rep.max_ratio,
            "distortion": rep.distortion,
            "thm1_certified": result.certified,
            "tanh_certified": all(r.delta_out <= r.sharp_bound + 1e-9 for r in cert),
            "worst_pairs": _worst_pairs(cert),
        },
        args,
    )
    return EXIT_OK


def cmd_embed_plane(args) -> int:
    _need(args, "input", "output")
    eps = _epsilon(args)
    ps = read_pointset(args.input, args.format)
    if len(ps) < 2:
        raise UsageError("embed-plane needs at least two points")
    try:
        res = embed_plane(ps, eps, method=args.line_method)
    except CertificateError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CERT
    write_pointset(res.embedded, args.output, args.format)
    _dump(
        {
            "n": len(ps),
            "epsilon": eps,
            "min_separation": res.min_separation,
            "required_separation_paper": res.required_separation,
            "required_separation_conservative": res.conservative_separation,
            "lipschitz_L": res.line.lipschitz,
            "additive_bound": res.additive_bound,
            "line_method": res.line.method,
            "distortion": res.measured_distortion,
            "certified": res.certified,
        },
        args,
    )
    if args.require_certified and not res.certified:
        print("error: separation below the certified threshold", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def cmd_distort(args) -> int:
    if not args.input or len(args.input) != 2:
        raise UsageError("distort needs --input FILE_A FILE_B")
    a = read_pointset(args.input[0], args.format)
    b = read_pointset(args.input[1], args.format)
    if len(a) != len(b):
        raise UsageError(f"point counts differ: {len(a)} vs {len(b)}")
    _dump(distortion(pairwise_distances(a), pairwise_distances(b)).as_dict(), args)
    return EXIT_OK


def _best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_bench(args) -> int:
    rows = ["input_dim,target_dim,n,method,make_seconds,apply_seconds,total_seconds"]
    for d in args.dims:
        k = min(args.k, d)
        vectors = np.random.default_rng(args.seed).standard_normal((args.n, d))
        for method in ("dense-gaussian", "fast-hadamard"):
            spec = ProjectionSpec(d, k, 0.5, args.seed, method)
            fmap = make_projection(spec)
            make = _best_time(lambda: make_projection(spec), args.repeats)
            run = _best_time(lambda: apply(fmap, vectors), args.repeats)
            rows.append(f"{d},{k},{args.n},{method},{make!r},{run!r},{make + run!r}")
    text = "\n".join(rows) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperjl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_nargs=None):
        p.add_argument("--input", nargs=input_nargs)
        p.add_argument("--output")
        p.add_argument("--format", choices=FORMATS, help="default: from the file extension")
        p.add_argument("--report", help="also write the JSON report here")

    p = sub.add_parser("gen", help="write a synthetic point set")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta-min", help="minimum separation, or 'auto' for the plane-embedding threshold")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--z-spread", type=float, default=1.0)
    p.add_argument("--x-spread", type=float, default=1.0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="reduce the dimension of a point set")
    common(p)
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=sorted(METHOD_NAMES), default="dense")
    p.add_argument("--max-attempts", type=int, default=16)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("embed-plane", help="embed a point set into the hyperbolic plane")
    common(p)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--line-method", choices=("auto", "exhaustive", "mst"), default="auto")
    p.add_argument("--require-certified", action="store_true", help="exit 2 if not certified")
    p.set_defaults(func=cmd_embed_plane)

    p = sub.add_parser("distort", help="distortion between two point files")
    common(p, input_nargs=2)
    p.set_defaults(func=cmd_distort)

    p = sub.add_parser("bench", help="time dense vs fast projections")
    p.add_argument("--output")
    p.add_argument("--dims", type=int, nargs="+", default=[256, 1024, 4096, 16384])
    p.add_argument("--k", type=int, default=256)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, FormatError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
