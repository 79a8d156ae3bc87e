"""Command-line front end: ``tcdlr {synth,complete,phase,image,bench}``.

Every run echoes its configuration and metrics as ``key=value`` lines so
it can be reproduced from the log alone. Exit codes: 0 on success, 2 on a
malformed input file, 3 when the solver stopped at ``max_iters`` without
meeting the tolerance (results are still written).
"""

import argparse
import dataclasses
import logging
import sys

import numpy as np

from .harness import bench as bench_mod
from .harness import imaging
from .harness.io import FormatError, load_mask, load_tensor, save_mask, save_tensor
from .harness.metrics import Metrics, psnr, relerr
from .harness.sweep import phase_sweep
from .harness.synthetic import SynthSpec, gen_synthetic, sample_uniform
from .reference import solve_tnn
from .solver import Observation, SolverConfig, solve
from .surrogate import KINDS, SurrogateSpec

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_NOT_CONVERGED = 3


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _common(p):
    g = p.add_argument_group("solver")
    g.add_argument("--surrogate", choices=KINDS, default="lp")
    g.add_argument("--p", type=float, default=0.8, help="exponent of the lp surrogate")
    g.add_argument("--gamma", type=float, default=1.0)
    g.add_argument("--sample-rate", type=float, default=0.3)
    g.add_argument("--rank", type=int, default=20, help="true tubal rank of synthetic data")
    g.add_argument("--k-init", type=int, default=None)
    g.add_argument("--k-min", type=int, default=SolverConfig.k_min)
    g.add_argument("--k-max", type=int, default=None)
    g.add_argument("--fixed-rank", action="store_true", help="keep k_init fixed")
    g.add_argument("--tnn", action="store_true", help="use the full t-SVT baseline solver")
    g.add_argument("--rho", type=float, default=SolverConfig.rho)
    g.add_argument("--mu0", type=float, default=SolverConfig.mu0)
    g.add_argument("--mu-max", type=float, default=SolverConfig.mu_max)
    g.add_argument("--eps", type=float, default=SolverConfig.eps)
    g.add_argument("--max-iters", type=int, default=SolverConfig.max_iters)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--out", default=None, help="output path")
    g.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="tcdlr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate, sample and complete a synthetic tensor")
    p.add_argument("--n", type=int, default=200, help="n1 = n2 = n")
    p.add_argument("--n3", type=int, default=3)
    _common(p)

    p = sub.add_parser("complete", help="complete a TNS3 tensor given an MSK3 mask")
    p.add_argument("--tensor", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--truth", default=None, help="optional TNS3 ground truth for metrics")
    _common(p)

    p = sub.add_parser("phase", help="rank/sampling-rate phase sweep to CSV")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--n3", type=int, default=3)
    p.add_argument("--rank-grid", type=_floats, default=[0.05, 0.1, 0.2, 0.3])
    p.add_argument("--rate-grid", type=_floats, default=[0.1, 0.3, 0.5, 0.7])
    p.add_argument("--trials", type=int, default=1)
    _common(p)

    p = sub.add_parser("image", help="sample and recover an RGB image")
    p.add_argument("--input", required=True)
    _common(p)

    p = sub.add_parser("bench", help="per-iteration timing of the solver paths")
    p.add_argument("--ns", type=_ints, default=[100, 200, 400])
    p.add_argument("--path", choices=bench_mod.PATHS + ("both",), default="both")
    p.add_argument("--n3", type=int, default=3)
    p.add_argument("--iters", type=int, default=5)
    _common(p)
    return parser


def config_from_args(args):
    surrogate = SurrogateSpec(args.surrogate, p=args.p, gamma=args.gamma)
    return SolverConfig(
        surrogate=surrogate,
        rho=args.rho,
        mu0=args.mu0,
        mu_max=args.mu_max,
        eps=args.eps,
        max_iters=args.max_iters,
        k_init=args.k_init,
        k_min=args.k_min,
        k_max=args.k_max,
        seed=args.seed,
        fixed_rank=args.fixed_rank,
        threads=args.threads,
    )


def _echo(tag, pairs, out=None):
    out = out or sys.stdout
    print(tag + " " + " ".join(f"{k}={v}" for k, v in pairs), file=out)


def _echo_config(args, cfg):
    pairs = [("command", args.command)]
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, SurrogateSpec):
            pairs += [("surrogate", v.kind), ("p", v.p), ("gamma", v.gamma)]
        elif isinstance(v, np.ndarray):
            pairs.append((f.name, ",".join(str(int(k)) for k in v)))
        else:
            pairs.append((f.name, v))
    for name in ("n", "n3", "rank", "sample_rate", "tensor", "mask", "input", "out", "tnn"):
        if hasattr(args, name):
            pairs.append((name, getattr(args, name)))
    _echo("config", pairs)


def _run(obs, cfg, use_tnn):
    rep = solve_tnn(obs, cfg) if use_tnn else solve(obs, cfg)
    return rep


def _report(rep, truth, observed=None):
    ref = truth if truth is not None else observed
    err = relerr(rep.recovered, truth) if truth is not None else float("nan")
    peak = psnr(rep.recovered, ref) if ref is not None and np.any(ref) else float("nan")
    met = Metrics(relerr=err, psnr=peak, wall_time=rep.wall_time, iterations=rep.iterations)
    pairs = met.as_pairs() + [
        ("termination", rep.termination),
        ("ranks", ",".join(map(str, rep.ranks))),
    ]
    _echo("metrics", pairs)
    return EXIT_OK if rep.converged else EXIT_NOT_CONVERGED


def cmd_synth(args):
    spec = SynthSpec(args.n, args.n, args.n3, args.rank, args.sample_rate, args.seed)
    cfg = config_from_args(args)
    _echo_config(args, cfg.resolve((args.n, args.n, args.n3)))
    m = gen_synthetic(spec)
    obs = sample_uniform(m, args.sample_rate, seed=args.seed + 10_000)
    rep = _run(obs, cfg, args.tnn)
    if args.out:
        save_tensor(args.out, rep.recovered)
    return _report(rep, m)


def cmd_complete(args):
    data = load_tensor(args.tensor)
    mask = load_mask(args.mask)
    if data.shape != mask.shape:
        raise FormatError(args.mask, f"mask shape {mask.shape} differs from tensor {data.shape}")
    truth = load_tensor(args.truth) if args.truth else None
    cfg = config_from_args(args)
    _echo_config(args, cfg.resolve(data.shape))
    obs = Observation.from_tensor(data, mask)
    rep = _run(obs, cfg, args.tnn)
    if args.out:
        save_tensor(args.out, rep.recovered)
    return _report(rep, truth)


def cmd_phase(args):
    cfg = config_from_args(args)
    _echo_config(args, cfg)

    def progress(cell):
        _echo("cell", zip(("rank_fraction", "sample_rate", "mean_relerr", "success_count", "mean_time"), cell.row()))

    cells = phase_sweep(
        args.n,
        args.rank_grid,
        args.rate_grid,
        trials=args.trials,
        cfg=cfg,
        n3=args.n3,
        seed=args.seed,
        csv_path=args.out,
        progress=progress,
    )
    _echo("metrics", [("cells", len(cells)), ("successes", sum(c.success for c in cells))])
    return EXIT_OK


def cmd_image(args):
    try:
        raster = imaging.read_image(args.input)
    except (OSError, ValueError) as exc:
        raise FormatError(args.input, f"unreadable image ({exc})") from exc
    m = imaging.image_to_tensor(raster)
    cfg = config_from_args(args)
    _echo_config(args, cfg.resolve(m.shape))
    obs = sample_uniform(m, args.sample_rate, seed=args.seed)
    rep = _run(obs, cfg, args.tnn)
    if args.out:
        imaging.write_image(args.out, imaging.tensor_to_image(rep.recovered))
        stem = args.out[:-4] if args.out.lower().endswith(".png") else args.out
        imaging.write_image(stem + "_sampled.png", imaging.tensor_to_image(obs.data))
    return _report(rep, m)


def cmd_bench(args):
    cfg = config_from_args(args)
    _echo_config(args, cfg)
    paths = bench_mod.PATHS if args.path == "both" else (args.path,)
    lines = ["path,n,rank,iterations,per_iter_seconds"]
    for path in paths:
        rows = bench_mod.bench_path(
            path, args.ns, rank=args.rank, n3=args.n3, sample_rate=args.sample_rate,
            iters=args.iters, seed=args.seed, cfg=cfg,
        )
        for r in rows:
            lines.append(",".join(r.row()))
            _echo("bench", zip(("path", "n", "rank", "iterations", "per_iter"), r.row()))
        if len(rows) >= 2:
            slope = bench_mod.fit_exponent([r.n for r in rows], [r.per_iter for r in rows])
            _echo("metrics", [("path", path), ("exponent", f"{slope:.3f}")])
    if args.out:
        with open(args.out, "w", encoding="ascii") as f:
            f.write("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "complete": cmd_complete,
    "phase": cmd_phase,
    "image": cmd_image,
    "bench": cmd_bench,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
