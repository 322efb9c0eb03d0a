"""Command-line interface: ``bsgda {generate,sample,reconstruct,experiment,verify,timing}``."""

from __future__ import annotations

import argparse
import contextlib
import logging
import math
import sys

import numpy as np

from . import bench, io, oracle
from .discs import DiscState, sampling_vector
from .generators import GENERATORS
from .recon import SampleObservation, SolverConfig, glr_solve
from .sampler import (
    ALIGN_TOL, DEFAULT_EPS, DEFAULT_HOPS, DEFAULT_MU, bs_gda, certified_bound,
    random_sampler, rebuild_scaling, verify_alignment,
)


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _shared(p: argparse.ArgumentParser, *names: str) -> None:
    opts = {
        "graph": lambda: p.add_argument("--graph", required=True, help="edge-list file"),
        "out": lambda: p.add_argument("--out", help="output file (default: stdout)"),
        "seed": lambda: p.add_argument("--seed", type=int, default=0),
        "mu": lambda: p.add_argument("--mu", type=float, default=DEFAULT_MU),
        "eps": lambda: p.add_argument("--eps", type=float, default=DEFAULT_EPS),
        "hops": lambda: p.add_argument("--hops", type=int, default=DEFAULT_HOPS),
        "workers": lambda: p.add_argument("--workers", type=int, default=1),
    }
    for name in names:
        opts[name]()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsgda", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic graph as an edge list")
    p.add_argument("--type", required=True, choices=sorted(GENERATORS))
    p.add_argument("--n", type=int, required=True)
    _shared(p, "seed")
    p.add_argument("--out", required=True)

    p = sub.add_parser("sample", help="select a sampling set")
    _shared(p, "graph", "out", "seed", "mu", "eps", "hops", "workers")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--sampler", choices=bench.SAMPLERS, default="gda")

    p = sub.add_parser("reconstruct", help="GLR reconstruction from samples")
    _shared(p, "graph", "out", "mu")
    p.add_argument("--samples", required=True, help="sampling-set file")
    p.add_argument("--values", required=True, help="one sample value per line, in sample order")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=None)

    p = sub.add_parser("experiment", help="MSE versus budget for each sampler")
    p.add_argument("--type", default="sensor", choices=sorted(GENERATORS))
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--graph-seed", type=int, default=0)
    p.add_argument("--signal", default="GS1", choices=["GS1", "GS2", "gs1", "gs2"])
    p.add_argument("--budget", type=_int_list, required=True, help="e.g. 10,20,40")
    p.add_argument("--signals", type=int, default=10, help="signal draws")
    p.add_argument("--noise-draws", type=int, default=10, help="noise draws per signal")
    p.add_argument("--samplers", default="gda,random")
    p.add_argument("--no-timing", action="store_true", help="write wall_ms as 0")
    _shared(p, "out", "seed", "mu", "eps", "hops", "workers")

    p = sub.add_parser("verify", help="Gershgorin bounds against the exact lambda_min")
    _shared(p, "graph", "mu", "hops")
    p.add_argument("--samples", required=True, help="sampling-set file")
    p.add_argument("--tol", type=float, default=ALIGN_TOL)

    p = sub.add_parser("timing", help="sampler wall time versus graph size")
    p.add_argument("--ns", type=_int_list, required=True, help="e.g. 500,1000,2000,4000")
    p.add_argument("--budget", type=int, default=None, help="fixed K (default n/10)")
    p.add_argument("--repeats", type=int, default=3)
    _shared(p, "out", "seed", "mu", "eps", "hops", "workers")
    return parser


@contextlib.contextmanager
def _open_out(path):
    if not path:
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as fh:
        yield fh


def cmd_generate(args) -> None:
    if args.n < 1:
        raise UsageError("--n must be positive")
    g = GENERATORS[args.type](args.n, args.seed)
    io.save_edge_list(g, args.out)
    if g.coords is not None:
        io.save_coords(g.coords, io.coords_path(args.out))
    print(f"wrote {args.out}: n={g.n} m={g.m} components={g.n_components}")


def cmd_sample(args) -> None:
    g = io.load_edge_list(args.graph)
    if not 1 <= args.budget <= g.n:
        raise UsageError(f"--budget must be in [1, {g.n}], got {args.budget}")
    if args.sampler == "gda":
        out = bs_gda(g, args.budget, args.eps, args.hops, args.mu, args.workers)
        header = (out.achieved_T, out.valid, out.certified_lower_bound)
        nodes = out.sample_set
    else:
        nodes = random_sampler(g, args.budget, args.seed)
        header = (math.nan, False, certified_bound(g, nodes, np.ones(g.n), args.mu))
    if args.out:
        io.save_sample_set(args.out, nodes, *header)
    else:
        print(f"# T_hat={float(header[0])!r} valid={int(header[1])} certified_lb={float(header[2])!r}")
        for v in nodes:
            print(v)


def cmd_reconstruct(args) -> None:
    g = io.load_edge_list(args.graph)
    S = io.load_sample_set(args.samples).nodes
    y = io.load_signal(args.values)
    res = glr_solve(g, SampleObservation(S, y), SolverConfig(args.mu, args.tol, args.max_iters))
    if args.out:
        io.save_signal(res.x, args.out)
    else:
        for v in res.x:
            print(repr(float(v)))
    print(f"cg iterations={res.iterations} residual={res.residual:.3e}", file=sys.stderr)


def cmd_experiment(args) -> None:
    cfg = bench.ExperimentConfig(
        graph_type=args.type, n=args.n, graph_seed=args.graph_seed, signal=args.signal,
        budgets=args.budget, n_signals=args.signals, n_noise=args.noise_draws,
        mu=args.mu, eps=args.eps, hops=args.hops,
        samplers=tuple(s.strip() for s in args.samplers.split(",") if s.strip()),
        seed=args.seed, workers=args.workers,
    )
    rows = bench.run_experiment(cfg)
    if args.out:
        bench.write_csv(rows, args.out, timing=not args.no_timing)
    else:
        print(",".join(bench.CSV_COLUMNS))
        for r in rows:
            wall = "0" if args.no_timing else f"{r.wall_ms:.3f}"
            print(f"{r.sampler},{r.K},{r.trials},{r.mean_mse!r},{r.std_mse!r},{wall}")


def cmd_verify(args) -> None:
    g = io.load_edge_list(args.graph)
    sf = io.load_sample_set(args.samples)
    S = sf.nodes
    T = sf.T_hat
    if S and math.isfinite(T) and 0 < T < 1:
        s = rebuild_scaling(g, S, T, args.hops, args.mu)
    else:
        s = np.ones(g.n)
        T = 0.0 if not math.isfinite(T) else T
    a = sampling_vector(g.n, S)
    ends = DiscState(g, a, s, args.mu).left_ends()
    lam = oracle.lambda_min(g, args.mu, a)
    bad = verify_alignment(g, a, s, args.mu, T, args.tol)
    print(f"samples={len(S)} T_hat={T!r}")
    print(f"certified_lb={float(ends.min())!r} <= lambda_min={float(lam)!r} "
          f"<= max_left_end={float(ends.max())!r}")
    holds = ends.min() <= lam + 1e-9 and lam <= ends.max() + 1e-9
    print(f"sandwich={'holds' if holds else 'VIOLATED'} violations={len(bad)}")
    for node, le in bad:
        print(f"  node {node}: left_end={le!r}")


def cmd_timing(args) -> None:
    rows = bench.time_sampler(args.ns, args.budget, args.eps, args.hops, args.mu,
                              args.seed, args.repeats, args.workers)
    with _open_out(args.out) as fh:
        fh.write("n,K,wall_ms\n")
        for r in rows:
            fh.write(f"{r.n},{r.K},{r.wall_ms:.3f}\n")
        for n_lo, n_hi, ratio in bench.scaling_ratios(rows):
            fh.write(f"# ratio time({n_hi})/time({n_lo}) = {ratio:.3f}\n")


COMMANDS = {
    "generate": cmd_generate,
    "sample": cmd_sample,
    "reconstruct": cmd_reconstruct,
    "experiment": cmd_experiment,
    "verify": cmd_verify,
    "timing": cmd_timing,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"bsgda {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
