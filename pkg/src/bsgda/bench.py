"""Reconstruction-error experiments and sampler timing."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .generators import GENERATORS, gen_sensor_graph
from .graph import Graph, path_graph
from .recon import SampleObservation, SolverConfig, glr_reconstruct, mse
from .sampler import DEFAULT_EPS, DEFAULT_HOPS, DEFAULT_MU, bs_gda, random_sampler

CSV_COLUMNS = ["sampler", "K", "trials", "mean_mse", "std_mse", "wall_ms"]
SAMPLERS = ("gda", "random")


class ExperimentError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    graph_type: str = "sensor"
    n: int = 500
    graph_seed: int = 0
    signal: str = "GS1"
    budgets: list[int] = field(default_factory=lambda: [50])
    n_signals: int = 10
    n_noise: int = 10
    mu: float = DEFAULT_MU
    eps: float = DEFAULT_EPS
    hops: int = DEFAULT_HOPS
    samplers: tuple[str, ...] = SAMPLERS
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.graph_type not in GENERATORS:
            raise ValueError(f"unknown graph type {self.graph_type!r}")
        self.signal = self.signal.upper()
        if self.signal not in ("GS1", "GS2"):
            raise ValueError(f"unknown signal model {self.signal!r}")
        if not self.budgets:
            raise ValueError("at least one budget is required")
        for K in self.budgets:
            if not 1 <= K <= self.n:
                raise ValueError(f"budget {K} outside [1, {self.n}]")
        if self.n_signals < 1 or self.n_noise < 1:
            raise ValueError("trial counts must be >= 1")
        for name in self.samplers:
            if name not in SAMPLERS:
                raise ValueError(f"unknown sampler {name!r}")

    @property
    def trials(self) -> int:
        return self.n_signals * self.n_noise


@dataclass
class ExperimentRow:
    sampler: str
    K: int
    trials: int
    mean_mse: float
    std_mse: float
    wall_ms: float


def _signals(g: Graph, cfg: ExperimentConfig, seeds) -> list[np.ndarray]:
    if cfg.signal == "GS1":
        spectrum = oracle.laplacian_spectrum(g)
        return [oracle.gen_gs1(g, s, spectrum=spectrum).x_true for s in seeds]
    return [oracle.gen_gs2(g, s).x_true for s in seeds]


def choose_samples(g: Graph, sampler: str, K: int, cfg: ExperimentConfig, seed) -> list[int]:
    if sampler == "gda":
        return bs_gda(g, K, cfg.eps, cfg.hops, cfg.mu, cfg.workers).sample_set
    return random_sampler(g, K, seed)


def run_experiment(cfg: ExperimentConfig, g: Graph | None = None) -> list[ExperimentRow]:
    """Mean reconstruction MSE per (sampler, budget) over all noisy trials.

    Every sampler sees the same signals and the same noise draws; each
    sampler picks one sampling set per budget.
    """
    if g is None:
        g = GENERATORS[cfg.graph_type](cfg.n, cfg.graph_seed)
    root = np.random.SeedSequence(cfg.seed)
    sig_seq, noise_seq, sampler_seq = root.spawn(3)
    signals = _signals(g, cfg, sig_seq.spawn(cfg.n_signals))
    noise_rng = np.random.default_rng(noise_seq)
    noise = noise_rng.normal(scale=oracle.NOISE_STD, size=(cfg.trials, g.n))
    sampler_seeds = sampler_seq.spawn(len(cfg.budgets))
    solver = SolverConfig(mu=cfg.mu)

    rows = []
    for name in cfg.samplers:
        for K, kseed in zip(cfg.budgets, sampler_seeds):
            t0 = time.perf_counter()
            S = choose_samples(g, name, K, cfg, kseed)
            wall_ms = 1e3 * (time.perf_counter() - t0)
            idx = np.asarray(S, dtype=np.int64)
            errs = np.empty(cfg.trials)
            for trial in range(cfg.trials):
                x = signals[trial // cfg.n_noise]
                obs = SampleObservation(S, x[idx] + noise[trial, idx])
                try:
                    errs[trial] = mse(glr_reconstruct(g, obs, solver), x)
                except (ValueError, RuntimeError) as exc:
                    raise ExperimentError(f"sampler={name} K={K} trial={trial}: {exc}") from exc
            rows.append(ExperimentRow(name, K, cfg.trials, float(errs.mean()),
                                      float(errs.std()), wall_ms))
    return rows


def write_csv(rows, path, timing: bool = True) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([r.sampler, r.K, r.trials, repr(r.mean_mse), repr(r.std_mse),
                        f"{r.wall_ms:.3f}" if timing else "0"])


def read_csv(path) -> list[ExperimentRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [
            ExperimentRow(r["sampler"], int(r["K"]), int(r["trials"]), float(r["mean_mse"]),
                          float(r["std_mse"]), float(r["wall_ms"]))
            for r in reader
        ]


def warm_up() -> None:
    """Trigger kernel compilation so it does not count towards timings."""
    bs_gda(path_graph(6), 2, eps=0.25, p=2, mu=1.0)


@dataclass
class TimingRow:
    n: int
    K: int
    wall_ms: float


def time_sampler(ns, K: int | None = None, eps: float = DEFAULT_EPS, p: int = DEFAULT_HOPS,
                 mu: float = DEFAULT_MU, seed: int = 0, repeats: int = 3,
                 workers: int = 1) -> list[TimingRow]:
    """Best-of-``repeats`` wall time of :func:`bs_gda` on sensor graphs.

    ``K=None`` uses ``n // 10``. Graph generation is excluded.
    """
    warm_up()
    rows = []
    for n in ns:
        g = gen_sensor_graph(n, 6, seed)
        k = max(1, n // 10) if K is None else K
        best = float("inf")
        for _ in range(max(1, repeats)):
            t0 = time.perf_counter()
            bs_gda(g, k, eps, p, mu, workers)
            best = min(best, time.perf_counter() - t0)
        rows.append(TimingRow(n, k, 1e3 * best))
    return rows


def scaling_ratios(rows: list[TimingRow], factor: int = 4) -> list[tuple[int, int, float]]:
    """``(n, factor*n, time ratio)`` for every such pair present in ``rows``."""
    by_n = {r.n: r.wall_ms for r in rows}
    return [(n, factor * n, by_n[factor * n] / by_n[n])
            for n in sorted(by_n) if factor * n in by_n]
