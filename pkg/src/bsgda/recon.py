"""GLR reconstruction: solve ``(diag(a) + mu L) x = H^T y`` by conjugate gradients."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .graph import Graph
from . import oracle


class SingularSystemError(ValueError):
    """Some connected component holds no sample, so the system is singular."""

    def __init__(self, component: int, nodes: np.ndarray):
        preview = ", ".join(str(int(v)) for v in nodes[:8])
        more = " ..." if nodes.size > 8 else ""
        super().__init__(
            f"connected component {component} (nodes {preview}{more}) contains no sample"
        )
        self.component = component


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"conjugate gradient did not converge in {iterations} iterations "
            f"(relative residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class SampleObservation:
    sample_set: list[int]
    values: np.ndarray

    def __post_init__(self):
        S = [int(v) for v in self.sample_set]
        if len(set(S)) != len(S):
            raise ValueError("sample set contains duplicate nodes")
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (len(S),):
            raise ValueError(f"{vals.size} values for {len(S)} samples")
        object.__setattr__(self, "sample_set", S)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class SolverConfig:
    mu: float = 0.01
    tol: float = 1e-8
    max_iters: int | None = None  # None means 10 n

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True)
class SolveResult:
    x: np.ndarray
    iterations: int
    residual: float  # relative


def apply_sampling(x, sample_set) -> np.ndarray:
    """``H x``: the entries of ``x`` at the sampled nodes, in sample order."""
    x = np.asarray(x)
    idx = np.asarray(list(sample_set), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= x.size):
        raise IndexError("sample index out of range")
    return x[idx]


def adjoint_sampling(y, sample_set, n: int) -> np.ndarray:
    """``H^T y``: scatter sample values back to a length-``n`` vector."""
    out = np.zeros(n)
    idx = np.asarray(list(sample_set), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise IndexError("sample index out of range")
    out[idx] = y
    return out


def coefficient_matrix(g: Graph, sample_set, mu: float) -> sp.csr_matrix:
    a = adjoint_sampling(np.ones(len(sample_set)), sample_set, g.n)
    return (sp.diags(a) + mu * g.laplacian).tocsr()


def check_components(g: Graph, sample_set) -> None:
    covered = np.zeros(g.n_components, dtype=bool)
    covered[g.components[np.asarray(list(sample_set), dtype=np.int64)]] = True
    if not covered.all():
        c = int(np.flatnonzero(~covered)[0])
        raise SingularSystemError(c, np.flatnonzero(g.components == c))


def conjugate_gradient(A, b: np.ndarray, tol: float, max_iters: int) -> SolveResult:
    """Plain CG for symmetric positive definite ``A``; stops on ``||r|| <= tol ||b||``."""
    bnorm = np.linalg.norm(b)
    x = np.zeros_like(b)
    if bnorm == 0.0:
        return SolveResult(x, 0, 0.0)
    r = b.copy()
    d = r.copy()
    rr = r @ r
    stop = (tol * bnorm) ** 2
    for it in range(1, max_iters + 1):
        Ad = A @ d
        alpha = rr / (d @ Ad)
        x += alpha * d
        r -= alpha * Ad
        rr_new = r @ r
        if rr_new <= stop:
            # guard against drift of the recursive residual
            true_res = np.linalg.norm(b - A @ x)
            if true_res <= tol * bnorm:
                return SolveResult(x, it, true_res / bnorm)
            r = b - A @ x
            rr_new = r @ r
            d = r.copy()
            rr = rr_new
            continue
        d = r + (rr_new / rr) * d
        rr = rr_new
    raise ConvergenceError(max_iters, float(np.linalg.norm(b - A @ x) / bnorm))


def glr_solve(g: Graph, obs: SampleObservation, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    if not obs.sample_set:
        raise ValueError("cannot reconstruct from an empty sample set")
    check_components(g, obs.sample_set)
    B = coefficient_matrix(g, obs.sample_set, cfg.mu)
    rhs = adjoint_sampling(obs.values, obs.sample_set, g.n)
    max_iters = cfg.max_iters if cfg.max_iters is not None else 10 * g.n
    return conjugate_gradient(B, rhs, cfg.tol, max_iters)


def glr_reconstruct(g: Graph, obs: SampleObservation,
                    cfg: SolverConfig = SolverConfig()) -> np.ndarray:
    """Signal minimising ``||Hx - y||^2 + mu x^T L x``."""
    return glr_solve(g, obs, cfg).x


def mse(x_hat, x) -> float:
    x_hat = np.asarray(x_hat, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x_hat.shape != x.shape:
        raise ValueError(f"shape mismatch {x_hat.shape} vs {x.shape}")
    return float(np.mean((x_hat - x) ** 2))


def mse_bound_check(g: Graph, sample_set, x, noise, cfg: SolverConfig = SolverConfig(),
                    cap: int = oracle.ORACLE_CAP) -> tuple[float, float]:
    """Error norm of a reconstruction against its worst-case bound.

    With samples ``y = x_S + noise_S`` returns ``(||x_hat - x||, rhs)`` where
    ``rhs = mu ||L (x + noise)|| / lambda_min(B) + ||noise||``; ``lhs <= rhs``
    always holds.
    """
    x = np.asarray(x, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    S = list(sample_set)
    if not S:
        raise ValueError("cannot reconstruct from an empty sample set")
    check_components(g, S)
    a = adjoint_sampling(np.ones(len(S)), S, g.n)
    lam = oracle.lambda_min(g, cfg.mu, a, cap=cap)
    B = oracle.dense_coefficient_matrix(g, cfg.mu, a)
    # exact estimator, so the check is not polluted by solver tolerance
    x_hat = sla.solve(B, a * (x + noise), assume_a="pos")
    lhs = float(np.linalg.norm(x_hat - x))
    smooth = oracle.dense_laplacian(g) @ (x + noise)
    rhs = float(cfg.mu * np.linalg.norm(smooth) / lam + np.linalg.norm(noise))
    return lhs, rhs
