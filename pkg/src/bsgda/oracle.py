"""Dense spectral computations used for verification and signal synthesis.

Everything in this module is O(n^3) and capped at ``ORACLE_CAP`` nodes. The
sampler itself never calls into it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .graph import Graph

ORACLE_CAP = 500
GS2_DELTA = 1e-5
NOISE_STD = 0.1
GS1_COEF_VAR = 10.0
SET_COVER_CAP = 12


class OracleCapError(ValueError):
    pass


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise OracleCapError(f"graph has {n} nodes, dense oracle cap is {cap}")


def dense_laplacian(g: Graph) -> np.ndarray:
    L = np.zeros((g.n, g.n))
    L[g.rows, g.cols] = -g.weights
    L[g.cols, g.rows] = -g.weights
    L[np.diag_indices(g.n)] = g.degrees
    return L


def dense_coefficient_matrix(g: Graph, mu: float, a) -> np.ndarray:
    """``diag(a) + mu L`` as a dense array."""
    B = mu * dense_laplacian(g)
    B[np.diag_indices(g.n)] += np.asarray(a, dtype=np.float64)
    return B


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)


def _eigh(M: np.ndarray) -> Spectrum:
    vals, vecs = np.linalg.eigh(M)
    return Spectrum(vals, vecs)


def laplacian_spectrum(g: Graph, cap: int = ORACLE_CAP) -> Spectrum:
    _check_cap(g.n, cap)
    return _eigh(dense_laplacian(g))


def dense_spectrum(g: Graph, mu: float, a, cap: int = ORACLE_CAP) -> Spectrum:
    _check_cap(g.n, cap)
    return _eigh(dense_coefficient_matrix(g, mu, a))


def lambda_min(g: Graph, mu: float, a, cap: int = ORACLE_CAP) -> float:
    _check_cap(g.n, cap)
    B = dense_coefficient_matrix(g, mu, a)
    return float(sla.eigvalsh(B, subset_by_index=[0, 0])[0])


def gft(spectrum: Spectrum, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (spectrum.n,):
        raise ValueError(f"signal length {x.shape} does not match spectrum size {spectrum.n}")
    return spectrum.eigenvectors.T @ x


def inverse_gft(spectrum: Spectrum, alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (spectrum.n,):
        raise ValueError(f"coefficient length {alpha.shape} does not match spectrum size {spectrum.n}")
    return spectrum.eigenvectors @ alpha


@dataclass(frozen=True, eq=False)
class SignalInstance:
    """A ground-truth graph signal plus one full-length noise draw.

    ``observe(S)`` returns the noisy samples ``x_true[S] + noise[S]``.
    """

    x_true: np.ndarray
    noise: np.ndarray
    model: str
    seed: int | None
    bandwidth: int | None = None
    delta: float | None = None
    noise_std: float = NOISE_STD

    def observe(self, sample_set):
        from .recon import SampleObservation

        S = list(sample_set)
        idx = np.asarray(S, dtype=np.int64)
        return SampleObservation(S, self.x_true[idx] + self.noise[idx])


def gs1_bandwidth(n: int) -> int:
    return n // 10


def gen_gs1(g: Graph, seed=None, spectrum: Spectrum | None = None,
            noise_std: float = NOISE_STD, cap: int = ORACLE_CAP) -> SignalInstance:
    """Bandlimited signal: the lowest ``n // 10`` GFT coefficients are N(0, 10)."""
    _check_cap(g.n, cap)
    if spectrum is None:
        spectrum = laplacian_spectrum(g, cap=cap)
    rng = np.random.default_rng(seed)
    k = gs1_bandwidth(g.n)
    alpha = np.zeros(g.n)
    alpha[:k] = rng.normal(scale=np.sqrt(GS1_COEF_VAR), size=k)
    x = inverse_gft(spectrum, alpha)
    noise = rng.normal(scale=noise_std, size=g.n)
    return SignalInstance(x, noise, "GS1", seed, bandwidth=k, noise_std=noise_std)


def gen_gs2(g: Graph, seed=None, delta: float = GS2_DELTA,
            noise_std: float = NOISE_STD, cap: int = ORACLE_CAP) -> SignalInstance:
    """GMRF signal ``x ~ N(0, (L + delta I)^-1)``, then centred and scaled to unit std."""
    _check_cap(g.n, cap)
    rng = np.random.default_rng(seed)
    P = dense_laplacian(g) + delta * np.eye(g.n)
    R = sla.cholesky(P, lower=True)
    z = rng.standard_normal(g.n)
    # P = R R^T  =>  R^-T z has covariance P^-1
    x = sla.solve_triangular(R, z, lower=True, trans="T")
    x = (x - x.mean()) / x.std()
    noise = rng.normal(scale=noise_std, size=g.n)
    return SignalInstance(x, noise, "GS2", seed, delta=delta, noise_std=noise_std)


def harmonic(k: int) -> float:
    return sum(1.0 / i for i in range(1, k + 1))


def brute_force_set_cover(universe, subsets, K: int | None = None):
    """Minimum-size cover of ``universe`` by members of ``subsets``.

    Returns the indices into ``subsets`` of one optimal cover (the
    lexicographically first among minimum ones), or ``None`` when no cover
    of size at most ``K`` exists.
    """
    elems = sorted(set(universe))
    if len(elems) > SET_COVER_CAP:
        raise OracleCapError(f"universe of {len(elems)} exceeds exhaustive cap {SET_COVER_CAP}")
    bit = {e: 1 << k for k, e in enumerate(elems)}
    full = (1 << len(elems)) - 1
    masks = [sum(bit[e] for e in set(sub) if e in bit) for sub in subsets]
    if full == 0:
        return []
    reach = 0
    for m in masks:
        reach |= m
    if reach != full:
        return None
    # identical masks are interchangeable; keep the first index of each
    first: dict[int, int] = {}
    for idx, m in enumerate(masks):
        if m and m not in first:
            first[m] = idx
    cand = sorted(first.values())
    limit = len(elems) if K is None else min(K, len(elems))
    for r in range(1, limit + 1):
        for combo in itertools.combinations(cand, r):
            acc = 0
            for idx in combo:
                acc |= masks[idx]
            if acc == full:
                return list(combo)
    return None
