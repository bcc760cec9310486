"""Drift estimation from sampled paths and Monte Carlo campaigns.

The estimator is the ratio of the stochastic integral of the weight
function h against the observations to the time integral of h,

    theta_hat = int_0^T h dX / int_0^T h ds,

discretized with a left-point sum in the numerator (h is deterministic,
so any adapted rule is valid) and the trapezoid rule in the denominator.
Its variance under the model is 1 / int_0^T h ds.

Campaign runs reuse one solved h per (h1, h2, T, N, formulation), via an
optional on-disk cache, and draw each replication from its own RNG
stream, so results are reproducible from (base_seed, M) alone.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConsistencyError, DomainError, GridMismatchError
from .fbm import MixedPath, RngSpec, mixed_path
from .fredholm import DiscreteSolution, Grid, SolverConfig, solve_mle_h, _trapezoid
from .kernel import HurstPair, KernelModel


@dataclass(frozen=True)
class EstimationResult:
    theta_hat: float
    int_h: float

    @property
    def theoretical_variance(self) -> float:
        return 1.0 / self.int_h


@dataclass(frozen=True)
class MonteCarloSummary:
    """Empirical moments of the estimator over M independent paths."""

    h1: float
    h2: float
    T: float
    M: int
    N: int
    theta: float
    base_seed: int
    mean: float
    emp_variance: float
    theo_variance: float
    std_error: float
    elapsed_s: float = 0.0

    CSV_HEADER = "T,h1,h2,M,N,theta,base_seed,mean,emp_variance,theo_variance,std_error"

    def csv_row(self) -> str:
        return (
            f"{self.T!r},{self.h1!r},{self.h2!r},{self.M},{self.N},"
            f"{self.theta!r},{self.base_seed},{self.mean!r},"
            f"{self.emp_variance!r},{self.theo_variance!r},{self.std_error!r}"
        )


def estimate_theta(
    h: DiscreteSolution,
    path: MixedPath,
    denominator: str = "trapezoid",
) -> EstimationResult:
    """Drift estimate from a solved weight function and one path.

    Both must live on the same grid.  denominator "left" switches the time
    integral to the left-point rule, which makes the estimate exact on
    noiseless paths X_t = theta * t.
    """
    if h.grid.N != path.grid.N or abs(h.grid.T - path.grid.T) > 1e-12 * h.grid.T:
        raise GridMismatchError(
            f"solution grid (T={h.grid.T}, N={h.grid.N}) does not match "
            f"path grid (T={path.grid.T}, N={path.grid.N})"
        )
    if denominator not in ("trapezoid", "left"):
        raise DomainError(f"unknown denominator rule {denominator!r}")
    hv = h.values
    num = float(np.dot(hv[:-1], np.diff(path.values)))
    if denominator == "left":
        den = float(np.sum(hv[:-1])) * h.grid.delta
    else:
        den = float(_trapezoid(hv, h.grid.nodes))
    if abs(den) < 1e-300:
        raise ConsistencyError("integral of h vanishes; corrupt solution")
    return EstimationResult(theta_hat=num / den, int_h=den)


def h_on_grid(sol: DiscreteSolution, grid: Grid) -> np.ndarray:
    """Nodal values of h on grid, linearly interpolated if grids differ."""
    if sol.grid.N == grid.N and abs(sol.grid.T - grid.T) < 1e-12 * grid.T:
        return sol.values
    if abs(sol.grid.T - grid.T) > 1e-12 * grid.T:
        raise GridMismatchError(
            f"cannot transfer h from T={sol.grid.T} to T={grid.T}"
        )
    return np.interp(grid.nodes, sol.grid.nodes, sol.values)


class SolutionCache:
    """On-disk store of solved weight functions, keyed by the solve inputs."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, pair: HurstPair, T: float, cfg: SolverConfig) -> Path:
        name = (
            f"h_{pair.h1:.10g}_{pair.h2:.10g}_T{T:.10g}_N{cfg.N}"
            f"_n{cfg.truncation}_{cfg.formulation}.csv"
        )
        return self.directory / name

    def get(self, pair: HurstPair, T: float, cfg: SolverConfig):
        path = self._path(pair, T, cfg)
        if path.exists():
            return DiscreteSolution.load(path)
        return None

    def put(self, pair: HurstPair, T: float, cfg: SolverConfig,
            sol: DiscreteSolution) -> None:
        sol.save(self._path(pair, T, cfg))


def solve_weight(
    pair: HurstPair,
    T: float,
    cfg: SolverConfig = SolverConfig(),
    cache: Optional[SolutionCache] = None,
    use_tables: bool = True,
) -> DiscreteSolution:
    """Solve (or fetch from cache) the weight function for one setting."""
    if cache is not None:
        hit = cache.get(pair, T, cfg)
        if hit is not None:
            return hit
    model = KernelModel.build(pair, T, use_tables=use_tables)
    sol = solve_mle_h(model, cfg)
    if cache is not None:
        cache.put(pair, T, cfg, sol)
    return sol


def _estimate_batch(args) -> np.ndarray:
    (h1, h2, mode, T, n_path, theta, base_seed, streams, hv) = args
    pair = HurstPair(h1, h2, mode)
    grid = Grid(T, n_path)
    hv = np.asarray(hv)
    out = np.empty(len(streams))
    for k, m in enumerate(streams):
        path = mixed_path(theta, pair, grid, RngSpec(base_seed, m))
        num = float(np.dot(hv[:-1], np.diff(path.values)))
        den = float(_trapezoid(hv, grid.nodes))
        out[k] = num / den
    return out


def run_montecarlo(
    pair: HurstPair,
    T: float,
    M: int,
    N: int = 500,
    theta: float = 1.0,
    base_seed: int = 0,
    path_points: Optional[int] = None,
    cache: Optional[SolutionCache] = None,
    workers: int = 1,
    use_tables: bool = True,
) -> MonteCarloSummary:
    """Monte Carlo campaign: one weight solve, M independent paths.

    The observation grid has 100*T + 1 points by default (denser than the
    solver grid for large T; h is transferred by linear interpolation).
    Replication m uses RNG stream m, so any subset can be recomputed.
    """
    if M < 2:
        raise DomainError("need at least M = 2 replications")
    start = time.perf_counter()
    cfg = SolverConfig(N=N)
    sol = solve_weight(pair, T, cfg, cache=cache, use_tables=use_tables)

    n_path = (path_points - 1) if path_points else int(round(100 * T))
    grid = Grid(T, n_path)
    hv = h_on_grid(sol, grid)

    streams = list(range(M))
    if workers > 1:
        chunks = [streams[i::workers] for i in range(workers)]
        args = [
            (pair.h1, pair.h2, pair.mode, T, n_path, theta, base_seed, ch, hv)
            for ch in chunks if ch
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_estimate_batch, args))
        ests = np.empty(M)
        for ch, part in zip([c for c in chunks if c], parts):
            ests[np.asarray(ch)] = part
    else:
        ests = _estimate_batch(
            (pair.h1, pair.h2, pair.mode, T, n_path, theta, base_seed, streams, hv)
        )

    emp_var = float(np.var(ests, ddof=1))
    return MonteCarloSummary(
        h1=pair.h1,
        h2=pair.h2,
        T=T,
        M=M,
        N=N,
        theta=theta,
        base_seed=base_seed,
        mean=float(np.mean(ests)),
        emp_variance=emp_var,
        theo_variance=sol.theoretical_variance,
        std_error=float(np.sqrt(emp_var / M)),
        elapsed_s=time.perf_counter() - start,
    )
