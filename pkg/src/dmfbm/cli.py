"""Command-line front end.

Subcommands: kernel-surface, solve, validate, simulate, montecarlo.
All outputs are CSV files with JSON metadata sidecars carrying the
effective configuration, so any run can be reproduced byte for byte.

Flag precedence: command line > --config JSON file > built-in defaults.
Exit codes: 0 success, 2 domain/usage error, 3 convergence or internal
consistency error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    GridMismatchError,
    SingularSystemError,
)
from .estimator import MonteCarloSummary, SolutionCache, run_montecarlo
from .fbm import RngSpec, mixed_path
from .fredholm import Grid, SolverConfig, manufactured_rhs, solve, solve_mle_h
from .kernel import HurstPair, KernelModel

EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4


def _add_common(p: argparse.ArgumentParser, *names: str):
    spec = {
        "--h1": dict(type=float, help="first Hurst index, in (1/2, 3/4] strict"),
        "--h2": dict(type=float, help="second Hurst index, in (h1, 1)"),
        "--T": dict(type=float, dest="T", help="observation horizon"),
        "--N": dict(type=int, dest="N", help="solver grid intervals"),
        "--n": dict(type=int, dest="n", help="kernel truncation level (default N)"),
        "--M": dict(type=int, dest="M", help="Monte Carlo replications"),
        "--theta": dict(type=float, help="true drift"),
        "--seed": dict(type=int, help="base RNG seed"),
        "--out": dict(type=str, help="output CSV path"),
        "--formulation": dict(choices=["direct", "tilde"], help="equation form"),
        "--workers": dict(type=int, help="parallel worker cap"),
        "--config": dict(type=str, help="JSON file with default parameter values"),
        "--no-tables": dict(
            action="store_true", dest="no_tables",
            help="evaluate hypergeometric profiles directly (no tables)",
        ),
        "--relaxed": dict(
            action="store_true",
            help="accept Hurst pairs outside the strict uniqueness regime",
        ),
    }
    for name in names:
        p.add_argument(name, default=None, **spec[name])


_DEFAULTS = {
    "T": 1.0,
    "N": 500,
    "n": None,
    "M": 1000,
    "theta": 1.0,
    "seed": 0,
    "formulation": "direct",
    "workers": 1,
    "no_tables": False,
    "relaxed": False,
    "resolution": 101,
    "points": None,
    "stream": 0,
    "zero_kernel": False,
    "cache_dir": None,
    "method": "auto",
}


def _effective(args: argparse.Namespace) -> dict:
    """Merge flags over the JSON config over the built-in defaults."""
    cfg = {}
    if getattr(args, "config", None):
        cfg = json.loads(Path(args.config).read_text())
        if not isinstance(cfg, dict):
            raise DomainError("--config file must hold a JSON object")
    merged = {}
    for key, value in vars(args).items():
        if key in ("func", "config"):
            continue
        if value is not None:
            merged[key] = value
        elif key in cfg:
            merged[key] = cfg[key]
        elif key in _DEFAULTS:
            merged[key] = _DEFAULTS[key]
        else:
            merged[key] = None
    for required in ("h1", "h2"):
        if required in merged and merged[required] is None:
            raise DomainError(f"--{required} is required (flag or config file)")
    return merged


def _pair(cfg: dict) -> HurstPair:
    mode = "relaxed" if cfg.get("relaxed") else "strict"
    return HurstPair(cfg["h1"], cfg["h2"], mode)


def _model(cfg: dict) -> KernelModel:
    return KernelModel.build(
        _pair(cfg), cfg["T"], use_tables=not cfg["no_tables"]
    )


def _sidecar(out: Path, payload: dict, cfg: dict) -> None:
    payload = dict(payload)
    payload["effective_config"] = {
        k: v for k, v in cfg.items() if not callable(v)
    }
    out.with_suffix(".json").write_text(json.dumps(payload, indent=2) + "\n")


def cmd_kernel_surface(args) -> int:
    cfg = _effective(args)
    model = _model(cfg)
    R = int(cfg["resolution"])
    if R < 2:
        raise DomainError("--resolution must be at least 2")
    T = cfg["T"]
    pts = T * np.arange(1, R + 1) / (R + 1)
    U, S = np.meshgrid(pts, pts, indexing="ij")
    keep = U.ravel() != S.ravel()
    u, s = U.ravel()[keep], S.ravel()[keep]
    L = model.L(u, s)
    K = np.power(np.abs(u - s), model.hurst.gamma - 1.0) * L
    out = Path(cfg["out"] or "kernel_surface.csv")
    lines = ["u,s,K,L"]
    for row in zip(u, s, K, L):
        lines.append(",".join(repr(float(v)) for v in row))
    out.write_text("\n".join(lines) + "\n")
    _sidecar(out, {"kind": "kernel-surface", "rows": int(keep.sum())}, cfg)
    print(f"wrote {out} ({keep.sum()} points)")
    return 0


def cmd_solve(args) -> int:
    cfg = _effective(args)
    model = _model(cfg)
    scfg = SolverConfig(
        N=cfg["N"], n=cfg["n"], formulation=cfg["formulation"],
        allow_relaxed=bool(cfg.get("relaxed")),
    )
    sol = solve_mle_h(model, scfg)
    out = Path(cfg["out"] or "solution.csv")
    sol.save(out)
    _sidecar(out, json.loads(out.with_suffix(".json").read_text()), cfg)
    print(
        f"wrote {out}: int_h={sol.int_h:.6f} "
        f"theoretical_variance={sol.theoretical_variance:.6f} "
        f"residual={sol.residual_rel:.2e}"
    )
    return 0


def cmd_validate(args) -> int:
    cfg = _effective(args)
    model = _model(cfg)
    if cfg["zero_kernel"]:
        from dataclasses import replace

        model = replace(model, consts=replace(model.consts, c=0.0))
    scfg = SolverConfig(N=cfg["N"], n=cfg["n"])
    start = time.perf_counter()
    G = manufactured_rhs(model, lambda s: s, scfg)
    sol = solve(model, scfg, rhs=G)
    elapsed = time.perf_counter() - start
    t = sol.grid.nodes
    err = sol.values - t
    interior = (t >= 0.05 * model.T) & (t <= 0.95 * model.T)
    out = Path(cfg["out"] or "validation.csv")
    lines = ["t,h_exact,h_num,abs_err,log_abs_err"]
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(err))
    for row in zip(t, t, sol.values, np.abs(err), logs):
        lines.append(",".join(repr(float(v)) for v in row))
    out.write_text("\n".join(lines) + "\n")
    summary = {
        "kind": "validate",
        "mean_abs_error": float(np.mean(np.abs(err))),
        "max_interior_error": float(np.max(np.abs(err[interior]))),
        "max_error": float(np.max(np.abs(err))),
        "elapsed_s": elapsed,
    }
    _sidecar(out, summary, cfg)
    print(
        f"manufactured h(u)=u, N={scfg.N}: mean|err|={summary['mean_abs_error']:.3e} "
        f"max interior={summary['max_interior_error']:.3e} "
        f"max={summary['max_error']:.3e}"
    )
    return 0


def cmd_simulate(args) -> int:
    cfg = _effective(args)
    pair = _pair(cfg)
    points = cfg["points"] or int(round(100 * cfg["T"])) + 1
    grid = Grid(cfg["T"], points - 1)
    path = mixed_path(
        cfg["theta"], pair, grid,
        RngSpec(cfg["seed"], cfg["stream"]), method=cfg["method"],
    )
    out = Path(cfg["out"] or "path.csv")
    path.save(out)
    _sidecar(out, json.loads(out.with_suffix(".json").read_text()), cfg)
    print(f"wrote {out} ({points} points, method={path.method})")
    return 0


def cmd_montecarlo(args) -> int:
    cfg = _effective(args)
    cache = SolutionCache(cfg["cache_dir"]) if cfg["cache_dir"] else None
    summary = run_montecarlo(
        _pair(cfg),
        T=cfg["T"],
        M=cfg["M"],
        N=cfg["N"],
        theta=cfg["theta"],
        base_seed=cfg["seed"],
        path_points=cfg["points"],
        cache=cache,
        workers=cfg["workers"],
        use_tables=not cfg["no_tables"],
    )
    out = Path(cfg["out"] or "montecarlo.csv")
    fresh = not out.exists()
    with out.open("a") as fh:
        if fresh:
            fh.write(MonteCarloSummary.CSV_HEADER + "\n")
        fh.write(summary.csv_row() + "\n")
    _sidecar(out, {"kind": "montecarlo", "last_run_elapsed_s": summary.elapsed_s}, cfg)
    print(
        f"T={summary.T} H=({summary.h1},{summary.h2}) M={summary.M}: "
        f"mean={summary.mean:.5f} emp_var={summary.emp_variance:.5f} "
        f"theo_var={summary.theo_variance:.5f}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dmfbm",
        description="Drift MLE for the double mixed fractional Brownian model",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel-surface", help="emit K and L on a mesh")
    _add_common(p, "--h1", "--h2", "--T", "--out", "--config", "--no-tables",
                "--relaxed")
    p.add_argument("--resolution", type=int, default=None,
                   help="mesh points per axis")
    p.set_defaults(func=cmd_kernel_surface)

    p = sub.add_parser("solve", help="solve the drift-weight equation")
    _add_common(p, "--h1", "--h2", "--T", "--N", "--n", "--formulation",
                "--out", "--config", "--no-tables", "--relaxed")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="manufactured-solution accuracy report")
    _add_common(p, "--h1", "--h2", "--T", "--N", "--n", "--out", "--config",
                "--no-tables", "--relaxed")
    p.add_argument("--zero-kernel", action="store_true", dest="zero_kernel",
                   default=None, help="force the coupling constant to zero")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="sample one model trajectory")
    _add_common(p, "--h1", "--h2", "--T", "--theta", "--seed", "--out",
                "--config", "--relaxed")
    p.add_argument("--points", type=int, default=None,
                   help="grid points (default 100*T + 1)")
    p.add_argument("--stream", type=int, default=None, help="RNG stream id")
    p.add_argument("--method", choices=["auto", "circulant", "cholesky"],
                   default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("montecarlo", help="estimator campaign, appends a CSV row")
    _add_common(p, "--h1", "--h2", "--T", "--N", "--n", "--M", "--theta",
                "--seed", "--out", "--workers", "--config", "--no-tables",
                "--relaxed")
    p.add_argument("--points", type=int, default=None,
                   help="observation grid points (default 100*T + 1)")
    p.add_argument("--cache-dir", type=str, dest="cache_dir", default=None,
                   help="directory for persisted weight solutions")
    p.set_defaults(func=cmd_montecarlo)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, GridMismatchError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, ConsistencyError, SingularSystemError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
