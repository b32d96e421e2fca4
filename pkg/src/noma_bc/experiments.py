"""Scenario sweeps and their CSV artifacts.

Three canned studies, each writing one CSV plus a ``config_echo.json``:

* ``convergence`` — per-sweep network sum-rate traces at the configured
  operating point, both schemes, one row per (trial, iteration, scheme).
* ``alpha`` — residual-SIC sweep over a fixed grid, networks of 2 and 5
  cells, both schemes.
* ``power`` — budget sweep in dBm at two rate floors, 2-cell networks,
  both schemes.

Common random numbers: the realization for trial ``k`` depends only on
``(rng_seed, num_cells, k)``, so every sweep value and both schemes see
identical channels and differences between rows are pure treatment
effects.  All artifacts are byte-deterministic for a given config.
"""

from __future__ import annotations

import csv
import json
from dataclasses import replace
from pathlib import Path

import numpy as np

from .channel import ChannelRealization, generate_topology, sample_channels
from .config import SystemConfig
from .optimizer import SolveResult, noma_nb_baseline, solve_network

SCENARIOS = ("convergence", "alpha", "power")
SCHEMES = ("bc", "nb")           # backscatter-assisted / plain-NOMA baseline
ALPHA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 11))
ALPHA_CELLS = (2, 5)
POWER_GRID_DBM = (10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
POWER_R_GRID = (0.5, 1.0)
POWER_CELLS = 2


def realization_for_trial(cfg: SystemConfig, trial: int) -> ChannelRealization:
    """Draw the trial's topology and fading from its dedicated stream."""
    rng = np.random.default_rng([cfg.rng_seed, cfg.num_cells, trial])
    topo = generate_topology(cfg, rng)
    return sample_channels(topo, cfg, rng)


def _solve(real: ChannelRealization, cfg: SystemConfig,
           scheme: str) -> SolveResult:
    if scheme == "bc":
        return solve_network(real.copy(), cfg)
    return noma_nb_baseline(real.copy(), cfg)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _write_rows(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_echo(out_dir: Path, scenario: str, cfg: SystemConfig,
                trials: int, sweep: dict) -> None:
    echo = {
        "scenario": scenario,
        "trials": trials,
        "schemes": list(SCHEMES),
        "sweep": sweep,
        "config": cfg.to_dict(),
    }
    with open(out_dir / "config_echo.json", "w") as fh:
        json.dump(echo, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_convergence(cfg: SystemConfig, trials: int, out_dir: Path) -> Path:
    """Per-iteration sum-rate traces; traces shorter than the longest one
    are padded by repeating their final value so per-iteration averages
    across trials are well defined."""
    results: dict[tuple[int, str], SolveResult] = {}
    max_len = 1
    for trial in range(trials):
        real = realization_for_trial(cfg, trial)
        for scheme in SCHEMES:
            res = _solve(real, cfg, scheme)
            results[(trial, scheme)] = res
            max_len = max(max_len, len(res.se_trace))

    rows = []
    for trial in range(trials):
        for it in range(1, max_len + 1):
            for scheme in SCHEMES:
                res = results[(trial, scheme)]
                trace = res.se_trace
                se = trace[min(it, len(trace)) - 1]
                rows.append(["convergence", trial, it, scheme, _fmt(se),
                             int(res.converged), res.outer_iters,
                             res.outage_count])

    path = out_dir / "convergence.csv"
    _write_rows(path, ["scenario", "trial_seed", "iteration", "scheme", "se",
                       "converged", "outer_iters", "outage"], rows)
    _write_echo(out_dir, "convergence", cfg, trials,
                {"iterations": max_len})
    return path


def run_alpha(cfg: SystemConfig, trials: int, out_dir: Path) -> Path:
    """Residual-SIC sweep at 2- and 5-cell network sizes, both schemes."""
    rows = []
    for trial in range(trials):
        reals = {}
        for j in ALPHA_CELLS:
            cfg_j = replace(cfg, num_cells=j)
            reals[j] = realization_for_trial(cfg_j, trial)
        for alpha in ALPHA_GRID:
            for j in ALPHA_CELLS:
                cfg_pt = replace(cfg, num_cells=j, sic_error=alpha)
                for scheme in SCHEMES:
                    res = _solve(reals[j], cfg_pt, scheme)
                    rows.append(["alpha", trial, _fmt(alpha), j, scheme,
                                 _fmt(res.network_se), int(res.converged),
                                 res.outer_iters, res.outage_count])

    path = out_dir / "alpha.csv"
    _write_rows(path, ["scenario", "trial_seed", "alpha", "j_cells", "scheme",
                       "se", "converged", "outer_iters", "outage"], rows)
    _write_echo(out_dir, "alpha", cfg, trials,
                {"alpha": list(ALPHA_GRID), "j_cells": list(ALPHA_CELLS)})
    return path


def run_power(cfg: SystemConfig, trials: int, out_dir: Path) -> Path:
    """Budget sweep (dBm) at two rate floors on 2-cell networks."""
    cfg2 = replace(cfg, num_cells=POWER_CELLS)
    rows = []
    for trial in range(trials):
        real = realization_for_trial(cfg2, trial)
        for dbm in POWER_GRID_DBM:
            for r_req in POWER_R_GRID:
                cfg_pt = replace(cfg2, p_tot_dbm=dbm, r_req=r_req)
                for scheme in SCHEMES:
                    res = _solve(real, cfg_pt, scheme)
                    rows.append(["power", trial, _fmt(dbm), _fmt(r_req),
                                 scheme, _fmt(res.network_se),
                                 int(res.converged), res.outer_iters,
                                 res.outage_count])

    path = out_dir / "power.csv"
    _write_rows(path, ["scenario", "trial_seed", "p_tot_dbm", "r_req",
                       "scheme", "se", "converged", "outer_iters", "outage"],
                rows)
    _write_echo(out_dir, "power", cfg2, trials,
                {"p_tot_dbm": list(POWER_GRID_DBM),
                 "r_req": list(POWER_R_GRID)})
    return path


_RUNNERS = {
    "convergence": run_convergence,
    "alpha": run_alpha,
    "power": run_power,
}


def run_scenario(name: str, cfg: SystemConfig, trials: int,
                 out_dir: str | Path) -> Path:
    """Run one named scenario, creating ``out_dir`` if needed."""
    if name not in _RUNNERS:
        raise ValueError(f"unknown scenario {name!r}; pick from {SCENARIOS}")
    if trials < 1:
        raise ValueError("trials must be positive")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _RUNNERS[name](cfg, trials, out)
