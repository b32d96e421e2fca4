"""Network-wide alternating optimization across coupled cells.

Cells are coupled only through inter-cell interference, so the network
problem decomposes: fix every other cell's transmit power, solve one cell's
(phi, P) subproblem and then its reflection coefficient, move on.  Sweeps
repeat until the network sum rate stops moving.  Gauss-Seidel sweeps (the
default) let later cells see earlier cells' fresh powers inside the same
sweep; Jacobi sweeps update everyone from the previous sweep's snapshot.

A cell whose rate floors conflict under the current interference is flagged
as an outage for that sweep: it contributes nothing to the network sum rate
but keeps transmitting at its last allocation (interference does not vanish
just because scheduling failed).  Outage cells are re-attempted every sweep
since other cells' power moves can restore feasibility.

Each cell keeps a "best so far" allocation under the current interference:
a sweep never replaces a feasible allocation with an infeasible one, nor
with a feasible one of lower sum rate.  This makes the per-sweep network
sum rate well behaved even when the interference landscape shifts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beta_solver import solve_beta
from .channel import ChannelRealization, intercell_interference
from .config import SystemConfig
from .power_dual import (DualState, InfeasibleCellError,
                         solve_power_subproblem)
from .sinr import PowerAlloc, cell_se, qos_satisfied, rate_coeffs


@dataclass
class SolveResult:
    """Outcome of one network solve.

    ``se_per_cell`` holds each cell's sum rate under the final interference
    state; outage cells contribute zero.  ``se_trace`` records the network
    sum rate after every outer sweep (length == ``outer_iters``).
    """

    allocs: list[PowerAlloc]
    feasible: np.ndarray
    se_per_cell: np.ndarray
    network_se: float
    converged: bool
    outer_iters: int
    outage_count: int
    se_trace: list[float] = field(default_factory=list)


def _refresh_interference(real: ChannelRealization, powers: np.ndarray,
                          cell: int, cfg: SystemConfig) -> None:
    real.interference_n[cell] = intercell_interference(
        real, powers, cell, "n", cfg.interference_model)
    real.interference_m[cell] = intercell_interference(
        real, powers, cell, "m", cfg.interference_model)


def _cell_se_now(real: ChannelRealization, alloc: PowerAlloc,
                 cfg: SystemConfig, cell: int) -> float:
    return cell_se(rate_coeffs(real, alloc, cfg, cell), alloc)


def _cell_feasible_now(real: ChannelRealization, alloc: PowerAlloc,
                       cfg: SystemConfig, cell: int) -> bool:
    coeffs = rate_coeffs(real, alloc, cfg, cell)
    return qos_satisfied(coeffs, alloc, cfg.r_req, cfg.p_tot).all_ok


def solve_network(real: ChannelRealization, cfg: SystemConfig,
                  with_bd: bool = True) -> SolveResult:
    """Alternating per-cell optimization of the whole network.

    ``with_bd=False`` pins every reflection coefficient at zero, which is
    the plain NOMA baseline on the same machinery (and the same candidate
    screening), so scheme comparisons are apples to apples.
    """
    n = real.num_cells
    beta0 = 0.5 if with_bd else 0.0
    allocs = [PowerAlloc(cfg.p_tot, 0.25, 0.75, beta0) for _ in range(n)]
    feas = np.zeros(n, dtype=bool)
    duals: list[DualState | None] = [None] * n
    powers = np.full(n, cfg.p_tot)

    se_trace: list[float] = []
    prev_net = -np.inf
    converged = False
    outer = 0

    for sweep in range(1, cfg.max_outer + 1):
        outer = sweep
        if cfg.sweep_mode == "jacobi":
            # freeze everyone's interference from the last sweep's powers
            for j in range(n):
                _refresh_interference(real, powers, j, cfg)

        for j in range(n):
            if cfg.sweep_mode == "gauss_seidel":
                _refresh_interference(real, powers, j, cfg)
            try:
                try:
                    cand, trace, _ = solve_power_subproblem(
                        real, allocs[j].beta, cfg, warm=allocs[j], cell=j,
                        dual0=duals[j])
                except InfeasibleCellError:
                    if not with_bd or allocs[j].beta == 1.0:
                        raise
                    # the feasible window only widens with the reflection
                    # coefficient, so full reflection is the last resort
                    cand, trace, _ = solve_power_subproblem(
                        real, 1.0, cfg, warm=allocs[j], cell=j,
                        dual0=duals[j])
                duals[j] = trace[-1]
                if with_bd:
                    beta = solve_beta(real, cand, cfg, cell=j)
                    cand = PowerAlloc(cand.p, cand.phi_n, cand.phi_m, beta)
            except InfeasibleCellError:
                feas[j] = False
                continue

            # keep-better: never trade a feasible incumbent away
            cand_ok = _cell_feasible_now(real, cand, cfg, j)
            if not cand_ok:
                feas[j] = False
                continue
            if feas[j]:
                if (_cell_se_now(real, cand, cfg, j)
                        >= _cell_se_now(real, allocs[j], cfg, j)):
                    allocs[j] = cand
            else:
                allocs[j] = cand
                feas[j] = True
            powers[j] = allocs[j].p

        # score the sweep under its final interference state
        net = 0.0
        for j in range(n):
            _refresh_interference(real, powers, j, cfg)
            if feas[j]:
                net += _cell_se_now(real, allocs[j], cfg, j)
        se_trace.append(net)

        if abs(net - prev_net) < cfg.tol_outer * max(1.0, abs(net)):
            converged = True
            break
        prev_net = net

    se_cells = np.zeros(n)
    for j in range(n):
        if feas[j]:
            se_cells[j] = _cell_se_now(real, allocs[j], cfg, j)

    return SolveResult(
        allocs=allocs,
        feasible=feas.copy(),
        se_per_cell=se_cells,
        network_se=float(se_cells.sum()),
        converged=converged,
        outer_iters=outer,
        outage_count=int(n - feas.sum()),
        se_trace=se_trace,
    )


def noma_nb_baseline(real: ChannelRealization,
                     cfg: SystemConfig) -> SolveResult:
    """Plain NOMA without the backscatter link (reflection pinned at zero)."""
    return solve_network(real, cfg, with_bd=False)
