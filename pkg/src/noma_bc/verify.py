"""Independent verification suites.

Three bundles of checks, each pitting a closed form against a derivation-free
counterpart:

* ``oracle``   — the full per-cell solver against an exhaustive grid scan,
* ``calculus`` — analytic Hessians/derivatives against finite differences and
  the polynomial solver against sign-change bisection,
* ``trends``   — directional behavior of freshly-run sweep artifacts.

The routines compute and return :class:`CheckResult` records; callers (the
CLI ``verify`` subcommand and the acceptance tests) decide how to print and
at what scale to run.  Comparisons use a relative tolerance with an absolute
floor: ``|a - b| <= max(rel * max(|a|, |b|), floor)``.
"""

from __future__ import annotations

import csv
import hashlib
import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import mpmath as mp
import numpy as np

from .beta_solver import d2se_dbeta2, dse_dbeta
from .channel import generate_topology, sample_channels
from .config import SystemConfig
from .experiments import (ALPHA_CELLS, ALPHA_GRID, POWER_GRID_DBM,
                          POWER_R_GRID, SCHEMES, run_scenario)
from .optimizer import solve_network
from .oracle import (bisection_roots, fd_derivative, fd_hessian2,
                     fd_second_derivative, grid_search)
from .polyroots import real_roots
from .sinr import (BetaCoeffs, PowerAlloc, RateCoeffs, cell_se,
                   qos_satisfied, rate_coeffs, se_at_beta, se_hessian_phi)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: {self.detail}"


# ---------------------------------------------------------------------------
# oracle suite: solver vs exhaustive grid


def check_solver_vs_grid(n_instances: int = 200, seed: int = 7,
                         use_numba: bool = True) -> CheckResult:
    """Single-cell instances across the SIC-residual range; the solver must
    never fall below the grid's best minus its granularity allowance."""
    alphas = (0.0, 0.5, 1.0)
    t0 = time.perf_counter()
    violations = 0
    worst = math.inf
    skipped = 0
    for k in range(n_instances):
        cfg = SystemConfig(num_cells=1, sic_error=alphas[k % 3], rng_seed=seed)
        rng = np.random.default_rng([seed, 1, k])
        topo = generate_topology(cfg, rng)
        real = sample_channels(topo, cfg, rng)
        res = solve_network(real.copy(), cfg)
        g = grid_search(real, cfg, use_numba=use_numba)
        if not g.found:
            skipped += 1
            continue
        margin = res.network_se - (g.se - g.bound)
        worst = min(worst, margin)
        if margin < 0.0:
            violations += 1
    dt = time.perf_counter() - t0
    return CheckResult(
        "solver_vs_grid", violations == 0,
        f"{violations} violations / {n_instances} instances "
        f"(grid infeasible on {skipped}), worst margin {worst:+.3e}, "
        f"{dt:.1f}s")


# ---------------------------------------------------------------------------
# calculus suite: closed forms vs finite differences, roots vs bisection


def _random_rate_point(rng: np.random.Generator):
    """Physically coupled link constants (power absorbed) plus a fraction
    pair, spanning the gain/power ranges the solver actually sees."""
    g_n = 10.0 ** rng.uniform(-3.0, 0.0)
    g_m = g_n * 10.0 ** rng.uniform(-2.0, 0.0)
    theta_n = g_n * 10.0 ** rng.uniform(-3.0, -0.3)
    theta_m = g_m * 10.0 ** rng.uniform(-3.0, -0.3)
    alpha = rng.uniform(0.0, 1.0)
    p = 10.0 ** rng.uniform(1.0, 3.0)
    q_n = 10.0 ** rng.uniform(-1.0, 0.5)
    q_m = 10.0 ** rng.uniform(-1.0, 0.5)
    coeffs = RateCoeffs(
        f_n=p * (g_n + theta_n), h_n=p * alpha * g_n, q_n=q_n,
        f_m=p * (g_m + theta_m), h_m=p * (g_m + theta_m), q_m=q_m,
        theta_n=p * theta_n, theta_m=p * theta_m)
    phi_n = rng.uniform(0.05, 0.45)
    phi_m = rng.uniform(phi_n, 1.0 - phi_n)
    return coeffs, phi_n, phi_m


def _tol_ratio(a: float, b: float, rel: float = 1e-5,
               floor: float = 1e-8) -> float:
    """Ratio of the disagreement to its allowance; <= 1 passes."""
    return abs(a - b) / max(rel * max(abs(a), abs(b)), floor)


def check_hessian_fd(n_points: int = 10_000, seed: int = 11) -> CheckResult:
    """Closed-form fraction Hessian vs central finite differences.

    The stencils are evaluated in 40-digit arithmetic so the oracle's own
    roundoff stays far below the comparison tolerance even where the rate
    curvature is extreme; the closed form under test runs in plain floats.
    """
    rng = np.random.default_rng(seed)
    bad = 0
    worst = 0.0
    with mp.workdps(40):
        ln2 = mp.log(2)
        for _ in range(n_points):
            coeffs, x, y = _random_rate_point(rng)
            fn, hn, qn = mp.mpf(coeffs.f_n), mp.mpf(coeffs.h_n), mp.mpf(coeffs.q_n)
            fm, hm, qm = mp.mpf(coeffs.f_m), mp.mpf(coeffs.h_m), mp.mpf(coeffs.q_m)

            def f(a, b):
                psi_n = fn * a + hn * b + qn
                xi_n = hn * b + qn
                psi_m = fm * b + hm * a + qm
                xi_m = hm * a + qm
                return (mp.log(psi_n / xi_n) + mp.log(psi_m / xi_m)) / ln2

            exact = se_hessian_phi(coeffs, x, y)
            fd = fd_hessian2(f, mp.mpf(x), mp.mpf(y), 1e-6)
            ok = True
            for i in range(2):
                for j in range(2):
                    ratio = _tol_ratio(exact[i][j], float(fd[i][j]))
                    worst = max(worst, ratio)
                    if ratio > 1.0:
                        ok = False
            if not ok:
                bad += 1
    return CheckResult(
        "hessian_vs_fd", bad == 0,
        f"{bad} mismatches / {n_points} points, "
        f"worst tolerance ratio {worst:.3g}")


def _random_beta_point(rng: np.random.Generator):
    """Reflection-geometry constants from physical couplings (the weak
    user's cross term t_m*v_m - e_m*eta_m stays nonnegative by shared
    backscatter path), plus an interior reflection value."""
    g_n = 10.0 ** rng.uniform(-3.0, 0.0)
    g_m = g_n * 10.0 ** rng.uniform(-2.0, 0.0)
    bsc_n = g_n * 10.0 ** rng.uniform(-3.0, -0.3)
    bsc_m = g_m * 10.0 ** rng.uniform(-3.0, -0.3)
    alpha = rng.uniform(0.0, 1.0)
    p = 10.0 ** rng.uniform(1.0, 3.0)
    phi_n = rng.uniform(0.05, 0.5)
    u, v = p * phi_n, p * (1.0 - phi_n)
    q_n = 10.0 ** rng.uniform(-1.0, 0.5)
    q_m = 10.0 ** rng.uniform(-1.0, 0.5)
    bc = BetaCoeffs(
        e_n=u * g_n, t_n=u * bsc_n, v_n=v * alpha * g_n + q_n,
        e_m=v * g_m, t_m=v * bsc_m, v_m=u * g_m + q_m, eta_m=u * bsc_m)
    return bc, rng.uniform(0.05, 0.95)


def check_beta_derivatives(n_points: int = 10_000,
                           seed: int = 17) -> CheckResult:
    """First/second reflection derivatives vs finite differences, and the
    concavity sign of the closed-form second derivative."""
    rng = np.random.default_rng(seed)
    bad = 0
    nonconcave = 0
    worst = 0.0
    with mp.workdps(40):
        ln2 = mp.log(2)
        for _ in range(n_points):
            bc, beta = _random_beta_point(rng)
            en, tn, vn = mp.mpf(bc.e_n), mp.mpf(bc.t_n), mp.mpf(bc.v_n)
            em, tm, vm = mp.mpf(bc.e_m), mp.mpf(bc.t_m), mp.mpf(bc.v_m)
            eta = mp.mpf(bc.eta_m)

            def f(b):
                g_n = (en + b * tn) / vn
                g_m = (em + b * tm) / (vm + b * eta)
                return (mp.log(1 + g_n) + mp.log(1 + g_m)) / ln2

            d1 = dse_dbeta(bc, beta)
            d2 = d2se_dbeta2(bc, beta)
            fd1 = float(fd_derivative(f, mp.mpf(beta), 1e-6))
            fd2 = float(fd_second_derivative(f, mp.mpf(beta), 1e-6))
            ratio = max(_tol_ratio(d1, fd1), _tol_ratio(d2, fd2))
            worst = max(worst, ratio)
            if ratio > 1.0:
                bad += 1
            if d2 > 0.0:
                nonconcave += 1
    return CheckResult(
        "beta_derivatives_vs_fd", bad == 0 and nonconcave == 0,
        f"{bad} mismatches / {n_points} points, "
        f"{nonconcave} positive second derivatives, "
        f"worst tolerance ratio {worst:.3g}")


def check_poly_roots(n_polys: int = 10_000, seed: int = 13) -> CheckResult:
    """Closed-form roots vs derivative-subdivision bisection on random
    polynomials, plus an independent scaled-residual audit of every root."""
    rng = np.random.default_rng(seed)
    missed = 0
    resid_bad = 0
    worst_match = 0.0
    for k in range(n_polys):
        deg = 2 + k % 3
        coeffs = rng.uniform(-1e3, 1e3, size=deg + 1)
        got = real_roots(coeffs)
        want = bisection_roots(coeffs)
        for r in want:
            err = min((abs(r - g) for g in got), default=math.inf)
            scaled = err / max(1.0, abs(r))
            worst_match = max(worst_match, min(scaled, 1.0))
            if scaled > 1e-7:
                missed += 1
        for g in got:
            # recompute the residual here rather than trusting the solver
            val = 0.0
            scale = 1.0
            for c in reversed(coeffs):
                val = val * g + c
            for i, c in enumerate(coeffs):
                scale = max(scale, abs(c * g ** i))
            if abs(val) > 1e-8 * scale:
                resid_bad += 1
    return CheckResult(
        "roots_vs_bisection", missed == 0 and resid_bad == 0,
        f"{missed} unmatched oracle roots and {resid_bad} residual failures "
        f"/ {n_polys} polynomials, worst match err {worst_match:.2e}")


# ---------------------------------------------------------------------------
# trends suite: directional behavior of the sweep artifacts


def _read_rows(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _group_mean(rows: list[dict], keys: tuple[str, ...],
                value: str = "se") -> dict[tuple, float]:
    sums: dict[tuple, list[float]] = {}
    for row in rows:
        k = tuple(row[c] for c in keys)
        sums.setdefault(k, []).append(float(row[value]))
    return {k: sum(v) / len(v) for k, v in sums.items()}


def check_trends(alpha_csv: Path, power_csv: Path) -> list[CheckResult]:
    """Mean-level monotonicity across the sweep grids, every consecutive
    pair, per scheme / network size / rate floor."""
    out = []

    means = _group_mean(_read_rows(alpha_csv), ("scheme", "j_cells", "alpha"))
    ok = True
    worst = math.inf
    for scheme in SCHEMES:
        for j in ALPHA_CELLS:
            series = [means[(scheme, str(j), format(a, ".12g"))]
                      for a in ALPHA_GRID]
            for lo, hi in zip(series[1:], series[:-1]):
                worst = min(worst, hi - lo)
                if not lo < hi:
                    ok = False
    out.append(CheckResult(
        "alpha_mean_se_strictly_decreasing", ok,
        f"min consecutive drop {worst:.4g} over "
        f"{len(SCHEMES) * len(ALPHA_CELLS)} series"))

    means = _group_mean(_read_rows(power_csv), ("scheme", "r_req", "p_tot_dbm"))
    ok = True
    worst = math.inf
    for scheme in SCHEMES:
        for r in POWER_R_GRID:
            series = [means[(scheme, format(r, ".12g"), format(d, ".12g"))]
                      for d in POWER_GRID_DBM]
            for lo, hi in zip(series[:-1], series[1:]):
                worst = min(worst, hi - lo)
                if hi < lo - 1e-12:
                    ok = False
    out.append(CheckResult(
        "power_mean_se_nondecreasing", ok,
        f"min consecutive rise {worst:.4g} over {len(SCHEMES) * 2} series"))

    ok = True
    worst = math.inf
    for scheme in SCHEMES:
        for d in POWER_GRID_DBM:
            lo_r = means[(scheme, format(POWER_R_GRID[0], ".12g"),
                          format(d, ".12g"))]
            hi_r = means[(scheme, format(POWER_R_GRID[1], ".12g"),
                          format(d, ".12g"))]
            worst = min(worst, lo_r - hi_r)
            if hi_r > lo_r + 1e-12:
                ok = False
    out.append(CheckResult(
        "power_mean_se_tighter_floor_not_above", ok,
        f"min gap {worst:.4g} across {len(SCHEMES) * len(POWER_GRID_DBM)} "
        f"budget points"))
    return out


def check_dominance(csv_paths: list[Path]) -> CheckResult:
    """Paired per-realization comparison: the backscatter scheme must never
    lose to the baseline on the same channels and sweep point."""
    viol = 0
    pairs = 0
    worst = math.inf
    for path in csv_paths:
        rows = _read_rows(path)
        keyed: dict[tuple, dict[str, float]] = {}
        ignore = {"scheme", "se", "converged", "outer_iters", "outage"}
        for row in rows:
            k = tuple(v for c, v in row.items() if c not in ignore)
            keyed.setdefault(k, {})[row["scheme"]] = float(row["se"])
        for k, both in keyed.items():
            if len(both) != 2:
                continue
            pairs += 1
            gap = both["bc"] - both["nb"]
            worst = min(worst, gap)
            if gap < -1e-9:
                viol += 1
    return CheckResult(
        "bc_never_below_nb", viol == 0,
        f"{viol} violations / {pairs} paired points, worst gap {worst:+.3e}")


def check_convergence_stats(convergence_csv: Path,
                            min_rate: float = 0.95) -> CheckResult:
    """Share of non-blackout runs that converged, plus the median sweep
    count (reported, not gated)."""
    rows = _read_rows(convergence_csv)
    per_run: dict[tuple, dict] = {}
    for row in rows:
        per_run[(row["trial_seed"], row["scheme"])] = row
    total = 0
    converged = 0
    iters = []
    for row in per_run.values():
        # total blackout (every cell in outage) shows up as zero sum rate;
        # those runs have nothing to converge on and are excluded
        if float(row["se"]) == 0.0 and int(row["outage"]) > 0:
            continue
        total += 1
        converged += int(row["converged"])
        iters.append(int(row["outer_iters"]))
    rate = converged / total if total else 0.0
    med = float(np.median(iters)) if iters else float("nan")
    return CheckResult(
        "convergence_rate", rate >= min_rate,
        f"{converged}/{total} non-blackout runs converged ({rate:.1%}), "
        f"median outer sweeps {med:g}")


def check_determinism(cfg: SystemConfig, trials: int = 50) -> CheckResult:
    """Byte-identical artifacts across two independent runs of every
    scenario at the same config."""
    mismatched = []
    with tempfile.TemporaryDirectory() as tmp:
        for scenario in ("convergence", "alpha", "power"):
            a = run_scenario(scenario, cfg, trials, Path(tmp) / "a")
            b = run_scenario(scenario, cfg, trials, Path(tmp) / "b")
            ha = hashlib.sha256(a.read_bytes()).hexdigest()
            hb = hashlib.sha256(b.read_bytes()).hexdigest()
            if ha != hb:
                mismatched.append(scenario)
    return CheckResult(
        "artifact_determinism", not mismatched,
        "sha256 equal for all scenarios" if not mismatched
        else f"sha256 mismatch in: {', '.join(mismatched)}")


def check_qos_flags(cfg: SystemConfig, trials: int = 500,
                    rel_tol: float = 1e-6) -> CheckResult:
    """Every cell the network solver flags feasible must satisfy all six
    constraints under the final interference state."""
    from .experiments import realization_for_trial

    bad = 0
    cells = 0
    for trial in range(trials):
        real = realization_for_trial(cfg, trial)
        res = solve_network(real, cfg)
        for j in range(real.num_cells):
            if not res.feasible[j]:
                continue
            cells += 1
            coeffs = rate_coeffs(real, res.allocs[j], cfg, j)
            report = qos_satisfied(coeffs, res.allocs[j], cfg.r_req,
                                   cfg.p_tot, rel_tol=rel_tol)
            if not report.all_ok:
                bad += 1
    return CheckResult(
        "qos_flags_consistent", bad == 0,
        f"{bad} violations / {cells} feasible-flagged cells "
        f"over {trials} trials")


# ---------------------------------------------------------------------------
# named suites for the CLI


def run_suite(name: str, quick: bool = False) -> list[CheckResult]:
    """Run one named suite; ``quick`` shrinks the sample counts for smoke
    use (the acceptance tests always run full scale)."""
    if name == "oracle":
        return [check_solver_vs_grid(20 if quick else 200)]
    if name == "calculus":
        n = 500 if quick else 10_000
        return [check_hessian_fd(n), check_beta_derivatives(n),
                check_poly_roots(n)]
    if name == "trends":
        cfg = SystemConfig()
        trials = 20 if quick else 60
        with tempfile.TemporaryDirectory() as tmp:
            alpha_csv = run_scenario("alpha", cfg, trials, tmp)
            power_csv = run_scenario("power", cfg, trials, tmp)
            return check_trends(alpha_csv, power_csv)
    raise ValueError(f"unknown suite {name!r}; pick from oracle, calculus, "
                     f"trends")
