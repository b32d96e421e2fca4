"""Per-cell (phi, P) subproblem: dual decomposition with closed-form
candidate enumeration.

The cell maximizes its pair sum rate subject to both users' rate floors, the
power budget and the NOMA power-ordering constraints.  The two rate floors
and the two box constraints enter a Lagrangian with multipliers updated by a
diminishing-step projected subgradient ascent; at each dual iterate the
primal candidates come from

* a quadratic in the strong user's power fraction (the weak user's SINR is
  frozen at the previous iterate to linearize the coupling), plus the split
  boundary 0.5 and the point where the strong user's floor is tight, and
* a quartic in the transmit power for each candidate fraction, plus the
  budget boundary.

Candidate screening is by exact Lagrangian value with feasibility priority.
Because the frozen-SINR quadratic is only a local model, a stationarity
check guards every accepted candidate; when the projected gradient is too
large the subproblem falls back to direct one-dimensional maximization
(derivative-sign bisection in phi, golden section in P).  The final answer
is polished by maximizing the plain sum rate at full power over the exact
feasible fraction window, which reduces to another quadratic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelRealization
from .config import SystemConfig
from .polyroots import quadratic_roots, real_roots
from .sinr import PowerAlloc, RateCoeffs, cell_se, rate_coeffs, sinr_m

LN2 = math.log(2.0)


class InfeasibleCellError(ValueError):
    """Both rate floors cannot hold simultaneously anywhere in the box."""


@dataclass(slots=True)
class DualState:
    """Multipliers for (strong floor, weak floor, power budget, split budget)."""

    lambda_n: float = 0.01
    lambda_m: float = 0.01
    pi_1: float = 0.01
    pi_2: float = 0.01
    t: int = 0


def dual_update(dual: DualState, slacks, xi: float) -> DualState:
    """Projected subgradient step: v <- max(0, v - xi * slack).

    A positive slack relaxes its multiplier toward zero; a violated
    constraint (negative slack) grows it.
    """
    s1, s2, s_p, s_phi = slacks
    return DualState(
        lambda_n=max(0.0, dual.lambda_n - xi * s1),
        lambda_m=max(0.0, dual.lambda_m - xi * s2),
        pi_1=max(0.0, dual.pi_1 - xi * s_p),
        pi_2=max(0.0, dual.pi_2 - xi * s_phi),
        t=dual.t + 1,
    )


def rate_threshold(r_req: float) -> float:
    return 2.0 ** r_req - 1.0


def constraint_slacks(coeffs: RateCoeffs, alloc: PowerAlloc, cfg: SystemConfig):
    """Linearized slacks of the four dualized constraints (positive = loose)."""
    r = rate_threshold(cfg.r_req)
    u = alloc.p * alloc.phi_n
    v = alloc.p * alloc.phi_m
    s1 = u * coeffs.f_n - r * (v * coeffs.h_n + coeffs.q_n)
    s2 = v * coeffs.f_m - r * (u * coeffs.h_m + coeffs.q_m)
    return (s1, s2, cfg.p_tot - alloc.p, 1.0 - alloc.phi_n - alloc.phi_m)


def lagrangian_value(coeffs: RateCoeffs, alloc: PowerAlloc, dual: DualState,
                     cfg: SystemConfig) -> float:
    """Sum rate plus multiplier-weighted slacks of the dualized constraints."""
    r = rate_threshold(cfg.r_req)
    u = alloc.p * alloc.phi_n
    v = alloc.p * alloc.phi_m
    g_n = u * coeffs.f_n / (v * coeffs.h_n + coeffs.q_n)
    g_m = v * coeffs.f_m / (u * coeffs.h_m + coeffs.q_m)
    se = math.log2(1.0 + g_n) + math.log2(1.0 + g_m)
    s1 = u * coeffs.f_n - r * (v * coeffs.h_n + coeffs.q_n)
    s2 = v * coeffs.f_m - r * (u * coeffs.h_m + coeffs.q_m)
    return (se + dual.lambda_n * s1 + dual.lambda_m * s2
            + dual.pi_1 * (cfg.p_tot - alloc.p)
            + dual.pi_2 * (1.0 - alloc.phi_n - alloc.phi_m))


def phi_window(coeffs: RateCoeffs, p: float, r: float) -> tuple[float, float]:
    """Exact feasible range of the strong user's fraction at power ``p``.

    Lower edge: strong floor tight.  Upper edge: min(0.5, weak floor tight).
    An empty window (lo > hi) means the floors conflict at this power.
    """
    den_lo = p * (coeffs.f_n + r * coeffs.h_n)
    if den_lo <= 0.0:
        return (1.0, 0.0)
    lo = r * (p * coeffs.h_n + coeffs.q_n) / den_lo
    den_hi = p * (coeffs.f_m + r * coeffs.h_m)
    if den_hi <= 0.0:
        return (1.0, 0.0)
    hi = (p * coeffs.f_m - r * coeffs.q_m) / den_hi
    return (lo, min(0.5, hi))


# ---------------------------------------------------------------------------
# closed-form candidate generators


def phi_quadratic(coeffs: RateCoeffs, p: float, dual: DualState,
                  cfg: SystemConfig, gamma_m_prev: float):
    """Quadratic coefficients (c2, c1, c0) for the fraction subproblem.

    The default "reduced" form eliminates the weak user's fraction via the
    full-split identity and freezes the weak user's SINR at the previous
    iterate; the "direct" form carries the explicit power factors instead.
    Both come from the first-order condition of the dualized objective.
    """
    f_n, h_n, q_n = coeffs.f_n, coeffs.h_n, coeffs.q_n
    f_m, h_m, q_m = coeffs.f_m, coeffs.h_m, coeffs.q_m
    l_n, l_m = dual.lambda_n, dual.lambda_m
    r = rate_threshold(cfg.r_req)

    if cfg.phi_quadratic_form == "reduced":
        e_p = f_n - h_n
        t_p = h_m - f_m
        eta_n = h_n + q_n
        eta_m = f_m + q_m
        ups = p - l_n * f_n + l_m * r * h_m + dual.pi_2
        c2 = -LN2 * ups * e_p * t_p
        c1 = (f_n * t_p - gamma_m_prev * h_m * e_p
              - LN2 * ups * (e_p * eta_m + t_p * eta_n))
        c0 = (f_n * eta_m - gamma_m_prev * h_m * eta_n
              - LN2 * ups * eta_n * eta_m)
        return (c2, c1, c0)

    qn_p = q_n + h_n * p
    qm_p = q_m + h_m * p
    c2 = p * p * (-f_n * f_m * h_m * (1.0 + l_n) * qn_p
                  + f_n * h_m * h_m * (1.0 + l_n) * qn_p
                  + f_n * f_m * h_n * (1.0 + l_m) * qm_p
                  - f_m * h_n * h_n * (1.0 + l_m) * qm_p)
    c1 = p * qn_p * (-f_n * q_m * (-2.0 * h_m * (1.0 + l_n) + f_m * (2.0 + l_m))
                     + f_n * f_m * h_m * (l_n - l_m) * p
                     + 2.0 * f_m * h_n * (1.0 + l_m) * qm_p)
    c0 = qn_p * (f_n * q_m * q_m * (1.0 + l_n)
                 + f_m * (-q_n * (1.0 + l_m) * qm_p
                          + p * (f_n * q_m * (1.0 + l_n)
                                 - h_n * (1.0 + l_n) * qm_p)))
    return (c2, c1, c0)


def phi_candidates(coeffs: RateCoeffs, p: float, dual: DualState,
                   cfg: SystemConfig, gamma_m_prev: float) -> list[float]:
    """Candidate power fractions in (0, 0.5]: quadratic roots, the split
    boundary, and the fraction where the strong user's floor is tight."""
    c2, c1, c0 = phi_quadratic(coeffs, p, dual, cfg, gamma_m_prev)
    cands: list[float] = []
    scale = max(abs(c2), abs(c1), abs(c0))
    if scale > 0.0:
        for root in quadratic_roots(c2, c1, c0):
            if 1e-12 < root <= 0.5 + 1e-12:
                cands.append(min(root, 0.5))
    cands.append(0.5)
    r = rate_threshold(cfg.r_req)
    den = p * (coeffs.f_n + r * coeffs.h_n)
    if den > 0.0:
        phi_tight = r * (p * coeffs.h_n + coeffs.q_n) / den
        if 1e-12 < phi_tight <= 0.5 + 1e-12:
            cands.append(min(phi_tight, 0.5))
    cands.sort()
    out: list[float] = []
    for c in cands:
        if not out or c - out[-1] > 1e-12:
            out.append(c)
    return out


def power_quartic(coeffs: RateCoeffs, phi_n: float, dual: DualState,
                  cfg: SystemConfig) -> list[float]:
    """Ascending coefficients (c0..c4) of the power stationarity quartic at a
    fixed fraction split (weak fraction = 1 - phi_n)."""
    f_n, h_n, q_n = coeffs.f_n, coeffs.h_n, coeffs.q_n
    f_m, h_m, q_m = coeffs.f_m, coeffs.h_m, coeffs.q_m
    l_n, l_m, pi1 = dual.lambda_n, dual.lambda_m, dual.pi_1
    ph = phi_n
    m1 = ph - 1.0  # (-1 + phi_n)

    c0 = (q_n * q_m * (-f_m * q_n * m1) * (1.0 + l_m)
          + q_m * (f_n * ph * (1.0 + l_n) - q_n * pi1))
    c1 = q_n * q_m * (2.0 * (h_n * q_m * m1 - h_m * q_n * ph) * pi1
                      + f_m * m1 * (2.0 * h_n * m1 * (1.0 + l_m)
                                    - f_n * ph * (2.0 + l_n + l_m)
                                    + q_n * pi1)
                      + f_n * ph * (2.0 * h_m * ph * (1.0 + l_n) - q_m * pi1))
    c2 = (-(h_n * h_n * q_m * q_m * m1 * m1
            - 4.0 * h_n * h_m * q_n * q_m * m1 * ph
            + h_m * h_m * q_n * q_n * ph * ph) * pi1
          + f_n * ph * (h_m * h_m * q_n * ph * ph * (1.0 + l_n)
                        + h_n * q_m * q_m * m1 * pi1
                        - 2.0 * h_m * q_n * q_m * ph * pi1)
          - f_m * m1 * (h_n * h_n * q_m * m1 * m1 * (1.0 + l_m)
                        - h_n * q_m * m1 * (f_n * ph * (1.0 + l_m)
                                            - 2.0 * q_n * pi1)
                        - q_n * ph * (h_m * q_n * pi1
                                      + f_n * (-h_m * ph * (1.0 + l_n)
                                               + q_m * pi1))))
    c3 = (h_m * ph * (-2.0 * h_n * h_n * q_m * m1 * m1
                      + 2.0 * h_n * (h_m * q_n + f_n * q_m) * m1 * ph
                      - f_n * h_m * q_n * ph * ph)
          + f_m * m1 * (h_n * h_n * q_m * m1 * m1
                        - h_n * (2.0 * h_m * q_n + f_n * q_m) * m1 * ph
                        + f_n * h_m * q_n * ph * ph)) * pi1
    c4 = (-h_n * h_m * m1 * ph * (h_n * m1 - f_n * ph)
          * (f_m - f_m * ph + h_m * ph) * pi1)
    return [c0, c1, c2, c3, c4]


def roots_in_budget(poly: list[float], p_tot: float) -> list[float]:
    """Real roots of an ascending-coefficient polynomial clipped to the open
    power interval (0, p_tot], with the budget edge always appended."""
    cands: list[float] = []
    if max(abs(c) for c in poly) > 0.0:
        for root in real_roots(poly):
            if 1e-12 * p_tot < root <= p_tot * (1.0 + 1e-12):
                cands.append(min(root, p_tot))
    cands.append(p_tot)
    cands.sort()
    out: list[float] = []
    for c in cands:
        if not out or c - out[-1] > 1e-12 * p_tot:
            out.append(c)
    return out


def power_candidates(coeffs: RateCoeffs, phi_n: float, dual: DualState,
                     cfg: SystemConfig) -> list[float]:
    """Candidate powers in (0, p_tot]: quartic roots plus the budget edge."""
    return roots_in_budget(power_quartic(coeffs, phi_n, dual, cfg), cfg.p_tot)


# ---------------------------------------------------------------------------
# analytic partials (used for stationarity checks and the 1-D fallbacks)


def dl_dphi(coeffs: RateCoeffs, alloc: PowerAlloc, dual: DualState,
            cfg: SystemConfig) -> float:
    """Exact derivative of the Lagrangian in phi_n along phi_m = 1 - phi_n."""
    r = rate_threshold(cfg.r_req)
    p = alloc.p
    ph = alloc.phi_n
    om = 1.0 - ph
    f_n, h_n, q_n = coeffs.f_n, coeffs.h_n, coeffs.q_n
    f_m, h_m, q_m = coeffs.f_m, coeffs.h_m, coeffs.q_m
    nn = p * (ph * f_n + om * h_n) + q_n
    dn = p * om * h_n + q_n
    nm = p * (om * f_m + ph * h_m) + q_m
    dm = p * ph * h_m + q_m
    d_se = (p / LN2) * ((f_n - h_n) / nn + h_n / dn
                        + (h_m - f_m) / nm - h_m / dm)
    d_mult = (dual.lambda_n * p * (f_n + r * h_n)
              - dual.lambda_m * p * (f_m + r * h_m))
    return d_se + d_mult


def dl_dp(coeffs: RateCoeffs, alloc: PowerAlloc, dual: DualState,
          cfg: SystemConfig) -> float:
    """Exact derivative of the Lagrangian in the transmit power."""
    r = rate_threshold(cfg.r_req)
    p = alloc.p
    ph, om = alloc.phi_n, alloc.phi_m
    f_n, h_n, q_n = coeffs.f_n, coeffs.h_n, coeffs.q_n
    f_m, h_m, q_m = coeffs.f_m, coeffs.h_m, coeffs.q_m
    nn = p * (ph * f_n + om * h_n) + q_n
    dn = p * om * h_n + q_n
    nm = p * (om * f_m + ph * h_m) + q_m
    dm = p * ph * h_m + q_m
    d_se = (1.0 / LN2) * (ph * f_n * q_n / (nn * dn)
                          + om * f_m * q_m / (nm * dm))
    d_mult = (dual.lambda_n * (ph * f_n - r * om * h_n)
              + dual.lambda_m * (om * f_m - r * ph * h_m)
              - dual.pi_1)
    return d_se + d_mult


def kkt_residual_analytic(coeffs: RateCoeffs, alloc: PowerAlloc,
                          dual: DualState, cfg: SystemConfig) -> float:
    """Projected-gradient norm of the box-constrained maximization."""
    g_phi = dl_dphi(coeffs, alloc, dual, cfg)
    g_p = dl_dp(coeffs, alloc, dual, cfg)
    r_phi = max(0.0, -g_phi) if alloc.phi_n >= 0.5 - 1e-12 else abs(g_phi)
    r_p = (max(0.0, -g_p) if alloc.p >= cfg.p_tot * (1.0 - 1e-12)
           else abs(g_p))
    return max(r_phi, r_p)


# ---------------------------------------------------------------------------
# 1-D fallback maximizers


def _scan_bisect_phi(coeffs: RateCoeffs, p: float, dual: DualState,
                     cfg: SystemConfig, lo: float, hi: float) -> list[float]:
    """Stationary points of the Lagrangian in phi on [lo, hi].

    The derivative's sign is sampled on a bracket grid and each sign change
    is bisected; no unimodality is assumed (the sum rate along the full-split
    line is not always concave).
    """
    if hi <= lo:
        return []

    def g(phi: float) -> float:
        return dl_dphi(coeffs, PowerAlloc(p, phi, 1.0 - phi, 0.0), dual, cfg)

    n = 33
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    gs = [g(x) for x in xs]
    roots: list[float] = []
    for i in range(n - 1):
        ga, gb = gs[i], gs[i + 1]
        if ga == 0.0:
            roots.append(xs[i])
            continue
        if (ga > 0.0) == (gb > 0.0):
            continue
        a, b = xs[i], xs[i + 1]
        fa = ga
        for _ in range(60):
            mid = 0.5 * (a + b)
            fm = g(mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fm > 0.0) == (fa > 0.0):
                a, fa = mid, fm
            else:
                b = mid
            if b - a < 1e-14:
                break
        roots.append(0.5 * (a + b))
    return roots


def _golden_p(coeffs: RateCoeffs, phi: float, dual: DualState,
              cfg: SystemConfig, lo: float, hi: float) -> float:
    """Golden-section maximizer of the Lagrangian in P on [lo, hi]."""
    def f(p: float) -> float:
        return lagrangian_value(coeffs, PowerAlloc(p, phi, 1.0 - phi, 0.0),
                                dual, cfg)

    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(80):
        if b - a < 1e-12 * max(1.0, hi):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    best = 0.5 * (a + b)
    for edge in (lo, hi):
        if f(edge) > f(best):
            best = edge
    return best


# ---------------------------------------------------------------------------
# final sum-rate polish at full power


def _se_phi_stationary(coeffs: RateCoeffs, p: float) -> list[float]:
    """Exact stationary fractions of the plain sum rate at fixed power.

    Clearing the three linear-in-phi denominators from d(sum rate)/d(phi)
    leaves a quadratic; its real roots are the only interior extrema.
    """
    f_n, h_n, q_n = coeffs.f_n, coeffs.h_n, coeffs.q_n
    f_m, h_m, q_m = coeffs.f_m, coeffs.h_m, coeffs.q_m
    e_p = f_n - h_n
    a_n, b_n = p * e_p, p * h_n + q_n          # numerator line of gamma_n + its den
    a_d, b_d = -p * h_n, p * h_n + q_n         # denominator line (strong user)
    a_m, b_m = p * h_m, q_m                    # weak user's denominator line
    c2 = e_p * a_d * a_m + h_n * a_n * a_m - h_m * a_n * a_d
    c1 = (e_p * (a_d * b_m + b_d * a_m) + h_n * (a_n * b_m + b_n * a_m)
          - h_m * (a_n * b_d + b_n * a_d))
    c0 = e_p * b_d * b_m + h_n * b_n * b_m - h_m * b_n * b_d
    if max(abs(c2), abs(c1), abs(c0)) == 0.0:
        return []
    return quadratic_roots(c2, c1, c0)


def _polish_full_power(coeffs: RateCoeffs, cfg: SystemConfig,
                       beta: float) -> PowerAlloc | None:
    """Maximize the plain sum rate at the power budget over the feasible
    fraction window; exact via the stationarity quadratic plus window edges."""
    r = rate_threshold(cfg.r_req)
    p_tot = cfg.p_tot
    lo, hi = phi_window(coeffs, p_tot, r)
    if lo > hi + 1e-15 or hi <= 0.0:
        return None
    lo = max(lo, 1e-15)
    cands = [lo, hi]
    for root in _se_phi_stationary(coeffs, p_tot):
        if lo < root < hi:
            cands.append(root)
    best = None
    best_se = -math.inf
    for phi in cands:
        alloc = PowerAlloc(p_tot, phi, 1.0 - phi, beta)
        se = cell_se(coeffs, alloc)
        if se > best_se:
            best, best_se = alloc, se
    return best


# ---------------------------------------------------------------------------
# the subproblem driver


def solve_power_subproblem(real: ChannelRealization, beta: float,
                           cfg: SystemConfig, warm: PowerAlloc | None = None,
                           cell: int = 0, dual0: DualState | None = None,
                           ) -> tuple[PowerAlloc, list[DualState], bool]:
    """Solve one cell's (phi, P) allocation at a fixed reflection coefficient.

    Returns the allocation, the dual-state trace (one entry per iteration,
    initial state first) and a convergence flag.  Raises
    :class:`InfeasibleCellError` when the rate floors conflict everywhere in
    the box — checked in closed form at full power, where the feasible
    window is widest.
    """
    probe = PowerAlloc(cfg.p_tot, 0.25, 0.75, beta)
    coeffs = rate_coeffs(real, probe, cfg, cell)
    r = rate_threshold(cfg.r_req)
    p_tot = cfg.p_tot

    lo, hi = phi_window(coeffs, p_tot, r)
    if lo > hi + 1e-15 or hi <= 0.0:
        raise InfeasibleCellError(
            f"cell {cell}: rate floors conflict (window [{lo:.4g}, {hi:.4g}])")

    if warm is not None:
        prev = PowerAlloc(warm.p, warm.phi_n, warm.phi_m, beta)
    else:
        prev = PowerAlloc(p_tot, 0.25, 0.75, beta)
    dual = dual0 if dual0 is not None else DualState(
        cfg.init_multiplier, cfg.init_multiplier,
        cfg.init_multiplier, cfg.init_multiplier, 0)
    trace = [dual]

    best_feas: PowerAlloc | None = None
    best_feas_se = -math.inf
    converged = False
    stable_feasible = 0
    stagnant = 0

    def feasible(alloc: PowerAlloc) -> bool:
        s1, s2, _, _ = constraint_slacks(coeffs, alloc, cfg)
        tol1 = 1e-9 * max(1.0, abs(s1) + r * coeffs.q_n)
        tol2 = 1e-9 * max(1.0, abs(s2) + r * coeffs.q_m)
        return s1 >= -tol1 and s2 >= -tol2

    for t in range(1, cfg.max_dual_iters + 1):
        # diminishing step keyed to the cumulative count so warm restarts
        # continue the schedule instead of rewinding it
        xi = cfg.step0 / math.sqrt(dual.t + 1)
        gamma_prev = sinr_m(coeffs, prev)

        best_key = None
        chosen = prev
        for phi in phi_candidates(coeffs, prev.p, dual, cfg, gamma_prev):
            for p in power_candidates(coeffs, phi, dual, cfg):
                alloc = PowerAlloc(p, phi, 1.0 - phi, beta)
                lval = lagrangian_value(coeffs, alloc, dual, cfg)
                feas = feasible(alloc)
                key = (1 if feas else 0, lval, cell_se(coeffs, alloc), -p)
                if best_key is None or key > best_key:
                    best_key = key
                    chosen = alloc

        lval = lagrangian_value(coeffs, chosen, dual, cfg)
        resid = kkt_residual_analytic(coeffs, chosen, dual, cfg)
        if resid > 1e-4 * max(1.0, abs(lval)):
            # closed-form candidates missed the optimum: direct 1-D search
            refine_phis = _scan_bisect_phi(coeffs, chosen.p, dual, cfg,
                                           1e-9, 0.5) + [0.5]
            ref_best = chosen
            ref_key = (1 if feasible(chosen) else 0, lval,
                       cell_se(coeffs, chosen), -chosen.p)
            for phi in refine_phis:
                p_star = _golden_p(coeffs, phi, dual, cfg, 1e-9 * p_tot, p_tot)
                alloc = PowerAlloc(p_star, phi, 1.0 - phi, beta)
                lv = lagrangian_value(coeffs, alloc, dual, cfg)
                key = (1 if feasible(alloc) else 0, lv,
                       cell_se(coeffs, alloc), -p_star)
                if key > ref_key:
                    ref_key = key
                    ref_best = alloc
            chosen = ref_best

        if feasible(chosen):
            se = cell_se(coeffs, chosen)
            if se > best_feas_se + 1e-12 * max(1.0, abs(best_feas_se)):
                stagnant = 0
            else:
                stagnant += 1
            if se > best_feas_se:
                best_feas, best_feas_se = chosen, se
        else:
            stagnant += 1

        slacks = constraint_slacks(coeffs, chosen, cfg)
        new_dual = dual_update(dual, slacks, xi)
        delta = max(abs(new_dual.lambda_n - dual.lambda_n),
                    abs(new_dual.lambda_m - dual.lambda_m),
                    abs(new_dual.pi_1 - dual.pi_1),
                    abs(new_dual.pi_2 - dual.pi_2))
        trace.append(new_dual)
        dual = new_dual

        primal_still = (abs(chosen.phi_n - prev.phi_n) < 1e-12
                        and abs(chosen.p - prev.p) < 1e-12 * p_tot)
        prev = chosen
        if primal_still and feasible(chosen):
            stable_feasible += 1
        else:
            stable_feasible = 0
        if delta < cfg.tol_dual:
            converged = True
            break
        if stable_feasible >= 3:
            converged = True
            break
        if stagnant >= 12 and best_feas is not None:
            # rate floors binding: multipliers keep swinging at this slack
            # scale, but the incumbent stopped moving.  The full-power polish
            # below settles the primal exactly, so cut the loop here.
            break

    polished = _polish_full_power(coeffs, cfg, beta)
    if polished is not None:
        se = cell_se(coeffs, polished)
        if se > best_feas_se:
            best_feas, best_feas_se = polished, se

    if best_feas is None:
        # dual loop never touched the feasible window (can happen only with
        # hostile multiplier starts); fall back to the window edge
        phi = min(max(lo, 1e-15), hi)
        best_feas = PowerAlloc(p_tot, phi, 1.0 - phi, beta)

    return best_feas, trace, converged
