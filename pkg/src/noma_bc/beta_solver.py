"""Reflection-coefficient subproblem at a fixed power split.

Both SINRs are linear-fractional in beta, so the sum rate's derivative has
an explicit form and the feasible beta set is an interval.  Candidates are
the box edges, the two floor-tight points, the current value and (if the
derivative changes sign) a bisected stationary point; the winner is chosen
by sum rate with ties broken toward the smaller reflection, which keeps a
device with zero backscatter gain exactly at the no-backscatter baseline.
"""

from __future__ import annotations

import math

from .channel import ChannelRealization
from .config import SystemConfig
from .sinr import BetaCoeffs, PowerAlloc, beta_coeffs, se_at_beta

LN2 = math.log(2.0)


def dse_dbeta(bc: BetaCoeffs, beta: float) -> float:
    """Exact derivative of the pair sum rate in beta.

    Both terms are nonnegative: extra reflection always helps the strong
    user, and the weak user's numerator coupling t_m*v_m - e_m*eta_m reduces
    to (weak signal gain) * (noise-plus-interference) >= 0.
    """
    fn_t = bc.e_n + beta * bc.t_n
    fm_t = bc.e_m + beta * bc.t_m
    hm_t = bc.v_m + beta * bc.eta_m
    qm_t = bc.t_m * bc.v_m - bc.e_m * bc.eta_m
    term_n = bc.t_n / (LN2 * (fn_t + bc.v_n))
    term_m = qm_t / (LN2 * (hm_t * hm_t + hm_t * fm_t))
    return term_n + term_m


def d2se_dbeta2(bc: BetaCoeffs, beta: float) -> float:
    """Exact second derivative of the pair sum rate in beta (never positive)."""
    fn_t = bc.e_n + beta * bc.t_n
    fm_t = bc.e_m + beta * bc.t_m
    hm_t = bc.v_m + beta * bc.eta_m
    qm_t = bc.t_m * bc.v_m - bc.e_m * bc.eta_m
    omega = hm_t + bc.t_m * beta
    chi = bc.t_m * bc.v_m + bc.e_m * bc.eta_m
    term_n = bc.t_n * bc.t_n / ((fn_t + bc.v_n) ** 2)
    denom = hm_t * hm_t * (hm_t + fm_t) ** 2
    term_m = qm_t * (2.0 * bc.eta_m * omega + chi) / denom
    return -(term_n + term_m) / LN2


def beta_window(bc: BetaCoeffs, r: float) -> tuple[float, float]:
    """Feasible beta interval [lo, hi] within [0, 1]; lo > hi means empty.

    The strong user's floor only ever lower-bounds beta; the weak user's
    floor lower- or upper-bounds it depending on the sign of the net
    backscatter benefit t_m - r*eta_m.
    """
    lo, hi = 0.0, 1.0
    if bc.t_n > 0.0:
        lo = max(lo, (r * bc.v_n - bc.e_n) / bc.t_n)
    elif bc.e_n < r * bc.v_n:
        return (1.0, 0.0)
    den = bc.t_m - r * bc.eta_m
    num = r * bc.v_m - bc.e_m
    if den > 0.0:
        lo = max(lo, num / den)
    elif den < 0.0:
        hi = min(hi, num / den)
    elif num > 0.0:
        return (1.0, 0.0)
    return (lo, hi)


def _feasible(bc: BetaCoeffs, beta: float, r: float) -> bool:
    lhs_n = bc.e_n + beta * bc.t_n
    rhs_n = r * bc.v_n
    ok_n = lhs_n >= rhs_n - 1e-9 * max(1.0, abs(lhs_n), abs(rhs_n))
    lhs_m = bc.e_m + beta * bc.t_m
    rhs_m = r * (bc.v_m + beta * bc.eta_m)
    ok_m = lhs_m >= rhs_m - 1e-9 * max(1.0, abs(lhs_m), abs(rhs_m))
    return ok_n and ok_m


def beta_candidates(bc: BetaCoeffs, r: float, current: float) -> list[float]:
    """Candidate reflections in [0, 1], ascending and deduplicated."""
    cands = [0.0, 1.0, min(max(current, 0.0), 1.0)]
    if bc.t_n > 1e-300:
        z1 = (r * bc.v_n - bc.e_n) / bc.t_n
        if 0.0 < z1 < 1.0:
            cands.append(z1)
    den = bc.t_m - r * bc.eta_m
    if abs(den) > 1e-300:
        z2 = (r * bc.v_m - bc.e_m) / den
        if 0.0 < z2 < 1.0:
            cands.append(z2)
    g0 = dse_dbeta(bc, 0.0)
    g1 = dse_dbeta(bc, 1.0)
    if (g0 > 0.0) != (g1 > 0.0):
        a, b, fa = 0.0, 1.0, g0
        for _ in range(60):
            mid = 0.5 * (a + b)
            fm = dse_dbeta(bc, mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fm > 0.0) == (fa > 0.0):
                a, fa = mid, fm
            else:
                b = mid
        cands.append(0.5 * (a + b))
    cands.sort()
    out: list[float] = []
    for c in cands:
        if not out or c - out[-1] > 1e-12:
            out.append(c)
    return out


def solve_beta(real: ChannelRealization, alloc: PowerAlloc, cfg: SystemConfig,
               cell: int = 0) -> float:
    """Best feasible reflection coefficient at the allocation's (phi, P).

    Under the default "max_se" rule the feasible candidate with the largest
    sum rate wins (strict improvement only, so ties keep the smaller
    reflection).  Under "z1_active" the smallest feasible candidate wins —
    the just-enough-reflection policy.  If no candidate is feasible the
    current value is returned unchanged.
    """
    bc = beta_coeffs(real, alloc, cfg, cell)
    r = 2.0 ** cfg.r_req - 1.0
    cands = beta_candidates(bc, r, alloc.beta)
    feas = [b for b in cands if _feasible(bc, b, r)]
    if not feas:
        return alloc.beta
    if cfg.beta_rule == "z1_active":
        return feas[0]
    best = feas[0]
    best_se = se_at_beta(bc, best)
    for b in feas[1:]:
        se = se_at_beta(bc, b)
        if se > best_se:
            best, best_se = b, se
    return best
