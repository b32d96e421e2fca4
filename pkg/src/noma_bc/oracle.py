"""Independent verification routes: brute-force grid scan, bisection root
finding and finite-difference calculus.

Nothing in here shares algebra with the production solvers.  The grid scan
enumerates the whole (phi, P, beta) box; the root oracle only ever looks at
polynomial sign changes; derivatives come from central differences.  Tests
compare these against the closed-form implementations, so keeping the two
routes independent is the entire point of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .config import SystemConfig
from .sinr import PowerAlloc, RateCoeffs, cell_se, rate_coeffs

try:  # pragma: no cover - exercised indirectly
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


# ---------------------------------------------------------------------------
# polynomial root oracle: bisection on monotone segments


def _peval(coeffs, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _pderiv(coeffs) -> list[float]:
    return [k * coeffs[k] for k in range(1, len(coeffs))]


def bisection_roots(coeffs, tol: float = 1e-13) -> list[float]:
    """Real roots by sign-change bisection, subdividing at derivative roots.

    The derivative's roots (found recursively the same way) split the real
    line into monotone segments, each holding at most one root, so plain
    bisection inside each segment finds everything.  Slow but free of any
    closed-form algebra.
    """
    cs = [float(c) for c in coeffs]
    scale = max((abs(c) for c in cs), default=0.0)
    if scale == 0.0:
        raise ValueError("degenerate polynomial")
    # only drop leading terms too small to move any representable root;
    # trimming merely-small ones would silently change the polynomial
    while len(cs) > 1 and abs(cs[-1]) <= 1e-250 * scale:
        cs.pop()
    deg = len(cs) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [-cs[0] / cs[1]]

    bound = 1.0 + max(abs(c) for c in cs[:-1]) / abs(cs[-1])
    marks = [-bound]
    for r in bisection_roots(_pderiv(cs), tol):
        if -bound < r < bound:
            marks.append(r)
    marks.append(bound)

    roots: list[float] = []
    for lo, hi in zip(marks[:-1], marks[1:]):
        flo, fhi = _peval(cs, lo), _peval(cs, hi)
        if flo == 0.0:
            roots.append(lo)
            continue
        if fhi == 0.0:
            if hi == bound:
                roots.append(hi)
            continue  # interior marks are also the next segment's lo
        if (flo > 0.0) == (fhi > 0.0):
            continue
        a, b, fa = lo, hi, flo
        while b - a > tol * max(1.0, abs(a), abs(b)):
            mid = 0.5 * (a + b)
            fm = _peval(cs, mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fm > 0.0) == (fa > 0.0):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    out: list[float] = []
    for r in sorted(roots):
        if not out or abs(r - out[-1]) > 1e-9:
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# finite differences


def fd_derivative(f, x: float, h: float = 1e-6) -> float:
    """Central first difference with a relative step."""
    step = h * max(1.0, abs(x))
    return (f(x + step) - f(x - step)) / (2.0 * step)


def fd_second_derivative(f, x: float, h: float = 1e-4) -> float:
    step = h * max(1.0, abs(x))
    return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step)


def fd_hessian2(f, x: float, y: float, h: float = 1e-4):
    """2x2 central-difference Hessian of a scalar function of two variables."""
    hx = h * max(1.0, abs(x))
    hy = h * max(1.0, abs(y))
    d11 = (f(x + hx, y) - 2.0 * f(x, y) + f(x - hx, y)) / (hx * hx)
    d22 = (f(x, y + hy) - 2.0 * f(x, y) + f(x, y - hy)) / (hy * hy)
    d12 = (f(x + hx, y + hy) - f(x + hx, y - hy)
           - f(x - hx, y + hy) + f(x - hx, y - hy)) / (4.0 * hx * hy)
    return ((d11, d12), (d12, d22))


def kkt_residual(real: ChannelRealization, alloc: PowerAlloc, dual,
                 cfg: SystemConfig, cell: int = 0) -> float:
    """Projected-gradient stationarity measure of the (phi, P) subproblem.

    Gradients of the Lagrangian come from central differences (independent of
    the solver's analytic forms).  For this maximization, a coordinate at its
    upper bound only counts inward pressure, and the open lower bounds count
    outward pressure; interior coordinates count the full gradient magnitude.
    """
    from .power_dual import lagrangian_value  # local import to avoid a cycle

    coeffs = rate_coeffs(real, alloc, cfg, cell)

    def l_phi(phi: float) -> float:
        return lagrangian_value(
            coeffs, PowerAlloc(alloc.p, phi, 1.0 - phi, alloc.beta), dual, cfg)

    def l_p(p: float) -> float:
        return lagrangian_value(
            coeffs, PowerAlloc(p, alloc.phi_n, alloc.phi_m, alloc.beta), dual, cfg)

    h_phi = min(1e-7, alloc.phi_n / 4.0, (0.5 - alloc.phi_n) / 4.0 + 1e-12)
    h_phi = max(h_phi, 1e-12)
    g_phi = (l_phi(alloc.phi_n + h_phi) - l_phi(alloc.phi_n - h_phi)) / (2.0 * h_phi)
    p_tot = cfg.p_tot
    h_p = max(min(1e-7 * p_tot, alloc.p / 4.0, (p_tot - alloc.p) / 4.0 + 1e-15), 1e-12)
    g_p = (l_p(alloc.p + h_p) - l_p(alloc.p - h_p)) / (2.0 * h_p)

    if alloc.phi_n >= 0.5 - 1e-12:
        r_phi = max(0.0, -g_phi)
    else:
        r_phi = abs(g_phi)
    if alloc.p >= p_tot * (1.0 - 1e-12):
        r_p = max(0.0, -g_p)
    else:
        r_p = abs(g_p)
    return max(r_phi, r_p)


# ---------------------------------------------------------------------------
# exhaustive grid scan


@dataclass
class GridResult:
    alloc: PowerAlloc | None
    se: float
    found: bool
    bound: float  # first-order granularity allowance around the grid argmax


@njit(cache=True, fastmath=True, error_model="numpy")
def _scan_rows(g_n, g_m, h_n, q_n, q_m, c_n, c_m, r, phis, ps, betas, acc,
               out_scores, out_iphi):
    """For each beta slice, record the best product score over the (phi, P)
    plane and the phi row achieving it.

    All float inputs are float32 and the power loop runs blockwise over a
    small lane-accumulator array, which is what lets LLVM keep the whole
    body — division included — in SIMD registers; the caller re-evaluates
    the winning slice in float64.  Rows whose rate floors cannot be met at
    any power (negative linearized slack slope) are skipped, and the power
    loop starts at the exact feasibility threshold — both prunings follow
    from the constraints being linear in P, so they cannot change the
    argmax.  The couple of sub-threshold points admitted by the early start
    are harmless: the score increases in P inside a row, so they never beat
    the row's feasible maximum.
    """
    n_phi = phis.shape[0]
    n_p = ps.shape[0]
    p_step = ps[0]
    zero = np.float32(0.0)
    one = np.float32(1.0)
    nlanes = acc.shape[0]
    # inclusion-leaning row guard; exact feasibility is re-checked in the
    # float64 recovery pass, so borderline rows may enter but never win
    p_tot_relaxed = ps[n_p - 1] * np.float32(1.00001)
    for ib in range(betas.shape[0]):
        beta = betas[ib]
        f_n = g_n + beta * c_n
        f_m = g_m + beta * c_m
        best = zero
        best_row = -1
        for iphi in range(n_phi):
            phi = phis[iphi]
            om = one - phi
            k1 = phi * f_n - r * om * h_n
            k2 = om * f_m - r * phi * f_m
            if k1 <= zero or k2 <= zero:
                continue
            p1 = r * q_n / k1
            p2 = r * q_m / k2
            p_min = p1 if p1 > p2 else p2
            if p_min > p_tot_relaxed:
                continue
            ip0 = int(p_min / p_step) - 2
            if ip0 < 0:
                ip0 = 0
            for lane in range(nlanes):
                acc[lane] = zero
            blk = ip0
            while blk + nlanes <= n_p:
                for lane in range(nlanes):
                    p = ps[blk + lane]
                    u = p * phi
                    v = p - u
                    d1 = v * h_n + q_n
                    d2 = u * f_m + q_m
                    sc = (u * f_n + d1) * (v * f_m + d2) / (d1 * d2)
                    if sc > acc[lane]:
                        acc[lane] = sc
                blk += nlanes
            row = zero
            for lane in range(nlanes):
                if acc[lane] > row:
                    row = acc[lane]
            for ip in range(blk, n_p):
                p = ps[ip]
                u = p * phi
                v = p - u
                d1 = v * h_n + q_n
                d2 = u * f_m + q_m
                sc = (u * f_n + d1) * (v * f_m + d2) / (d1 * d2)
                if sc > row:
                    row = sc
            if row > best:
                best = row
                best_row = iphi
        out_scores[ib] = best
        out_iphi[ib] = best_row


def _scan_rows_numpy(g_n, g_m, h_n, q_n, q_m, c_n, c_m, r, phis, ps, betas,
                     out_scores, out_iphi):
    """Vectorized fallback with identical semantics to the jitted kernel."""
    phi = phis[:, None]
    p = ps[None, :]
    u = p * phi
    v = p - u
    d1 = v * h_n + q_n
    n1_base = u  # scaled by f_n per slice below
    for ib in range(betas.shape[0]):
        beta = float(betas[ib])
        f_n = g_n + beta * c_n
        f_m = g_m + beta * c_m
        d2 = u * f_m + q_m
        n1 = n1_base * f_n
        n2 = v * f_m
        feas = (n1 >= r * d1) & (n2 >= r * d2)
        score = np.where(feas, (n1 + d1) * (n2 + d2) / (d1 * d2), 0.0)
        rows = score.max(axis=1)
        iphi = int(np.argmax(rows))
        out_scores[ib] = rows[iphi]
        out_iphi[ib] = iphi if rows[iphi] > 0.0 else -1


def grid_search(real: ChannelRealization, cfg: SystemConfig, cell: int = 0,
                n_phi: int = 500, n_p: int = 1000, n_beta: int = 1000,
                use_numba: bool = True) -> GridResult:
    """Exhaustively scan the per-cell decision box under frozen interference.

    The grid covers phi in (0, 0.5], P in (0, p_tot] and beta in [0, 1] at
    uniform steps.  Points violating either rate floor are discarded; the
    survivor maximizing (1+sinr_n)(1+sinr_m) — a monotone proxy for the sum
    rate — wins.  The winning beta slice is re-scanned in float64 and the
    reported SE is recomputed through the production rate expressions at the
    recovered grid point.
    """
    r = 2.0 ** cfg.r_req - 1.0
    p_tot = cfg.p_tot
    g_n = real.gain_n[cell]
    g_m = real.gain_m[cell]
    h_n = cfg.sic_error * g_n
    q_n = real.interference_n[cell] + cfg.noise_var
    q_m = real.interference_m[cell] + cfg.noise_var
    c_n = real.bs_to_bd[cell] * real.bd_to_n[cell]
    c_m = real.bs_to_bd[cell] * real.bd_to_m[cell]

    phis64 = np.arange(1, n_phi + 1) * (0.5 / n_phi)
    ps64 = np.arange(1, n_p + 1) * (p_tot / n_p)
    betas64 = np.arange(n_beta + 1) / n_beta
    scores = np.zeros(n_beta + 1, dtype=np.float64)
    rows = np.full(n_beta + 1, -1, dtype=np.int64)
    if use_numba and _HAVE_NUMBA:
        acc = np.zeros(16, dtype=np.float32)
        _scan_rows(np.float32(g_n), np.float32(g_m), np.float32(h_n),
                   np.float32(q_n), np.float32(q_m), np.float32(c_n),
                   np.float32(c_m), np.float32(r),
                   phis64.astype(np.float32), ps64.astype(np.float32),
                   betas64.astype(np.float32), acc, scores, rows)
    else:
        _scan_rows_numpy(g_n, g_m, h_n, q_n, q_m, c_n, c_m, r,
                         phis64, ps64, betas64, scores, rows)

    if rows.max() < 0 or scores.max() <= 0.0:
        return GridResult(alloc=None, se=0.0, found=False, bound=0.0)

    # float64 recovery over the winning beta slice (all phi rows, not just the
    # float32 winner, so kernel rounding cannot move the reported point); if a
    # slice won only through borderline rounding it is rejected here and the
    # next-best slice is tried
    u = ps64[None, :] * phis64[:, None]
    v = ps64[None, :] - u
    d1 = v * h_n + q_n
    hit = None
    for ib in np.argsort(-scores):
        if rows[ib] < 0 or scores[ib] <= 0.0:
            break
        beta = float(betas64[ib])
        f_n = g_n + beta * c_n
        f_m = g_m + beta * c_m
        d2 = u * f_m + q_m
        n1 = u * f_n
        n2 = v * f_m
        feas = (n1 >= r * d1) & (n2 >= r * d2)
        score = np.where(feas, (n1 + d1) * (n2 + d2) / (d1 * d2), -1.0)
        flat = int(np.argmax(score))
        iphi, ip = divmod(flat, n_p)
        if score[iphi, ip] > 0.0:
            hit = (beta, iphi, ip)
            break
    if hit is None:
        return GridResult(alloc=None, se=0.0, found=False, bound=0.0)
    beta, iphi, ip = hit
    alloc = PowerAlloc(p=float(ps64[ip]), phi_n=float(phis64[iphi]),
                       phi_m=1.0 - float(phis64[iphi]), beta=beta)
    coeffs = rate_coeffs(real, alloc, cfg, cell)
    se = cell_se(coeffs, alloc)

    bound = _granularity_bound(real, cfg, cell, alloc,
                               0.5 / n_phi, p_tot / n_p, 1.0 / n_beta)
    return GridResult(alloc=alloc, se=se, found=True, bound=bound)


def _granularity_bound(real, cfg, cell, alloc, d_phi, d_p, d_beta) -> float:
    """First-order allowance for how far the true optimum can sit above the
    best grid point: half a step per coordinate times a sampled gradient
    magnitude, plus a small absolute cushion for curvature."""

    def se_of(phi, p, beta):
        a = PowerAlloc(p, phi, 1.0 - phi, beta)
        return cell_se(rate_coeffs(real, a, cfg, cell), a)

    g_phi = fd_derivative(lambda x: se_of(min(max(x, 1e-6), 0.5), alloc.p, alloc.beta),
                          alloc.phi_n, 1e-5)
    g_p = fd_derivative(lambda x: se_of(alloc.phi_n, max(x, 1e-9), alloc.beta),
                        alloc.p, 1e-5)
    g_beta = fd_derivative(lambda x: se_of(alloc.phi_n, alloc.p, min(max(x, 0.0), 1.0)),
                           alloc.beta, 1e-5)
    return 0.5 * (abs(g_phi) * d_phi + abs(g_p) * d_p + abs(g_beta) * d_beta) + 1e-6
