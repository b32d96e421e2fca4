"""Real roots of low-degree polynomials, closed form plus Newton polish.

The solver hot path calls these thousands of times per network solve, so the
implementation is pure scalar arithmetic: stable quadratic, trigonometric /
Cardano cubic, Ferrari quartic.  Every closed-form root is polished with a
few safeguarded Newton steps on the original polynomial and then filtered by
a scaled residual bound, so spurious roots from cancellation are dropped
rather than returned.

Coefficients are ascending: ``coeffs[k]`` multiplies ``x**k``.
"""

from __future__ import annotations

import math

_MERGE_TOL = 1e-9
_TRIM_REL = 1e-12
_TRIM_ABS = 1e-250  # leading terms below this (relative) cannot move any
                    # representable root; trimming them only guards overflow
_RESID_REL = 1e-8


def _poly_eval(coeffs, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deriv_eval(coeffs, x: float) -> float:
    acc = 0.0
    for k in range(len(coeffs) - 1, 0, -1):
        acc = acc * x + k * coeffs[k]
    return acc


def _newton_polish(coeffs, x: float, steps: int = 3) -> float:
    best = x
    best_res = abs(_poly_eval(coeffs, x))
    for _ in range(steps):
        d = _poly_deriv_eval(coeffs, x)
        if d == 0.0 or not math.isfinite(d):
            break
        x = x - _poly_eval(coeffs, x) / d
        if not math.isfinite(x):
            break
        res = abs(_poly_eval(coeffs, x))
        if res < best_res:
            best, best_res = x, res
    return best


def _residual_ok(coeffs, x: float) -> bool:
    if not math.isfinite(x):
        return False
    scale = 1.0
    xk = 1.0
    for c in coeffs:
        scale = max(scale, abs(c * xk))
        xk *= x
    return abs(_poly_eval(coeffs, x)) <= _RESID_REL * scale


def _merge_sorted(roots: list[float]) -> list[float]:
    roots.sort()
    out: list[float] = []
    for r in roots:
        if out and abs(r - out[-1]) <= _MERGE_TOL:
            continue
        out.append(r)
    return out


def quadratic_roots(a: float, b: float, c: float) -> list[float]:
    """Real roots of ``a x^2 + b x + c``, sorted ascending.

    Degenerate leading coefficients fall back to the linear (or empty) case;
    an all-zero polynomial is rejected.  The usual sign trick avoids the
    cancellation that loses the small root when ``b^2 >> 4ac``.
    """
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        raise ValueError("degenerate polynomial")
    if abs(a) <= _TRIM_ABS * scale:
        if abs(b) <= _TRIM_ABS * scale:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0.0:
        return [0.0]
    roots = [q / a, c / q]
    return _merge_sorted(roots)


def _cubic_roots(c0: float, c1: float, c2: float, c3: float) -> list[float]:
    """Real roots of a cubic with nonzero leading coefficient (unpolished)."""
    a = c2 / c3
    b = c1 / c3
    c = c0 / c3
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    shift = -a / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        s = math.sqrt(disc)
        u = -q / 2.0 - math.copysign(s, q)
        u = math.copysign(abs(u) ** (1.0 / 3.0), u)
        v = -p / (3.0 * u) if u != 0.0 else 0.0
        return [u + v + shift]
    if p == 0.0:  # disc <= 0 and p == 0 forces q == 0: triple root
        return [shift]
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    return [m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift for k in range(3)]


def _quartic_roots(c0: float, c1: float, c2: float, c3: float, c4: float) -> list[float]:
    """Real roots of a quartic with nonzero leading coefficient (unpolished)."""
    a = c3 / c4
    b = c2 / c4
    c = c1 / c4
    d = c0 / c4
    # depressed form y^4 + p y^2 + q y + r with x = y - a/4
    p = b - 3.0 * a * a / 8.0
    q = c - a * b / 2.0 + a**3 / 8.0
    r = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a**4 / 256.0
    shift = -a / 4.0
    roots: list[float] = []
    if abs(q) <= 1e-14 * max(1.0, abs(p), abs(r)):
        # biquadratic in y^2
        for z in quadratic_roots(1.0, p, r):
            if z >= 0.0:
                s = math.sqrt(z)
                roots.extend([s + shift, -s + shift])
        return roots
    # resolvent: 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0 has a positive root
    res = _cubic_roots(-q * q, 2.0 * p * p - 8.0 * r, 8.0 * p, 8.0)
    m = max(res)
    if m <= 0.0:
        return []
    s = math.sqrt(2.0 * m)
    t = q / (2.0 * s)
    for sign in (1.0, -1.0):
        # the two square-root branches: (y^2 - s y + (p/2+m+t)) (y^2 + s y + (p/2+m-t))
        bq = -sign * s
        cq = p / 2.0 + m + sign * t
        disc = bq * bq - 4.0 * cq
        if disc >= 0.0:
            sd = math.sqrt(disc)
            roots.append((-bq + sd) / 2.0 + shift)
            roots.append((-bq - sd) / 2.0 + shift)
    return roots


def _closed_form(cs: list[float]) -> list[float]:
    deg = len(cs) - 1
    if deg == 1:
        return [-cs[0] / cs[1]]
    if deg == 2:
        return quadratic_roots(cs[2], cs[1], cs[0])
    if deg == 3:
        return _cubic_roots(cs[0], cs[1], cs[2], cs[3])
    return _quartic_roots(cs[0], cs[1], cs[2], cs[3], cs[4])


def real_roots(coeffs) -> list[float]:
    """All real roots of a polynomial of degree <= 4, ascending coefficients.

    Steeply graded coefficients (leading far below constant — routine here,
    since the power-stationarity quartic decays like 1/P per degree) put the
    roots at large magnitude where the raw closed forms lose accuracy, so
    the variable is rescaled by the geometric-mean root size before solving.
    Every root is Newton-polished and residual-filtered against the original
    polynomial, and duplicates closer than 1e-9 are merged.  A polynomial
    that is zero everywhere is rejected.
    """
    cs = [float(c) for c in coeffs]
    if len(cs) > 5:
        raise ValueError("degree above 4 not supported")
    scale = max((abs(c) for c in cs), default=0.0)
    if scale == 0.0:
        raise ValueError("degenerate polynomial")
    while len(cs) > 1 and abs(cs[-1]) <= _TRIM_ABS * scale:
        cs.pop()
    has_zero_root = False
    while len(cs) > 1 and cs[0] == 0.0:
        cs.pop(0)
        has_zero_root = True
    deg = len(cs) - 1
    if deg == 0:
        return [0.0] if has_zero_root else []

    # rescaling rounds the coefficients, which can split exact multiple
    # roots, so leave moderately scaled inputs on the exact path
    s = 1.0
    work = cs
    if deg >= 2 and abs(cs[0]) > 1e8 * abs(cs[-1]):
        s = (abs(cs[0]) / abs(cs[-1])) ** (1.0 / deg)
        bal = [c * s**k for k, c in enumerate(cs)]
        if all(math.isfinite(b) for b in bal):
            work = bal
        else:  # pathological dynamic range: fall back to degree reduction
            s = 1.0
            work = list(cs)
            wscale = max(abs(c) for c in work)
            while len(work) > 1 and abs(work[-1]) <= _TRIM_REL * wscale:
                work.pop()

    raw = [y * s for y in _closed_form(work)]
    polished = [_newton_polish(cs, x) for x in raw]
    kept = [x for x in polished if _residual_ok(cs, x)]
    if has_zero_root:
        kept.append(0.0)
    return _merge_sorted(kept)
