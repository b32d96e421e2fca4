"""Per-cell SINR and spectral-efficiency expressions.

The strong user decodes the weak user's signal first and cancels it with a
residual fraction ``sic_error``; the weak user treats the strong user's
signal as noise.  The backscatter device reflects the BS signal with
coefficient ``beta``, which adds ``beta * bs_to_bd * bd_to_user`` to the
effective direct gain of each user.

Two coefficient bundles cover the two solver views:

* :class:`RateCoeffs` freezes ``beta`` and exposes the (phi, P) geometry.
* :class:`BetaCoeffs` freezes ``(phi, P)`` and exposes the beta geometry,
  with both SINRs linear-fractional in beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelRealization
from .config import SystemConfig


@dataclass(slots=True)
class PowerAlloc:
    """One cell's decision variables."""

    p: float        # transmit power, linear
    phi_n: float    # strong-user power fraction
    phi_m: float    # weak-user power fraction
    beta: float     # reflection coefficient

    def copy(self) -> "PowerAlloc":
        return PowerAlloc(self.p, self.phi_n, self.phi_m, self.beta)


@dataclass(slots=True)
class RateCoeffs:
    """Effective link constants of one cell at a fixed reflection coefficient.

    f_* multiply the intended signal, h_* the intra-cell interference term
    (residual for the strong user, full for the weak user), q_* collect
    inter-cell interference plus noise.  For the weak user f_m == h_m by
    construction.
    """

    f_n: float
    h_n: float
    q_n: float
    f_m: float
    h_m: float
    q_m: float
    theta_n: float  # backscatter add-on inside f_n
    theta_m: float


@dataclass(slots=True)
class BetaCoeffs:
    """One cell's SINRs as linear-fractional functions of beta.

    gamma_n = (e_n + beta*t_n) / v_n
    gamma_m = (e_m + beta*t_m) / (v_m + beta*eta_m)
    """

    e_n: float
    t_n: float
    v_n: float
    e_m: float
    t_m: float
    v_m: float
    eta_m: float


def rate_coeffs(real: ChannelRealization, alloc: PowerAlloc, cfg: SystemConfig,
                cell: int = 0) -> RateCoeffs:
    """Bundle the cell's link constants at the allocation's ``beta``."""
    theta_n = alloc.beta * real.bs_to_bd[cell] * real.bd_to_n[cell]
    theta_m = alloc.beta * real.bs_to_bd[cell] * real.bd_to_m[cell]
    g_n = real.gain_n[cell]
    g_m = real.gain_m[cell]
    return RateCoeffs(
        f_n=g_n + theta_n,
        h_n=cfg.sic_error * g_n,
        q_n=real.interference_n[cell] + cfg.noise_var,
        f_m=g_m + theta_m,
        h_m=g_m + theta_m,
        q_m=real.interference_m[cell] + cfg.noise_var,
        theta_n=theta_n,
        theta_m=theta_m,
    )


def beta_coeffs(real: ChannelRealization, alloc: PowerAlloc, cfg: SystemConfig,
                cell: int = 0) -> BetaCoeffs:
    """Bundle the cell's SINR geometry as functions of beta at fixed (phi, P)."""
    u = alloc.p * alloc.phi_n
    v = alloc.p * alloc.phi_m
    g_n = real.gain_n[cell]
    g_m = real.gain_m[cell]
    bsc_n = real.bs_to_bd[cell] * real.bd_to_n[cell]
    bsc_m = real.bs_to_bd[cell] * real.bd_to_m[cell]
    return BetaCoeffs(
        e_n=u * g_n,
        t_n=u * bsc_n,
        v_n=v * cfg.sic_error * g_n + real.interference_n[cell] + cfg.noise_var,
        e_m=v * g_m,
        t_m=v * bsc_m,
        v_m=u * g_m + real.interference_m[cell] + cfg.noise_var,
        eta_m=u * bsc_m,
    )


def sinr_n(coeffs: RateCoeffs, alloc: PowerAlloc) -> float:
    """Strong-user SINR after imperfect SIC."""
    return (alloc.p * alloc.phi_n * coeffs.f_n) / (
        alloc.p * alloc.phi_m * coeffs.h_n + coeffs.q_n
    )


def sinr_m(coeffs: RateCoeffs, alloc: PowerAlloc) -> float:
    """Weak-user SINR with the strong user's signal as in-cell noise."""
    return (alloc.p * alloc.phi_m * coeffs.f_m) / (
        alloc.p * alloc.phi_n * coeffs.h_m + coeffs.q_m
    )


def cell_se(coeffs: RateCoeffs, alloc: PowerAlloc) -> float:
    """Sum spectral efficiency of the pair [bit/s/Hz]."""
    return math.log2(1.0 + sinr_n(coeffs, alloc)) + math.log2(1.0 + sinr_m(coeffs, alloc))


def se_at_beta(bc: BetaCoeffs, beta: float) -> float:
    """Sum spectral efficiency as a function of beta at fixed (phi, P)."""
    g_n = (bc.e_n + beta * bc.t_n) / bc.v_n
    g_m = (bc.e_m + beta * bc.t_m) / (bc.v_m + beta * bc.eta_m)
    return math.log2(1.0 + g_n) + math.log2(1.0 + g_m)


def se_hessian_phi(coeffs: RateCoeffs, phi_n: float, phi_m: float):
    """Hessian of the pair sum rate in the two fractions, unit power.

    The fractions are treated as independent coordinates here (no full-split
    substitution) with the transmit power absorbed into the link constants.
    Negative definiteness is reported by callers, not assumed: the diagonal
    terms trade a concave signal term against a convex self-interference
    term and either can dominate.
    """
    f_n, h_n, q_n = coeffs.f_n, coeffs.h_n, coeffs.q_n
    f_m, h_m, q_m = coeffs.f_m, coeffs.h_m, coeffs.q_m
    ln2 = math.log(2.0)
    psi_n = f_n * phi_n + h_n * phi_m + q_n
    xi_n = h_n * phi_m + q_n
    psi_m = f_m * phi_m + h_m * phi_n + q_m
    xi_m = h_m * phi_n + q_m
    d11 = -(f_n**2 * xi_m**2 * psi_m**2
            - f_m * h_m**2 * psi_n**2 * (2.0 * xi_m + f_m * phi_m) * phi_m) / (
        ln2 * psi_n**2 * psi_m**2 * xi_m**2)
    d22 = -(f_m**2 * xi_n**2 * psi_n**2
            - f_n * h_n**2 * psi_m**2 * (2.0 * xi_n + f_n * phi_n) * phi_n) / (
        ln2 * psi_m**2 * psi_n**2 * xi_n**2)
    d12 = -(f_n * h_n * psi_m**2 + f_m * h_m * psi_n**2) / (
        ln2 * psi_n**2 * psi_m**2)
    return ((d11, d12), (d12, d22))


@dataclass(slots=True)
class QosReport:
    """Outcome of the six per-cell constraint checks."""

    z1_rate_n: bool
    z2_rate_m: bool
    z3_order: bool
    z4_power: bool
    z5_split: bool
    z6_beta: bool

    @property
    def all_ok(self) -> bool:
        return (self.z1_rate_n and self.z2_rate_m and self.z3_order
                and self.z4_power and self.z5_split and self.z6_beta)


def qos_satisfied(coeffs: RateCoeffs, alloc: PowerAlloc, r_req: float,
                  p_tot: float, rel_tol: float = 1e-9) -> QosReport:
    """Check the six constraints with a relative slack of ``rel_tol``.

    The rate floors are checked in their linearized form (signal power vs.
    threshold times interference-plus-noise), which is exact and avoids log
    round-off at the boundary.
    """
    r = 2.0 ** r_req - 1.0
    u = alloc.p * alloc.phi_n
    v = alloc.p * alloc.phi_m

    lhs1 = u * coeffs.f_n
    rhs1 = r * (v * coeffs.h_n + coeffs.q_n)
    z1 = lhs1 >= rhs1 - rel_tol * max(1.0, abs(lhs1), abs(rhs1))

    lhs2 = v * coeffs.f_m
    rhs2 = r * (u * coeffs.h_m + coeffs.q_m)
    z2 = lhs2 >= rhs2 - rel_tol * max(1.0, abs(lhs2), abs(rhs2))

    z3 = alloc.phi_n <= alloc.phi_m + rel_tol * max(1.0, abs(alloc.phi_m))
    z4 = (alloc.p >= -rel_tol * max(1.0, p_tot)
          and alloc.p <= p_tot + rel_tol * max(1.0, p_tot))
    z5 = alloc.phi_n + alloc.phi_m <= 1.0 + rel_tol
    z6 = -rel_tol <= alloc.beta <= 1.0 + rel_tol

    return QosReport(z1, z2, z3, z4, z5, z6)
