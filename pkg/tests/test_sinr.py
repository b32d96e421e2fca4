"""SINR/sum-rate building blocks against hand-computed values."""

import math

import numpy as np

from noma_bc.config import SystemConfig
from noma_bc.channel import generate_topology, sample_channels
from noma_bc.oracle import fd_hessian2
from noma_bc.sinr import (BetaCoeffs, PowerAlloc, RateCoeffs, beta_coeffs,
                          cell_se, qos_satisfied, rate_coeffs, se_at_beta,
                          se_hessian_phi, sinr_n, sinr_m)


def _coeffs(f_n=1.0, h_n=0.0, q_n=1.0, f_m=1.0, h_m=1.0, q_m=1.0):
    return RateCoeffs(f_n=f_n, h_n=h_n, q_n=q_n, f_m=f_m, h_m=h_m, q_m=q_m,
                      theta_n=0.0, theta_m=0.0)


def test_sinr_n_perfect_sic():
    # P=2, even split, unit direct gain, no backscatter, alpha=0, sigma^2=1
    alloc = PowerAlloc(2.0, 0.5, 0.5, 0.0)
    assert abs(sinr_n(_coeffs(f_n=1.0, h_n=0.0, q_n=1.0), alloc) - 1.0) < 1e-15


def test_sinr_n_fully_failed_sic():
    # same link but alpha=1: the weak user's share leaks in fully
    alloc = PowerAlloc(2.0, 0.5, 0.5, 0.0)
    assert abs(sinr_n(_coeffs(f_n=1.0, h_n=1.0, q_n=1.0), alloc) - 0.5) < 1e-15


def test_sinr_m_no_strong_user_power():
    alloc = PowerAlloc(1.0, 0.0, 1.0, 0.0)
    assert abs(sinr_m(_coeffs(f_m=2.0, h_m=2.0, q_m=1.0), alloc) - 2.0) < 1e-15


def test_sinr_m_uneven_split():
    # P=2, phi_n=0.2: 1.6/(0.4+0.1) = 3.2
    alloc = PowerAlloc(2.0, 0.2, 0.8, 0.0)
    assert abs(sinr_m(_coeffs(f_m=1.0, h_m=1.0, q_m=0.1), alloc) - 3.2) < 1e-14


def test_cell_se_adds_both_logs():
    # gamma_n=1 and gamma_m=3 -> log2(2) + log2(4) = 3
    alloc = PowerAlloc(2.0, 0.5, 0.5, 0.0)
    coeffs = _coeffs(f_n=1.0, h_n=0.0, q_n=1.0, f_m=6.0, h_m=1.0, q_m=1.0)
    assert abs(sinr_n(coeffs, alloc) - 1.0) < 1e-15
    assert abs(sinr_m(coeffs, alloc) - 3.0) < 1e-15
    assert abs(cell_se(coeffs, alloc) - 3.0) < 1e-12


def test_rate_coeffs_match_direct_evaluation():
    cfg = SystemConfig(num_cells=2)
    rng = np.random.default_rng(21)
    real = sample_channels(generate_topology(cfg, rng), cfg, rng)
    real.interference_n[:] = [0.3, 0.1]
    real.interference_m[:] = [0.2, 0.4]
    alloc = PowerAlloc(cfg.p_tot, 0.3, 0.7, 0.6)
    for cell in (0, 1):
        co = rate_coeffs(real, alloc, cfg, cell)
        theta_n = alloc.beta * real.bs_to_bd[cell] * real.bd_to_n[cell]
        g_n = (alloc.p * alloc.phi_n * (real.gain_n[cell] + theta_n)
               / (alloc.p * alloc.phi_m * cfg.sic_error * real.gain_n[cell]
                  + real.interference_n[cell] + cfg.noise_var))
        assert abs(sinr_n(co, alloc) - g_n) < 1e-12 * abs(g_n)
        assert co.f_m == co.h_m  # weak user cannot cancel the strong signal


def test_beta_parameterization_consistent_with_rate_coeffs():
    """se_at_beta(beta_coeffs(...), b) must equal cell_se at that same b."""
    cfg = SystemConfig(num_cells=1)
    rng = np.random.default_rng(33)
    real = sample_channels(generate_topology(cfg, rng), cfg, rng)
    alloc = PowerAlloc(500.0, 0.25, 0.75, 0.0)
    bc = beta_coeffs(real, alloc, cfg, 0)
    for b in (0.0, 0.2, 0.7, 1.0):
        at_b = PowerAlloc(alloc.p, alloc.phi_n, alloc.phi_m, b)
        direct = cell_se(rate_coeffs(real, at_b, cfg, 0), at_b)
        assert abs(se_at_beta(bc, b) - direct) < 1e-12


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(7)
    for _ in range(50):
        f_n, f_m = rng.uniform(0.5, 5.0, size=2)
        h_n = f_n * rng.uniform(0.0, 1.0)
        h_m = f_m
        q_n, q_m = rng.uniform(0.2, 2.0, size=2)
        co = _coeffs(f_n, h_n, q_n, f_m, h_m, q_m)
        x, y = rng.uniform(0.1, 0.45), rng.uniform(0.45, 0.8)

        def f(a, b):
            return cell_se(co, PowerAlloc(1.0, a, b, 0.0))

        exact = se_hessian_phi(co, x, y)
        approx = fd_hessian2(f, x, y, 1e-4)
        for i in range(2):
            for j in range(2):
                err = abs(exact[i][j] - approx[i][j])
                assert err < 1e-4 * max(1.0, abs(exact[i][j])), (exact, approx)
        assert exact[0][1] == exact[1][0]


def test_qos_report_flags_each_violation():
    cfg = SystemConfig()
    co = _coeffs(f_n=2.0, h_n=0.5, q_n=1.0, f_m=2.0, h_m=2.0, q_m=1.0)
    good = PowerAlloc(cfg.p_tot, 0.4, 0.6, 0.5)
    assert qos_satisfied(co, good, 0.5, cfg.p_tot).all_ok

    assert not qos_satisfied(co, PowerAlloc(cfg.p_tot, 0.6, 0.4, 0.5),
                             0.5, cfg.p_tot).z3_order
    assert not qos_satisfied(co, PowerAlloc(cfg.p_tot * 1.01, 0.4, 0.6, 0.5),
                             0.5, cfg.p_tot).z4_power
    assert not qos_satisfied(co, PowerAlloc(cfg.p_tot, 0.4, 0.7, 0.5),
                             0.5, cfg.p_tot).z5_split
    assert not qos_satisfied(co, PowerAlloc(cfg.p_tot, 0.4, 0.6, 1.2),
                             0.5, cfg.p_tot).z6_beta
    # an absurd rate floor trips both rate constraints
    report = qos_satisfied(co, good, 25.0, cfg.p_tot)
    assert not report.z1_rate_n and not report.z2_rate_m
    assert not report.all_ok


def test_qos_rate_checks_use_linear_form():
    """Right at the floor the linearized check accepts within tolerance."""
    cfg = SystemConfig()
    co = _coeffs(f_n=1.0, h_n=0.0, q_n=1.0, f_m=3.0, h_m=3.0, q_m=1.0)
    alloc = PowerAlloc(2.0, 0.5, 0.5, 0.0)
    g_n = sinr_n(co, alloc)
    r_req = math.log2(1.0 + g_n)  # Z1 exactly tight
    assert qos_satisfied(co, alloc, r_req, cfg.p_tot).z1_rate_n
