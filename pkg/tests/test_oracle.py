"""Independent-route machinery: bisection root finder, finite differences,
the projected stationarity measure and the exhaustive grid scan."""

import math

import numpy as np
import pytest

from noma_bc.channel import ChannelRealization, generate_topology, \
    sample_channels
from noma_bc.config import SystemConfig
from noma_bc.oracle import _HAVE_NUMBA, bisection_roots, fd_derivative, \
    fd_hessian2, fd_second_derivative, grid_search, kkt_residual
from noma_bc.power_dual import DualState
from noma_bc.sinr import PowerAlloc, cell_se, rate_coeffs

ZERO_DUAL = DualState(0.0, 0.0, 0.0, 0.0, 0)


# ---------------------------------------------------------------------------
# bisection root finder


def test_bisection_known_quartic():
    got = bisection_roots([24.0, -50.0, 35.0, -10.0, 1.0])
    assert np.allclose(got, [1.0, 2.0, 3.0, 4.0], atol=1e-9)


def test_bisection_simple_cases():
    assert np.allclose(bisection_roots([-4.0, 0.0, 1.0]), [-2.0, 2.0])
    assert bisection_roots([1.0, 0.0, 1.0]) == []          # x^2 + 1
    assert np.allclose(bisection_roots([3.0, -1.5]), [2.0])


def test_bisection_even_multiplicity_via_derivative_marks():
    # (x - 2)^2 (x + 1): no sign change at 2, but the derivative root lands
    # exactly on it
    got = bisection_roots([4.0, 0.0, -3.0, 1.0])
    assert len(got) == 2
    assert abs(got[0] + 1.0) < 1e-9
    assert abs(got[1] - 2.0) < 1e-6


def test_bisection_rejects_zero_polynomial():
    with pytest.raises(ValueError):
        bisection_roots([0.0, 0.0, 0.0])


# ---------------------------------------------------------------------------
# finite differences


def test_fd_first_derivative():
    assert abs(fd_derivative(math.exp, 0.0) - 1.0) < 1e-9
    assert abs(fd_derivative(lambda x: x ** 3, 2.0) - 12.0) < 1e-6


def test_fd_second_derivative():
    assert abs(fd_second_derivative(lambda x: x ** 3, 1.0) - 6.0) < 1e-5
    assert abs(fd_second_derivative(math.cos, 0.0) + 1.0) < 1e-6


def test_fd_hessian_on_polynomial():
    f = lambda x, y: x * x * y + y ** 3  # noqa: E731
    (d11, d12), (d21, d22) = fd_hessian2(f, 1.5, 2.0)
    assert abs(d11 - 4.0) < 1e-5   # 2y
    assert abs(d12 - 3.0) < 1e-5   # 2x
    assert d12 == d21
    assert abs(d22 - 12.0) < 1e-4  # 6y


# ---------------------------------------------------------------------------
# projected stationarity measure


def _corner_instance():
    """Hand-built single cell where the sum rate still climbs in both phi
    and P at the (0.5, p_tot) corner: huge strong gain, no SIC residue."""
    j = 1
    real = ChannelRealization(
        gain_n=np.array([100.0]), gain_m=np.array([1.0]),
        bs_to_bd=np.zeros(j), bd_to_n=np.zeros(j), bd_to_m=np.zeros(j),
        cross_n=np.zeros((j, j)), cross_m=np.zeros((j, j)),
        interference_n=np.zeros(j), interference_m=np.zeros(j))
    cfg = SystemConfig(num_cells=1, sic_error=0.0, r_req=0.05)
    return real, cfg


def test_residual_vanishes_at_blocked_corner():
    real, cfg = _corner_instance()
    corner = PowerAlloc(cfg.p_tot, 0.5, 0.5, 0.0)
    co = rate_coeffs(real, corner, cfg, 0)
    assert fd_derivative(
        lambda x: cell_se(co, PowerAlloc(cfg.p_tot, x, 1.0 - x, 0.0)),
        0.5 - 1e-4) > 0.0
    assert kkt_residual(real, corner, ZERO_DUAL, cfg, 0) == 0.0


def test_residual_sees_interior_power_gap():
    real, cfg = _corner_instance()
    inside = PowerAlloc(cfg.p_tot / 2.0, 0.5, 0.5, 0.0)
    assert kkt_residual(real, inside, ZERO_DUAL, cfg, 0) > 1e-4


# ---------------------------------------------------------------------------
# grid scan


def _instance(seed):
    cfg = SystemConfig(num_cells=1)
    rng = np.random.default_rng(seed)
    return sample_channels(generate_topology(cfg, rng), cfg, rng), cfg


def test_grid_reports_consistent_se():
    real, cfg = _instance(0)
    g = grid_search(real, cfg, n_phi=120, n_p=200, n_beta=51,
                    use_numba=False)
    assert g.found and g.bound > 0.0
    redo = cell_se(rate_coeffs(real, g.alloc, cfg, 0), g.alloc)
    assert abs(redo - g.se) < 1e-9 * max(1.0, g.se)
    assert 0.0 < g.alloc.phi_n <= 0.5
    assert 0.0 < g.alloc.p <= cfg.p_tot
    assert 0.0 <= g.alloc.beta <= 1.0


@pytest.mark.skipif(not _HAVE_NUMBA, reason="no jit available")
def test_grid_kernel_and_fallback_agree():
    for seed in (1, 5, 8):
        real, cfg = _instance(seed)
        a = grid_search(real, cfg, n_phi=80, n_p=120, n_beta=41,
                        use_numba=True)
        b = grid_search(real, cfg, n_phi=80, n_p=120, n_beta=41,
                        use_numba=False)
        assert a.found == b.found
        if a.found:
            # float32 scoring may settle a near-tie one grid step away, so
            # agreement is up to the granularity allowance
            assert abs(a.se - b.se) <= max(a.bound, b.bound), seed


def test_grid_flags_conflicting_floors():
    real, cfg = _instance(3)
    hard = SystemConfig(num_cells=1, r_req=25.0)
    g = grid_search(real, hard, n_phi=60, n_p=80, n_beta=11,
                    use_numba=False)
    assert not g.found
    assert g.alloc is None and g.se == 0.0
