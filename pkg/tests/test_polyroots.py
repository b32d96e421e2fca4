"""Closed-form root finding: frozen cases, stability cases, and a randomized
cross-check against sign-change bisection."""

import math

import mpmath as mp
import numpy as np
import pytest

from noma_bc.oracle import bisection_roots
from noma_bc.polyroots import quadratic_roots, real_roots


def _poly_eval(coeffs, x):
    val = 0.0
    for c in reversed(coeffs):
        val = val * x + c
    return val


def test_quadratic_simple():
    roots = quadratic_roots(1.0, 0.0, -4.0)
    assert np.allclose(sorted(roots), [-2.0, 2.0])


def test_quadratic_degenerates_to_linear():
    assert quadratic_roots(0.0, 2.0, -1.0) == [0.5]


def test_quadratic_all_zero_rejected():
    with pytest.raises(ValueError):
        quadratic_roots(0.0, 0.0, 0.0)


def test_quadratic_catastrophic_cancellation():
    """x^2 - 1e8 x + 1: the naive formula loses the small root entirely."""
    roots = sorted(quadratic_roots(1.0, -1e8, 1.0))
    with mp.workdps(50):
        disc = mp.sqrt(mp.mpf(1e8) ** 2 - 4)
        want = sorted([float((mp.mpf(1e8) - disc) / 2),
                       float((mp.mpf(1e8) + disc) / 2)])
    for got, ref in zip(roots, want):
        assert abs(got - ref) < 1e-10 * max(1.0, abs(ref))


def test_depressed_quartic_pair():
    # 1 - x^2 (ascending coefficients; the two high zeros trim away)
    roots = sorted(real_roots([1.0, 0.0, -1.0, 0.0, 0.0]))
    assert np.allclose(roots, [-1.0, 1.0])


def test_pure_quartic_single_root():
    assert real_roots([0.0, 0.0, 0.0, 0.0, 1.0]) == [0.0]


def test_factored_quartic():
    # (x-1)(x-2)(x-3)(x-4)
    roots = sorted(real_roots([24.0, -50.0, 35.0, -10.0, 1.0]))
    assert np.allclose(roots, [1.0, 2.0, 3.0, 4.0], atol=1e-9)


def test_cubic_with_triple_structure():
    # (x-2)^2 (x+1) = x^3 - 3x^2 + 4
    roots = sorted(real_roots([4.0, 0.0, -3.0, 1.0]))
    assert any(abs(r + 1.0) < 1e-8 for r in roots)
    assert any(abs(r - 2.0) < 1e-6 for r in roots)


def test_degree_cap():
    with pytest.raises(ValueError):
        real_roots([1.0, 1.0, 1.0, 1.0, 1.0, 1.0])


def test_random_polys_match_bisection():
    rng = np.random.default_rng(41)
    for k in range(400):
        deg = 2 + k % 3
        coeffs = rng.uniform(-1e3, 1e3, size=deg + 1)
        got = real_roots(coeffs)
        want = bisection_roots(coeffs)
        for r in want:
            assert min((abs(r - g) for g in got), default=math.inf) \
                <= 1e-7 * max(1.0, abs(r)), (coeffs, got, want)


def test_random_roots_have_tiny_residuals():
    rng = np.random.default_rng(43)
    for k in range(400):
        deg = 2 + k % 3
        coeffs = rng.uniform(-1e3, 1e3, size=deg + 1)
        for root in real_roots(coeffs):
            scale = max(1.0, max(abs(c * root ** i)
                                 for i, c in enumerate(coeffs)))
            assert abs(_poly_eval(coeffs, root)) <= 1e-8 * scale
