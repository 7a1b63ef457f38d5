import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezedho import factory
from squeezedho.analytic import (
    EOSqueezedDensityParams,
    compare_densities,
    d_squared,
    eo_squeezed_density,
    eo_squeezed_density_on_grid,
    fit_polynomial_ratio,
    fringe_period,
    normalization,
    polynomial_structure_check,
    s_of_r,
)
from squeezedho.factory import DegeneracyError, build_state, evolve
from squeezedho.fock import TruncationPolicy
from squeezedho.position import Grid, count_humps, density_on_grid, trapezoid
from squeezedho.verify import check_closed_form_oracle

POLICY = TruncationPolicy(n_max=128, guard_band=16)
GRID = Grid()


def test_s_of_r():
    assert s_of_r(0.0) == 1.0
    assert s_of_r(0.5) == pytest.approx(1.6487212707001282)
    assert s_of_r(-0.5) == s_of_r(0.5)


def test_d_squared():
    assert d_squared(0.0, 2.0) == pytest.approx(4.0)
    assert d_squared(math.pi / 2, 2.0) == pytest.approx(0.25)
    assert d_squared(0.8, 1.0) == pytest.approx(1.0)


def test_params_validation():
    with pytest.raises(ValueError):
        EOSqueezedDensityParams(-1.0, 0.2)
    with pytest.raises(ValueError):
        EOSqueezedDensityParams(1.0, -0.2)
    with pytest.raises(ValueError):
        EOSqueezedDensityParams(math.nan, 0.2)
    p = EOSqueezedDensityParams.from_alpha(2.0, 0.5, "odd")
    assert p.x0 == pytest.approx(2 * math.sqrt(2)) and p.parity == factory.Parity.ODD


def test_odd_density_vanishes_at_origin():
    p = EOSqueezedDensityParams.from_alpha(1.3, 0.4, "odd")
    for t in np.linspace(0, 2 * math.pi, 17):
        assert eo_squeezed_density(0.0, t, p) == pytest.approx(0.0, abs=1e-15)


def test_odd_degenerate_at_zero_displacement():
    with pytest.raises(DegeneracyError):
        normalization(0.0, EOSqueezedDensityParams(0.0, 0.3, "odd"))


def test_even_zero_displacement_no_squeeze_is_vacuum():
    p = EOSqueezedDensityParams(0.0, 0.0, "even")
    x = GRID.x
    np.testing.assert_allclose(eo_squeezed_density(x, 0.7, p), np.exp(-x * x) / math.sqrt(math.pi), atol=1e-15)


@pytest.mark.parametrize("parity", ["even", "odd"])
def test_matches_fock_pipeline(parity):
    alpha, r, t = 2.0, 0.5, 0.7
    p = EOSqueezedDensityParams.from_alpha(alpha, r, parity)
    ref = eo_squeezed_density_on_grid(GRID, t, p)
    num = density_on_grid(evolve(build_state("eo_squeezed", alpha, r, 0.0, 0, parity, policy=POLICY), t), GRID, t)
    cmp = compare_densities(ref, num, {"alpha": alpha})
    assert cmp["max_abs_diff"] < 1e-6
    assert cmp["l2_diff"] < 1e-6
    assert cmp["params"] == {"alpha": alpha}


def test_compare_rejects_mismatched_grids():
    p = EOSqueezedDensityParams(1.0, 0.0)
    with pytest.raises(ValueError):
        compare_densities(eo_squeezed_density_on_grid(GRID, 0, p), eo_squeezed_density_on_grid(Grid(-5, 5, 11), 0, p))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 4.0), st.floats(0.0, 1.2), st.sampled_from(["even", "odd"]), st.floats(0, 2 * math.pi))
def test_even_in_x_and_period_pi(x0, r, parity, t):
    p = EOSqueezedDensityParams(x0, r, parity)
    x = np.linspace(-6, 6, 121)
    a = eo_squeezed_density(x, t, p)
    np.testing.assert_allclose(a, a[::-1], atol=1e-12)
    np.testing.assert_allclose(eo_squeezed_density(x, t + math.pi, p), a, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 4.0), st.floats(0.0, 1.0), st.sampled_from(["even", "odd"]), st.floats(0, math.pi))
def test_normalization_against_quadrature(x0, r, parity, t):
    p = EOSqueezedDensityParams(x0, r, parity)
    g = Grid(-25.0, 25.0, 20001)
    assert trapezoid(eo_squeezed_density(g.x, t, p), g.dx) == pytest.approx(1.0, abs=1e-8)


def test_fringe_period():
    p = EOSqueezedDensityParams.from_alpha(2.0, 0.5)
    assert fringe_period(0.0, p) == math.inf
    s = p.s
    t = math.pi / 2
    assert fringe_period(t, p) == pytest.approx(math.pi * d_squared(t, s) * s**2 / p.x0)


def test_interference_emerges_at_quarter_period():
    p = EOSqueezedDensityParams.from_alpha(2.0, 0.5, "even")
    separated = eo_squeezed_density_on_grid(GRID, 0.0, p)
    overlapped = eo_squeezed_density_on_grid(GRID, math.pi / 2, p)
    assert count_humps(separated) == 2
    assert count_humps(overlapped) > 2


def test_polynomial_structure_vacuum():
    ref = build_state("squeezed_number", 1.0, 0.5, 0.0, 0, policy=POLICY)
    assert polynomial_structure_check(ref, ref, GRID, 0) < 1e-12


def test_polynomial_structure_first_excited():
    ref = build_state("squeezed_number", 1.0, 0.5, 0.0, 0, policy=POLICY)
    s = build_state("squeezed_number", 1.0, 0.5, 0.0, 1, policy=POLICY)
    fit = fit_polynomial_ratio(s, ref, GRID, 1)
    assert fit.residual < 1e-8
    # the linear factor vanishes at the packet centre sqrt2 alpha
    np.testing.assert_allclose(fit.roots.real, [math.sqrt(2)], atol=1e-6)
    assert polynomial_structure_check(s, ref, GRID, 0) > 0.1


def test_polynomial_structure_second_excited_evolved():
    t = 1.3
    ref = evolve(build_state("squeezed_number", 1.0 + 0.3j, 0.5, 0.4, 0, policy=POLICY), t)
    s = evolve(build_state("squeezed_number", 1.0 + 0.3j, 0.5, 0.4, 2, policy=POLICY), t)
    assert polynomial_structure_check(s, ref, GRID, 2) < 1e-8
    assert polynomial_structure_check(s, ref, GRID, 1) > 1e-3


@pytest.mark.parametrize("n", [1, 2])
def test_eo_squeezed_number_hump_count(n):
    g = Grid(-20.0, 20.0, 4001)
    for parity in ("even", "odd"):
        s = build_state("eo_squeezed_number", 5.0, 0.5, 0.0, n, parity, alpha_max=5.0)
        assert count_humps(density_on_grid(s, g)) == 2 * (n + 1)


def test_flipped_squeeze_sign_is_caught(monkeypatch):
    # the closed form fixes d(0)^2 = s^2, i.e. r > 0 widens x; the opposite
    # sign convention must make the oracle comparison fail
    assert check_closed_form_oracle()[0].passed
    monkeypatch.setattr(factory, "SQUEEZE_SIGN", -1)
    assert not check_closed_form_oracle()[0].passed


@pytest.mark.parametrize("n", [1, 3])
def test_odd_number_packets_share_a_node_at_quarter_period(n):
    # at t = pi/2 both half-packets of D+/- S|n> sit on the origin, where
    # H_n has a node for odd n; neither parity can then be nonzero there
    from squeezedho.verify import HUMP_GRID, eo_number_density

    mid = HUMP_GRID.n_points // 2
    for parity in ("even", "odd"):
        d = eo_number_density(n, factory.Parity.parse(parity), math.pi / 2)
        assert d.values[mid] < 1e-20 * d.peak()
