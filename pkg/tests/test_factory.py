import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezedho import factory, position
from squeezedho.factory import (
    DegeneracyError,
    Parity,
    build_state,
    displace,
    eo_displace,
    evolve,
    nonunitarity_witness,
    squeeze,
)
from squeezedho.fock import (
    FockDomainError,
    TruncationError,
    TruncationPolicy,
    apply_lowering,
    apply_parity,
    inner,
    number_state,
    vacuum,
)
from squeezedho.observables import quadratic_ladder_residual, quadrature_moments

from .oracles import coherent_coeffs, dense_displacement, dense_squeeze

ORACLE_POLICY = TruncationPolicy(n_max=128, guard_band=16)
TOL = TruncationPolicy().tail_tolerance


def random_state(rng, n_support=12, policy=None):
    policy = policy or TruncationPolicy()
    c = np.zeros(policy.dim, complex)
    c[:n_support] = rng.normal(size=n_support) + 1j * rng.normal(size=n_support)
    return number_state(0, policy).with_coeffs(c / np.linalg.norm(c))


def _assert_matches_oracle(got, ref, policy=ORACLE_POLICY):
    # truncation is audited in probability mass: amplitudes inside the guard
    # band may differ, but only by a negligible amount of mass
    low = policy.n_max - policy.guard_band
    np.testing.assert_allclose(got[:low], ref[:low], rtol=0, atol=1e-11)
    assert np.sum(np.abs(got - ref) ** 2) < policy.tail_tolerance


def test_displace_identity():
    assert displace(vacuum(), 0).coeffs[0] == 1


def test_displace_vacuum_alpha_one(backend):
    s = displace(vacuum(ORACLE_POLICY), 1.0)
    # oracle values: dense expm and e^{-1/2}, both 0.6065306597126334
    assert s.coeffs[0].real == pytest.approx(0.6065306597126334, abs=1e-14)
    np.testing.assert_allclose(s.coeffs, coherent_coeffs(1.0, ORACLE_POLICY.dim), atol=1e-14)


@pytest.mark.parametrize("alpha", [0.3 + 0.4j, -1.2j, 2.0 - 1.0j])
def test_displace_matches_dense_expm(alpha, backend, rng):
    s = random_state(rng, policy=ORACLE_POLICY)
    # dense oracle on a larger space so its own truncation is irrelevant
    big = np.zeros(200, complex)
    big[: ORACLE_POLICY.dim] = s.coeffs
    ref = dense_displacement(alpha, 200) @ big
    _assert_matches_oracle(displace(s, alpha).coeffs, ref[: ORACLE_POLICY.dim])


def test_displace_inverse():
    s = displace(displace(vacuum(), 1.7 - 0.4j), -(1.7 - 0.4j))
    np.testing.assert_allclose(s.coeffs, vacuum().coeffs, atol=1e-10)


def test_displace_truncation_is_an_error():
    tight = TruncationPolicy(n_max=24, guard_band=4)
    with pytest.raises(TruncationError, match="displace"):
        displace(vacuum(tight), 3.0)


def test_default_truncation_envelope():
    # n_max=256 holds |r| <= 1.3 at |alpha| = 3 but not the r = 1.5 corner
    build_state("squeezed_coherent", 3.0, 1.3)
    with pytest.raises(TruncationError):
        build_state("squeezed_coherent", 3.0, 1.5)
    wide = TruncationPolicy(n_max=512)
    s = build_state("squeezed_coherent", 3.0, 1.5, policy=wide)
    assert s.norm_sq() == pytest.approx(1.0, abs=1e-11)


def test_displace_requires_normalized_input():
    s = vacuum().with_coeffs(2 * vacuum().coeffs)
    with pytest.raises(FockDomainError):
        displace(s, 0.5)


def test_squeeze_identity():
    assert squeeze(vacuum(), 0.0).coeffs[0] == 1


def test_squeeze_convention_widens_x():
    rep = quadrature_moments(squeeze(vacuum(), 0.5))
    # frozen from the dense-expm oracle: e/2 = 1.3591409142295225
    assert rep.var_x == pytest.approx(1.3591409142295225, rel=1e-12)
    assert rep.var_p == pytest.approx(0.5 / math.e, rel=1e-12)
    assert "widens x" in factory.SQUEEZE_CONVENTION


def test_squeeze_sign_mutation_narrows_x(monkeypatch):
    monkeypatch.setattr(factory, "SQUEEZE_SIGN", -1)
    rep = quadrature_moments(squeeze(vacuum(), 0.5))
    assert rep.var_x == pytest.approx(0.5 / math.e, rel=1e-12)


@pytest.mark.parametrize("r", [-1.5, -0.3, 0.7, 1.5])
def test_squeezed_vacuum_has_even_support(r):
    s = squeeze(vacuum(), r, 0.4)
    assert np.abs(s.coeffs[1::2]).max() < 1e-14


@pytest.mark.parametrize("r,phi", [(0.5, 0.0), (-0.6, 1.1), (0.9, 2.5)])
def test_squeeze_matches_dense_expm(r, phi, backend, rng):
    policy = TruncationPolicy(n_max=200, guard_band=16)
    s = random_state(rng, n_support=6, policy=policy)
    big = np.zeros(400, complex)
    big[: policy.dim] = s.coeffs
    ref = dense_squeeze(r * np.exp(1j * phi), 400) @ big
    _assert_matches_oracle(squeeze(s, r, phi).coeffs, ref[: policy.dim], policy)


def test_evolve_examples(rng):
    s = random_state(rng)
    np.testing.assert_array_equal(evolve(s, 0.0).coeffs, s.coeffs)
    t = 0.83
    out = evolve(number_state(4), t)
    assert out.coeffs[4] == pytest.approx(np.exp(-1j * t * 4.5), abs=1e-15)
    np.testing.assert_allclose(evolve(s, 2 * math.pi).coeffs, -s.coeffs, atol=1e-12)
    assert evolve(s, 1.234).norm_sq() == pytest.approx(s.norm_sq(), abs=1e-15)


def test_eo_displace_zero_alpha():
    even = eo_displace(vacuum(), 0.0, Parity.EVEN)
    np.testing.assert_allclose(even.state.coeffs, vacuum().coeffs, atol=1e-15)
    assert even.normalization == pytest.approx(0.5)
    with pytest.raises(DegeneracyError):
        eo_displace(vacuum(), 0.0, Parity.ODD)


def test_eo_displace_raw_norm():
    proj = eo_displace(vacuum(), 1.0, "even")
    # 2 + 2 e^{-2}: explicit coefficient sum and <0|D(-2)|0>
    assert proj.raw_norm_sq == pytest.approx(2.2706705664732256, abs=1e-12)
    assert proj.normalization == pytest.approx(1 / math.sqrt(proj.raw_norm_sq))
    assert proj.state.norm_sq() == pytest.approx(1.0, abs=1e-14)


def test_nonunitarity_witness():
    w0, w1 = nonunitarity_witness(1.0, Parity.EVEN)
    # frozen from dense expm at n_max=128: (2.2706705664732256, 1.1879883005803231);
    # closed form 2 + 2 e^{-2|a|^2} (1 - 4|a|^2) for the second
    assert w0 == pytest.approx(2.2706705664732256, abs=1e-12)
    assert w1 == pytest.approx(1.1879883005803231, abs=1e-12)
    assert w1 == pytest.approx(2 - 6 * math.exp(-2), abs=1e-12)
    assert abs(w0 - w1) > 0.1
    with pytest.raises(FockDomainError):
        nonunitarity_witness(0.0, Parity.EVEN)


def test_build_state_coherent_zero():
    s = build_state("coherent", 0.0)
    np.testing.assert_array_equal(s.coeffs, vacuum().coeffs)


def _parity_expectation(s):
    return inner(s, apply_parity(s))


def test_build_state_parity_of_eo_squeezed():
    s = build_state("eo_squeezed", 2.0, 0.5, 0.0, 0, Parity.EVEN)
    assert _parity_expectation(s) == pytest.approx(1.0, abs=1e-10)
    s = build_state("eo_squeezed", 2.0, 0.5, 0.0, 0, Parity.ODD)
    assert _parity_expectation(s) == pytest.approx(-1.0, abs=1e-10)


def test_build_state_parity_of_eo_squeezed_number():
    # Pi D+/-(a) S(z)|n> = +/- (-1)^n D+/-(a) S(z)|n>
    s = build_state("eo_squeezed_number", 1.5, 0.4, 0.3, 1, Parity.ODD)
    assert _parity_expectation(s) == pytest.approx(1.0, abs=1e-10)
    s = build_state("eo_squeezed_number", 1.5, 0.4, 0.3, 1, Parity.EVEN)
    assert _parity_expectation(s) == pytest.approx(-1.0, abs=1e-10)


def test_build_state_normalization_report():
    s, factor = build_state("cat", 1.0, parity="even", with_normalization=True)
    assert factor == pytest.approx(1 / math.sqrt(2.2706705664732256))
    _, factor = build_state("coherent", 1.0, with_normalization=True)
    assert factor is None


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="coherent", alpha=3.5),
        dict(kind="squeezed_coherent", r=1.6),
        dict(kind="squeezed_number", n=65),
        dict(kind="cat", alpha=1.0, n=2),
    ],
)
def test_build_state_range_checks(kwargs):
    with pytest.raises(FockDomainError):
        build_state(**kwargs)


def test_build_state_unknown_kind():
    with pytest.raises(ValueError):
        build_state("thermal")


def test_build_state_order_is_displace_after_squeeze():
    s = build_state("squeezed_coherent", 1.0, 0.5, 0.0)
    manual = displace(squeeze(vacuum(), 0.5), 1.0)
    np.testing.assert_array_equal(s.coeffs, manual.coeffs)
    other_order = squeeze(displace(vacuum(), 1.0), 0.5)
    assert abs(inner(s, other_order)) < 0.99


alphas = st.builds(
    lambda m, a: m * np.exp(1j * a),
    st.floats(0.0, 3.0),
    st.floats(0.0, 2 * math.pi),
)


@settings(max_examples=15, deadline=None)
@given(alpha=alphas, r=st.floats(-1.3, 1.3), phi=st.floats(0, 2 * math.pi), t=st.floats(0, 10))
def test_unitarity(alpha, r, phi, t):
    s = squeeze(vacuum(), r, phi)
    assert abs(s.norm_sq() - 1) < 10 * TOL
    s = displace(s, alpha)
    assert abs(s.norm_sq() - 1) < 10 * TOL
    assert abs(evolve(s, t).norm_sq() - 1) < 10 * TOL


@settings(max_examples=15, deadline=None)
@given(a=alphas, b=alphas)
def test_displacement_group_composition(a, b):
    if abs(a + b) > 3.0:
        return
    s = vacuum()
    left = displace(displace(s, b), a)
    right = displace(s, a + b)
    assert abs(inner(left, right)) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=15, deadline=None)
@given(alpha=alphas, seed=st.integers(0, 2**32 - 1))
def test_parity_covariance_of_displacement(alpha, seed):
    s = random_state(np.random.default_rng(seed))
    lhs = apply_parity(displace(s, alpha))
    rhs = displace(apply_parity(s), -alpha)
    np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, atol=1e-10)


@settings(max_examples=15, deadline=None)
@given(r=st.floats(-1.0, 1.0), phi=st.floats(0, 2 * math.pi), seed=st.integers(0, 2**32 - 1))
def test_parity_commutes_with_squeeze(r, phi, seed):
    s = random_state(np.random.default_rng(seed), n_support=6)
    np.testing.assert_allclose(
        apply_parity(squeeze(s, r, phi)).coeffs, squeeze(apply_parity(s), r, phi).coeffs, atol=1e-10
    )


@pytest.mark.parametrize(
    "kind,n,parity",
    [("cat", 0, "odd"), ("eo_squeezed", 0, "even"), ("eo_squeezed_number", 2, "odd")],
)
def test_pure_parity_density_has_period_pi(kind, n, parity):
    s = build_state(kind, 1.3 - 0.6j, 0.0 if kind == "cat" else 0.5, 0.2, n, parity)
    grid = position.Grid(-10, 10, 801)
    times = [0.3, 0.3 + math.pi, 1.9, 1.9 + math.pi]
    rho = [d.values for d in position.density_surface(s, grid, times)]
    assert np.max(np.abs(rho[0] - rho[1])) < 1e-9
    assert np.max(np.abs(rho[2] - rho[3])) < 1e-9


@pytest.mark.parametrize("alpha", [0.4, 1.0 + 1.0j, -2.0, 1.4j])
def test_coherent_state_is_lowering_eigenstate(alpha):
    c = factory.coherent(alpha)
    resid = apply_lowering(c).coeffs - alpha * c.coeffs
    assert np.linalg.norm(resid) < 1e-8


@pytest.mark.parametrize("alpha", [0.5, 1.0 - 0.5j, 2.0])
@pytest.mark.parametrize("parity", list(Parity))
def test_cat_state_is_aa_eigenstate(alpha, parity):
    rep = quadratic_ladder_residual(factory.cat(alpha, parity), 1.0, 0.0, beta=alpha**2)
    assert rep.residual_norm < 1e-8
