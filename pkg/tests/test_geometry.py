import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revscatter.errors import InvalidInput
from revscatter.geometry import (Potential, RadiusProfile, TransversalMode, check_mode_order,
                                 check_support_lemma, derive_radius, mean_offset, reduce_potential,
                                 riccati_forward, vanishes_near_end)
from revscatter.numerics import Grid
from revscatter.riccati import SineSeries, random_series, two_sided_bound


def bowl(x):
    """r = 1 + (x-1)^2/2 (r(0) = 1.5 > r_o = 1) and its derivative."""
    return 1 + 0.5 * (x - 1) ** 2, x - 1


def bowl_profile(grid_n=10_000):
    return RadiusProfile.from_radius(lambda x: bowl(x)[0], lambda x: bowl(x)[1], m=2, grid_n=grid_n)


# ------------------------------------------------------------ validation
@pytest.mark.parametrize("kw", [dict(m=0, r_o=1.0), dict(m=1.5, r_o=1.0), dict(m=2, r_o=-1.0)])
def test_profile_rejects_bad_parameters(kw):
    with pytest.raises(InvalidInput):
        RadiusProfile(grid_n=4, q_samples=np.zeros(5), **kw)


def test_profile_rejects_nonzero_end_and_length():
    with pytest.raises(InvalidInput, match="q\\(1\\)"):
        RadiusProfile(2, 1.0, 4, q_samples=[0, 0, 0, 0, 0.1])
    with pytest.raises(InvalidInput, match="entries"):
        RadiusProfile(2, 1.0, 4, q_samples=np.zeros(4))
    with pytest.raises(InvalidInput, match="exactly one"):
        RadiusProfile(2, 1.0, 4)


def test_mode_validation():
    with pytest.raises(InvalidInput):
        TransversalMode(0, 1.0)
    with pytest.raises(InvalidInput):
        TransversalMode(1, -1.0)
    assert TransversalMode(2, 8.0).u0(2.0) == 2.0
    check_mode_order([TransversalMode(1, 1.0), TransversalMode(2, 3.0)])
    with pytest.raises(InvalidInput):
        check_mode_order([TransversalMode(1, 3.0), TransversalMode(2, 1.0)])


def test_potential_validation_and_evaluation():
    with pytest.raises(InvalidInput):
        Potential([0.0, np.nan, 0.0])
    with pytest.raises(InvalidInput):
        Potential(np.zeros(3), Grid(0.0, 2.0, 2))
    p = Potential([1.0, 2.0, 3.0])
    assert np.allclose(p([-0.5, 0.25, 1.0, 1.5]), [0.0, 1.5, 3.0, 0.0])
    assert p.l1_norm() == pytest.approx(2.0)
    assert Potential.zero().is_zero


# --------------------------------------------------------------- radius
@pytest.mark.parametrize("m", [1, 2, 3])
def test_zero_profile_gives_constant_radius(m):
    Q, r, rho = derive_radius(RadiusProfile.zero(m, r_o=1.7))
    assert np.all(Q == 0) and np.all(r == 1.7) and np.allclose(rho, 1.7 ** (m / 2))


def test_bowl_radius_recovered():
    prof = bowl_profile()
    _, r, _ = derive_radius(prof)
    assert np.max(np.abs(r - bowl(prof.x)[0])) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=8), st.integers(1, 4),
       st.floats(0.2, 5.0))
def test_radius_end_value_and_positivity(coeffs, m, r_o):
    prof = RadiusProfile.from_sine(coeffs, m, r_o, grid_n=1024)
    _, r, _ = derive_radius(prof)
    assert r[-1] == r_o and np.all(r > 0)
    # sampled and series representations agree
    samp = RadiusProfile(m, r_o, 1024, q_samples=np.where(np.arange(1025) == 1024, 0.0, prof.q()))
    assert np.allclose(derive_radius(samp)[1], r, rtol=1e-4)


def test_radius_exponent_scaling():
    q = [0.2, -0.1, 0.05]
    _, r2, _ = derive_radius(RadiusProfile.from_sine(q, 2))
    _, r3, _ = derive_radius(RadiusProfile.from_sine(q, 3))
    assert np.allclose(np.log(r3), np.log(r2) * 2 / 3, atol=1e-14)


# ------------------------------------------------------------ potential
def test_zero_profile_gives_zero_potential():
    p = reduce_potential(RadiusProfile.zero(), TransversalMode(1, 5.0))
    assert p.is_zero


def test_bowl_end_value():
    prof = bowl_profile()
    p = reduce_potential(prof, TransversalMode(1, 0.0))
    assert p.samples[-1] == pytest.approx(1.0, abs=1e-6)


def test_bowl_closed_form_potential():
    prof = bowl_profile()
    E, m = 100.0, 2
    p = reduce_potential(prof, TransversalMode(1, E))
    r, _ = bowl(prof.x)
    q = (prof.x - 1) / r
    expected = m / 2 - ((r + 2 - m) / m) * q ** 2 - 2 * E * ((1 + r) / m ** 2) * q ** 2
    assert np.max(np.abs(p.samples - expected)) <= 1e-6


def test_potential_equals_image_plus_offset():
    prof = RadiusProfile.from_sine([0.0, 0.3, 0.1], m=3, r_o=1.3)
    u0 = 2.0
    p = reduce_potential(prof, TransversalMode(1, u0 * prof.r_o ** 2))
    img = riccati_forward(prof, u0)
    assert np.max(np.abs(p.samples - (img.v + mean_offset(prof, u0)))) <= 1e-9


# -------------------------------------------------------------- riccati
def test_riccati_forward_zero():
    img = riccati_forward(RadiusProfile.zero(), 1.5)
    assert np.max(np.abs(img.v)) <= 1e-12 and img.c0 == pytest.approx(1.5)


def test_riccati_forward_mean_zero_and_bounds():
    prof = RadiusProfile.from_sine([0.0, 0.3])
    img = riccati_forward(prof, 1.0)
    assert abs(img.mean()) <= 1e-10
    b = two_sided_bound(SineSeries([0.0, 0.3]), 1.0, 2.0)
    assert b.lower_ok and b.upper_ok


def test_riccati_forward_rejects_bad_constants():
    with pytest.raises(InvalidInput):
        riccati_forward(RadiusProfile.zero(), 0.0)


def test_bounds_for_random_profiles():
    rng = np.random.default_rng(7)
    for _ in range(100):
        b = two_sided_bound(random_series(rng), 1.0, 2.0)
        assert b.lower_ok and b.upper_ok


# -------------------------------------------------------- support lemma
def test_support_lemma_zero_profile():
    assert check_support_lemma(riccati_forward(RadiusProfile.zero(), 1.0), 0.3)


def test_support_lemma_bump():
    bump = lambda x: np.where((x > 0.2) & (x < 0.8), np.sin(np.pi * (x - 0.2) / 0.6) ** 2, 0.0)
    prof = RadiusProfile.from_function(bump, grid_n=4000)
    img = riccati_forward(prof, 1.0)
    assert check_support_lemma(img, 0.3)
    # the residual q' + q^2 + u - u0 near 1 is u0 (e^{-beta Q} - 1) = 0 there since Q(x) = 0
    assert vanishes_near_end(img.v + img.c0 - img.u0, img.grid, 0.15, atol=1e-12)


def test_support_lemma_full_support():
    prof = RadiusProfile.from_function(lambda x: x * (1 - x), grid_n=4000)
    p = reduce_potential(prof, TransversalMode(1, 1.0))
    for tau in (0.2, 0.05, 0.01):
        assert not vanishes_near_end(p.samples, p.grid, tau, atol=1e-12)
