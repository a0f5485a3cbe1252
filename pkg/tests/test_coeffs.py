import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvreservoir.coeffs import (
    CoeffMethod,
    CoefficientSet,
    Truncation,
    cancellation_digits,
    closed_coefficients,
    coeff_oracle,
    compute_coefficients,
    default_grid,
    integrate_big_gamma,
    oracle_series,
    printed_coefficients,
    secular_integrals,
    subohmic_delta_highT_erf,
    write_coefficients_csv,
)
from cvreservoir._io import read_csv
from cvreservoir.errors import DomainError, GridError, ResolutionError
from cvreservoir.spectral import BoseEinstein, Family, HighT, ReservoirSpec, ZeroT

# (family, temperature, x, tau, (Delta, Pi, gamma)) from nested adaptive quadrature
ORACLE_FROZEN = [
    (Family.OHMIC, HighT(100.0), 10.0, 1.3, (1.8263553022984744, 0.09883743684209273, 0.0004312663402953531)),
    (Family.SUBOHMIC, ZeroT(), 0.3, 2.7, (0.0009677770517429507, 0.0029873143488365534, 0.0014536555614372358)),
    (Family.SUPEROHMIC, HighT(100.0), 1.0, 0.4, (1.1654583051558516, 0.19757836460154185, 0.0032326594939142495)),
    (Family.SUPEROHMIC, ZeroT(), 0.1, 4.1, (0.0007120672353708053, 0.007929265496898848, 0.000697817250966276)),
]

TEMPS = [HighT(100.0), ZeroT()]


def spec(fam=Family.OHMIC, x=1.0, alpha=0.1, temp=ZeroT()):
    return ReservoirSpec(fam, x, alpha, temp)


@pytest.mark.parametrize("fam, temp, x, tau, ref", ORACLE_FROZEN)
def test_closed_matches_frozen_oracle(fam, temp, x, tau, ref):
    got = closed_coefficients(spec(fam, x, 0.1, temp), tau)
    np.testing.assert_allclose(got, ref, rtol=1e-9)


@pytest.mark.parametrize("fam", list(Family))
@pytest.mark.parametrize("temp", TEMPS)
def test_closed_matches_live_oracle(fam, temp):
    s = spec(fam, 0.5, 0.1, temp)
    tau = np.array([0.05, 0.9, 3.3])
    d, p, g = closed_coefficients(s, tau)
    for i, t in enumerate(tau):
        assert d[i] == pytest.approx(coeff_oracle(s, t, "delta"), rel=1e-8, abs=1e-13)
        assert p[i] == pytest.approx(coeff_oracle(s, t, "pi"), rel=1e-8, abs=1e-13)
        assert g[i] == pytest.approx(coeff_oracle(s, t, "gamma"), rel=1e-8, abs=1e-13)


def test_oracle_series_matches_pointwise():
    s = spec(Family.SUBOHMIC, 2.0, 0.1, HighT(50.0))
    grid = np.linspace(0.0, 2.0, 6)
    series = oracle_series(s, grid, "gamma")
    for t, v in zip(grid, series):
        assert v == pytest.approx(coeff_oracle(s, t, "gamma"), rel=1e-9, abs=1e-15)


@pytest.mark.parametrize("fam", list(Family))
@pytest.mark.parametrize("temp", TEMPS)
def test_markov_plateau_values(fam, temp):
    # gamma(inf) = a2 pi/2 J(w0), Delta(inf) = a2 pi/2 J(w0) (2N(w0) + 1)
    x = 1.0
    s = spec(fam, x, 0.1, temp)
    w0 = 1.0 / x
    j = w0**fam.s * math.exp(-w0)
    th = 2 * 100.0 / w0 if isinstance(temp, HighT) else 1.0
    # The approach is algebraic; the sub-Ohmic high-T Delta tail decays only
    # like tau**-0.5, so that case is probed much later.
    tol = {Family.SUPEROHMIC: 1e-6, Family.OHMIC: 1e-4, Family.SUBOHMIC: 2e-2}[fam]
    tau = 2e4 if fam is Family.SUBOHMIC and isinstance(temp, HighT) else 200.0
    d, _, g = closed_coefficients(s, tau)
    assert g == pytest.approx(0.01 * math.pi / 2 * j, rel=tol)
    assert d == pytest.approx(0.01 * math.pi / 2 * j * th, rel=tol)


@pytest.mark.parametrize("fam", list(Family))
def test_values_vanish_at_origin(fam):
    d, p, g = closed_coefficients(spec(fam), np.array([0.0, 0.1]))
    assert d[0] == p[0] == g[0] == 0.0
    assert coeff_oracle(spec(fam), 0.0, "pi") == 0.0


@settings(max_examples=25, deadline=None)
@pytest.mark.filterwarnings("ignore:alpha=")
@given(
    st.sampled_from(list(Family)),
    st.sampled_from(TEMPS),
    st.floats(0.05, 20.0),
    st.floats(0.01, 0.5),
    st.floats(0.0, 10.0),
)
def test_alpha_squared_scaling(fam, temp, x, alpha, tau):
    base = closed_coefficients(spec(fam, x, 0.1, temp), tau)
    scaled = closed_coefficients(spec(fam, x, alpha, temp), tau)
    for b, v in zip(base, scaled):
        assert v == pytest.approx(b * (alpha / 0.1) ** 2, rel=1e-14, abs=1e-300)


def test_short_time_growth_is_positive():
    # all three start linearly or faster with positive slope at high T
    for fam in Family:
        d, p, g = closed_coefficients(spec(fam, 1.0, 0.1, HighT(100.0)), np.array([1e-3, 2e-3]))
        assert np.all(d > 0) and np.all(g > 0) and np.all(p > 0)


def test_delta_goes_negative_for_small_x():
    d, _, _ = closed_coefficients(spec(Family.OHMIC, 0.15, 0.1, HighT(100.0)), np.linspace(0, 5, 501))
    assert d.min() < 0


@pytest.mark.parametrize("fam", [Family.OHMIC, Family.SUPEROHMIC])
@pytest.mark.parametrize("temp", TEMPS)
def test_printed_forms_agree_where_conditioned(fam, temp):
    s = spec(fam, 2.0, 0.1, temp)
    tau = np.linspace(0.1, 6.0, 15)
    a = closed_coefficients(s, tau)
    b = printed_coefficients(s, tau)
    for u, v in zip(a, b):
        np.testing.assert_allclose(u, v, rtol=1e-10, atol=1e-16)


def test_subohmic_erf_delta():
    s = spec(Family.SUBOHMIC, 0.7, 0.1, HighT(100.0))
    tau = np.linspace(0.05, 5.0, 12)
    np.testing.assert_allclose(subohmic_delta_highT_erf(s, tau), closed_coefficients(s, tau)[0], rtol=1e-12)


def test_cancellation_estimate():
    s = spec(Family.OHMIC, 0.1)
    assert cancellation_digits(s) == 0.0
    assert cancellation_digits(s, "printed") == pytest.approx(2 * math.log10(math.e) / 0.1)


def test_closed_rejects_nonlimit_temperature():
    with pytest.raises(DomainError):
        closed_coefficients(spec(temp=BoseEinstein(5.0)), 1.0)


def test_fallback_to_oracle_is_recorded():
    s = spec(Family.OHMIC, 1.0, 0.1, BoseEinstein(5.0))
    cs = compute_coefficients(s, np.linspace(0.0, 1.0, 5))
    assert "oracle" in cs.meta["fallback"]
    assert cs.delta[0] == 0.0 and cs.delta[-1] > 0


def test_oracle_method_matches_closed():
    s = spec(Family.SUPEROHMIC, 1.0, 0.1, HighT(100.0))
    grid = np.linspace(0.0, 2.0, 9)
    a = compute_coefficients(s, grid)
    b = compute_coefficients(s, grid, method=CoeffMethod.QUADRATURE_ORACLE)
    np.testing.assert_allclose(a.delta, b.delta, rtol=1e-9, atol=1e-14)
    np.testing.assert_allclose(a.gamma_c, b.gamma_c, rtol=1e-9, atol=1e-14)


def test_coefficient_set_validation():
    t = np.linspace(0, 1, 5)
    with pytest.raises(GridError):
        CoefficientSet(t, np.zeros(4), np.zeros(5), np.zeros(5))
    with pytest.raises(GridError):
        CoefficientSet(t, np.full(5, np.nan), np.zeros(5), np.zeros(5))
    with pytest.raises(GridError):
        compute_coefficients(spec(), np.array([0.0, 2.0, 1.0]))


def _synthetic(delta, gamma, pi=0.0, tau_max=4.0, n=801):
    t = np.linspace(0.0, tau_max, n)
    return CoefficientSet(t, np.full(n, delta), np.full(n, pi), np.full(n, gamma))


def test_big_gamma_of_constant():
    cs = integrate_big_gamma(_synthetic(1.0, 0.3))
    np.testing.assert_allclose(cs.big_gamma, 0.6 * cs.tau_grid, rtol=1e-13, atol=1e-15)


def test_secular_integrals_closed_form():
    # Delta = 1, gamma = 0: int_0^tau {cos, sin}(2 w0 (tau - s)) ds
    s = spec(x=1.0)
    cs = secular_integrals(integrate_big_gamma(_synthetic(1.0, 0.0)), s)
    t, w = cs.tau_grid, 2.0
    np.testing.assert_allclose(cs.delta_gamma, t, atol=1e-12)
    np.testing.assert_allclose(cs.delta_co, np.sin(w * t) / w, atol=1e-8)
    np.testing.assert_allclose(cs.delta_si, (1 - np.cos(w * t)) / w, atol=1e-8)
    np.testing.assert_allclose(cs.pi_co, 0.0, atol=1e-15)


def test_secular_integrals_with_damping():
    s = spec(x=1.0)
    g = 0.2
    cs = secular_integrals(integrate_big_gamma(_synthetic(1.0, g)), s)
    t = cs.tau_grid
    np.testing.assert_allclose(cs.delta_gamma, (1 - np.exp(-2 * g * t)) / (2 * g), atol=1e-10)
    # exp(-Gamma) * int exp(Gamma(s)) exp(2i w0 (tau - s)) ds in closed form
    k = 2 * g - 2j
    z = (1 - np.exp(-k * t)) / k
    np.testing.assert_allclose(cs.delta_co + 1j * cs.delta_si, z, atol=1e-8)
    weak = secular_integrals(integrate_big_gamma(_synthetic(1.0, g)), s, Truncation.WEAK_COUPLING_LEADING)
    np.testing.assert_allclose(weak.delta_gamma, t, atol=1e-12)


def test_weak_leading_is_close_at_weak_coupling():
    s = spec(Family.OHMIC, 1.0, 0.05, ZeroT())
    cs = integrate_big_gamma(compute_coefficients(s, default_grid(s, 5.0)))
    a = secular_integrals(cs, s)
    b = secular_integrals(cs, s, Truncation.WEAK_COUPLING_LEADING)
    scale = np.max(np.abs(a.delta_gamma))
    assert np.max(np.abs(a.delta_gamma - b.delta_gamma)) < 1e-2 * scale


def test_resolution_guard():
    s = spec(x=0.1)
    cs = integrate_big_gamma(compute_coefficients(s, np.linspace(0.0, 5.0, 51)))
    with pytest.raises(ResolutionError):
        secular_integrals(cs, s)
    with pytest.raises(GridError):
        secular_integrals(compute_coefficients(s, np.linspace(0.0, 1.0, 101)), s)


def test_default_grid():
    g = default_grid(spec(x=0.2), 2.0)
    assert g[0] == 0.0 and g[-1] == 2.0
    assert np.max(np.diff(g)) <= 0.005 + 1e-15
    assert len(default_grid(spec(), 1.0, 10)) == 11


def test_csv_round_trip(tmp_path):
    s = spec(Family.SUBOHMIC, 1.0, 0.1, HighT(100.0))
    cs = secular_integrals(integrate_big_gamma(compute_coefficients(s, default_grid(s, 1.0))), s)
    path = tmp_path / "c.csv"
    write_coefficients_csv(cs, path)
    back = read_csv(path)
    np.testing.assert_array_equal(back["delta"], cs.delta)
    np.testing.assert_array_equal(back["pi_si"], cs.pi_si)
    assert np.all(np.array([back[k][0] for k in back]) == 0.0)
