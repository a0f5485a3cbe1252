import math
import warnings

import numpy as np
import pytest

from cvreservoir.errors import DomainError
from cvreservoir.spectral import (
    BoseEinstein,
    Family,
    HighT,
    ReservoirSpec,
    ZeroT,
    spectral_density,
    thermal_factor,
)


def test_family_exponents():
    assert Family.OHMIC.s == 1.0
    assert Family.SUBOHMIC.s == 0.5
    assert Family.SUPEROHMIC.s == 3.0


@pytest.mark.parametrize("name, fam", [("ohmic", Family.OHMIC), ("Sub-Ohmic", Family.SUBOHMIC),
                                       ("super_ohmic", Family.SUPEROHMIC)])
def test_family_parse(name, fam):
    assert Family.parse(name) is fam


def test_family_parse_unknown():
    with pytest.raises(DomainError):
        Family.parse("lorentzian")


def test_density_values():
    spec = ReservoirSpec(Family.SUPEROHMIC, 1.0, 0.1, ZeroT())
    w = np.array([0.0, 0.5, 3.0])
    np.testing.assert_allclose(spectral_density(spec, w), w**3 * np.exp(-w), rtol=1e-15)
    # the super-Ohmic density peaks at w = s
    assert spectral_density(spec, 3.0) > spectral_density(spec, 2.9)
    assert spectral_density(spec, 3.0) > spectral_density(spec, 3.1)


def test_density_rejects_negative_frequency():
    spec = ReservoirSpec(Family.OHMIC, 1.0, 0.1, ZeroT())
    with pytest.raises(DomainError):
        spectral_density(spec, -0.1)


def test_thermal_factor_limits():
    w = np.array([0.01, 0.1, 1.0])
    hi = ReservoirSpec(Family.OHMIC, 1.0, 0.1, HighT(100.0))
    be = ReservoirSpec(Family.OHMIC, 1.0, 0.1, BoseEinstein(100.0))
    zt = ReservoirSpec(Family.OHMIC, 1.0, 0.1, ZeroT())
    np.testing.assert_allclose(thermal_factor(hi, w), 200.0 / w)
    # coth(w / 2 theta) -> 2 theta / w for w << theta
    np.testing.assert_allclose(thermal_factor(be, w), 200.0 / w, rtol=1e-4)
    np.testing.assert_array_equal(thermal_factor(zt, w), 1.0)
    assert thermal_factor(zt, 0.0) == 1.0
    with pytest.raises(DomainError):
        thermal_factor(hi, 0.0)


@pytest.mark.parametrize("kw", [dict(x=0.0), dict(x=-1.0), dict(x=math.inf),
                                dict(alpha=0.0), dict(alpha=0.6)])
def test_spec_validation(kw):
    args = dict(family=Family.OHMIC, x=1.0, alpha=0.1, temp=ZeroT())
    args.update(kw)
    with pytest.raises(DomainError):
        ReservoirSpec(**args)


def test_high_t_needs_large_theta():
    with pytest.raises(DomainError):
        ReservoirSpec(Family.OHMIC, 1.0, 0.1, HighT(2.0))


def test_strong_coupling_warns_and_records():
    with pytest.warns(RuntimeWarning):
        spec = ReservoirSpec(Family.OHMIC, 1.0, 0.3, ZeroT())
    assert spec.notes and "alpha" in spec.notes[0]
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ReservoirSpec(Family.OHMIC, 1.0, 0.2, ZeroT())


def test_derived_quantities():
    spec = ReservoirSpec("superohmic", 10.0, 0.1, HighT(100.0))
    assert spec.family is Family.SUPEROHMIC
    assert spec.omega0 == pytest.approx(0.1)
    assert spec.theta_x == pytest.approx(1000.0)
    assert ReservoirSpec(Family.OHMIC, 2.0, 0.1, ZeroT()).theta_x == 0.0
    assert spec.with_alpha(0.05).alpha == 0.05
    assert HighT(100.0).label() == "high:100"
    assert ZeroT().label() == "zero"
