import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvreservoir import specfun
from cvreservoir.errors import BranchError, DomainError

# Reference values from mpmath at 30 digits.
FROZEN = [
    ('expint_ei', (0.5+0.25j), (0.543897572561226+0.7867419334490525j)),
    ('expint_ei', (-3+2j), (0.00909592087479473+3.1346924743275806j)),
    ('expint_ei', (12-7j), (12379.19383211131-1793.8618499576792j)),
    ('expint_ei', 0.1j, (-1.7278683866572966+1.6707407879031735j)),
    ('expint_ei', (-15.5-0.5j), (-9.727007629547882e-09-3.141592647884224j)),
    ('expint_ei', (4+18j), (-1.8875447154783187+0.8314514038773645j)),
    ('expint_e1', (0.5+0.25j), (0.4594499881779998-0.2675113508343748j)),
    ('expint_e1', (-3+2j), (-2.8074890821669043+5.960335304796998j)),
    ('expint_e1', (12-7j), (1.456611505890854e-07+3.908935270520523e-07j)),
    ('expint_e1', 0.1j, (1.7278683866572966-1.4708518656866196j)),
    ('expint_e1', (-15.5-0.5j), (-333924.96576596756-167559.092603836j)),
    ('expint_e1', (4+18j), (0.0008800376608702975-0.00042719408070031074j)),
    ('cosint_ci', (0.5+0.25j), (-0.05151298351207619+0.4021216690705412j)),
    ('cosint_ci', (-3+2j), (-0.16836286832772046+4.195912207246222j)),
    ('cosint_ci', (12-7j), (-4.3361376340087885-40.469352744924024j)),
    ('cosint_ci', 0.1j, (-1.7228683861943337+1.5707963267948966j)),
    ('cosint_ci', (-15.5-0.5j), (0.01835089384707816-3.1745122454430805j)),
    ('cosint_ci', (4+18j), (-1528946.5623523707+1104281.0970279465j)),
    ('sinint_si', (0.5+0.25j), (0.4982025200364397+0.2405181694333851j)),
    ('sinint_si', (-3+2j), (-2.6454325553623694-0.19318907627191984j)),
    ('sinint_si', (12-7j), (-38.89858220283403+4.3360799949357824j)),
    ('sinint_si', 0.1j, 0.100055572225057j),
    ('sinint_si', (-15.5-0.5j), (-1.6407474046973693-0.006764891568776647j)),
    ('sinint_si', (4+18j), (-1104279.526231619-1528946.562352371j)),
    ('sinhint_shi', (0.5+0.25j), (0.5016737803696129+0.2596152913073389j)),
    ('sinhint_shi', (-3+2j), (-1.399196580646055+4.547513889562289j)),
    ('sinhint_shi', (12-7j), (6189.596916128486-896.9309247833928j)),
    ('sinhint_shi', 0.1j, 0.09994446110827696j),
    ('sinhint_shi', (-15.5-0.5j), (-166962.48288298864-83781.11709824194j)),
    ('sinhint_shi', (4+18j), (-0.9433323389087243+0.4155121048983321j)),
    ('erf_c', (0.5+0.25j), (0.5486893605537622+0.22199095428837334j)),
    ('erf_c', (-3+2j), (-0.9989632788568172-1.1546724379290603e-05j)),
    ('erf_c', (12-7j), (1+2.122459241349266e-35j)),
    ('erf_c', 0.1j, 0.1132151741695998j),
    ('erf_c', (-15.5-0.5j), (-1-3.562971098346887e-37j)),
    ('erf_c', (4+18j), (-1.1864385307957048e+132+1.3189467576656785e+132j)),
    ('erfc_c', (0.5+0.25j), (0.45131063944623784-0.22199095428837334j)),
    ('erfc_c', (-3+2j), (1.9989632788568172+1.1546724379290603e-05j)),
    ('erfc_c', (12-7j), (9.752838831999933e-44-2.0157643613015685e-43j)),
    ('erfc_c', 0.1j, (1-0.1132151741695998j)),
    ('erfc_c', (-15.5-0.5j), (2+1.0395889341368697e-39j)),
    ('erfc_c', (4+18j), (1.1864385307957048e+132-1.3189467576656785e+132j)),
]

EN_FROZEN = [
    (1, (0.5+0.25j), (0.4594499881779998-0.2675113508343748j)),
    (2, (0.5+0.25j), (0.29107225854632907-0.13116490824947585j)),
    (4, (-3+2j), (-6.639113219754068+1.6472777904886933j)),
    (3, (12-7j), (1.4888731612756653e-07+3.427218236678544e-07j)),
    (5, (1-40j), (-0.007575293317188536-0.0049870837941100666j)),
    (2, (30+1j), (1.504108847601844e-15-2.51240064738215e-15j)),
]


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.mark.parametrize("name, z, ref", FROZEN)
def test_frozen_values(name, z, ref):
    assert _rel(getattr(specfun, name)(z), ref) < 1e-12


@pytest.mark.parametrize("n, z, ref", EN_FROZEN)
def test_en_frozen(n, z, ref):
    assert _rel(specfun.expint_en(n, z), ref) < 1e-12


def test_scalar_and_array_shapes():
    z = np.array([[0.5 + 1j, 2.0], [-3.0 + 0.1j, 7j]])
    out = specfun.expint_e1(z)
    assert out.shape == z.shape
    assert isinstance(specfun.expint_e1(1.0), complex)
    for i in np.ndindex(z.shape):
        assert out[i] == specfun.expint_e1(complex(z[i]))


def test_ei_real_axis():
    # real Ei on the positive axis, -E1(|x|) on the negative axis
    for x in (0.3, 5.0, 40.0):
        assert _rel(specfun.expint_ei(x).real, float(mpmath.ei(x))) < 1e-13
        assert abs(specfun.expint_ei(x).imag) == 0.0
    for x in (-0.3, -5.0, -40.0):
        assert _rel(specfun.expint_ei(x), -float(mpmath.e1(-x))) < 1e-13


def test_ci_branch_cut_rejected():
    with pytest.raises(BranchError):
        specfun.cosint_ci(-2.0)


@pytest.mark.parametrize("fn", [specfun.expint_ei, specfun.expint_e1, specfun.cosint_ci])
def test_zero_is_singular(fn):
    with pytest.raises(DomainError):
        fn(0.0)


def test_overflow_is_reported():
    with pytest.raises(OverflowError):
        specfun.expint_ei(800.0)


def test_e1_against_quadrature():
    # E1(z) = exp(-z) int_0^inf exp(-z t) / (1 + t) dt, Re z > 0
    from scipy.integrate import quad

    for z in (0.7 + 0.2j, 3.0 - 4.0j, 10.0 + 1.0j):
        re = quad(lambda t: (cmath.exp(-z * t) / (1 + t)).real, 0, np.inf, epsabs=1e-15)[0]
        im = quad(lambda t: (cmath.exp(-z * t) / (1 + t)).imag, 0, np.inf, epsabs=1e-15, limit=200)[0]
        assert _rel(specfun.expint_e1(z), cmath.exp(-z) * complex(re, im)) < 1e-9


def test_si_odd_and_conjugate():
    z = 2.5 + 3.5j
    assert specfun.sinint_si(-z) == pytest.approx(-specfun.sinint_si(z), rel=1e-14)
    assert specfun.sinint_si(z.conjugate()) == pytest.approx(specfun.sinint_si(z).conjugate(), rel=1e-14)


def test_ci_reflection():
    # Ci(-z) = Ci(z) - i pi for Im z > 0
    z = 3.0 + 2.0j
    assert _rel(specfun.cosint_ci(-z), specfun.cosint_ci(z) - 1j * math.pi) < 1e-13


def test_erf_plus_erfc():
    for z in (0.3 + 0.1j, 2.0 - 1.5j, -4.0 + 0.5j):
        assert abs(specfun.erf_c(z) + specfun.erfc_c(z) - 1) < 1e-13


def test_en_recurrence():
    # n E_{n+1}(z) = exp(-z) - z E_n(z)
    z = 1.5 - 2.0j
    for n in range(1, 6):
        lhs = n * specfun.expint_en(n + 1, z)
        rhs = cmath.exp(-z) - z * specfun.expint_en(n, z)
        assert _rel(lhs, rhs) < 1e-13


_z = st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z) > 1e-3 and abs(z.imag) > 1e-6
)


@settings(max_examples=60, deadline=None)
@given(_z)
def test_property_e1_matches_mpmath(z):
    assert _rel(specfun.expint_e1(z), complex(mpmath.e1(z))) < 1e-11


@settings(max_examples=60, deadline=None)
@given(_z)
def test_property_shi_is_rotated_si(z):
    assert _rel(specfun.sinhint_shi(z), complex(mpmath.shi(z))) < 1e-11
