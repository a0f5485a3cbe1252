"""Nested adaptive quadrature of the defining double integrals.

    Delta(tau) = a2 int_0^tau ds K_c(s) cos(s/x)
    Pi(tau)    = a2 int_0^tau ds K_c(s) sin(s/x)
    gamma(tau) = a2 int_0^tau ds K_s(s) sin(s/x)
    r(tau)     = a2 int_0^tau ds K_s(s) cos(s/x)

with ``K_c(s) = int J(w) (2N(w)+1) cos(w s) dw`` and
``K_s(s) = int J(w) sin(w s) dw``. The frequency integral is cut at
``w_max = max(50, 50/x)``. Both levels use QUADPACK through
:func:`scipy.integrate.quad`; oscillatory pieces go through its
Fourier-weighted rule. The inner kernels do not depend on ``x`` and are
memoised.
"""

from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import integrate, special

from ..errors import ConvergenceError, DomainError
from ..spectral import BoseEinstein, HighT, ZeroT

__all__ = ["coeff_oracle", "oracle_series", "inner_kernel", "tail_bound", "WHICH"]

WHICH = ("delta", "pi", "gamma", "rren")
_INNER_EPSABS = 1e-14
_INNER_EPSREL = 1e-12
_OUTER_EPSABS = 1e-12
_OUTER_EPSREL = 1e-10
_LIMIT = 500


def _temp_key(temp):
    if isinstance(temp, HighT):
        return ("high", float(temp.theta))
    if isinstance(temp, BoseEinstein):
        return ("bose", float(temp.theta))
    return ("zero", 0.0)


def _weight_fn(s, key, thermal):
    """Integrand ``J(w) F(w)`` as a function of ``w`` and its power at ``w -> 0``."""
    kind, theta = key
    if not thermal or kind == "zero":
        return (lambda w: w**s * math.exp(-w)), s
    if kind == "high":
        return (lambda w: 2.0 * theta * w ** (s - 1.0) * math.exp(-w)), s - 1.0

    def f(w):
        # the rules used never sample w = 0 itself
        return w**s * math.exp(-w) / math.tanh(w / (2.0 * theta))

    return f, s - 1.0


def _quad(f, a, b, epsabs, epsrel, **kw):
    """QUADPACK call that raises ``ConvergenceError`` on a missed target.

    A roundoff or subdivision warning is tolerated when the returned error
    estimate is still within 100 times the requested tolerance.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, limit=_LIMIT, epsabs=epsabs, epsrel=epsrel, **kw)
    if not math.isfinite(val):
        raise ConvergenceError(f"quadrature returned {val} on [{a}, {b}]")
    if caught and err > 100.0 * max(epsabs, epsrel * abs(val)):
        raise ConvergenceError(
            f"quadrature on [{a}, {b}] missed its target (error {err:.2e}): {caught[0].message}"
        )
    return val


def w_max(x):
    return max(50.0, 50.0 / x)


def tail_bound(s_exp, key, thermal, x):
    """Upper bound of the neglected frequency tail beyond ``w_max``."""
    wm = w_max(x)
    kind, theta = key
    if thermal and kind != "zero":
        # 2N+1 <= 2 theta / w + 1 for the Bose case; exact for the high-T limit
        p = s_exp - 1.0
        b = 2.0 * theta * special.gamma(p + 1) * special.gammaincc(p + 1, wm)
        if kind == "bose":
            b += special.gamma(s_exp + 1) * special.gammaincc(s_exp + 1, wm)
        return b
    return special.gamma(s_exp + 1) * special.gammaincc(s_exp + 1, wm)


@lru_cache(maxsize=None)
def inner_kernel(s_exp, key, thermal, svar, wmax):
    """``int_0^wmax J(w) F(w) {cos|sin}(w svar) dw``.

    ``thermal=True`` gives the cosine kernel with the thermal factor,
    ``False`` the sine kernel without it.
    """
    f, p = _weight_fn(s_exp, key, thermal)
    trig = math.cos if thermal else math.sin
    if svar == 0.0:
        if not thermal:
            return 0.0
    # [0, 1]: plain Gauss-Kronrod; w = v**2 removes an integrable w**p, p < 0.
    if p < 0:
        head = _quad(lambda v: 2.0 * v * f(v * v) * trig(v * v * svar), 0.0, 1.0,
                     epsabs=_INNER_EPSABS, epsrel=_INNER_EPSREL)
    else:
        head = _quad(lambda w: f(w) * trig(w * svar), 0.0, 1.0,
                     epsabs=_INNER_EPSABS, epsrel=_INNER_EPSREL)
    if svar == 0.0:
        tail = _quad(f, 1.0, wmax, epsabs=_INNER_EPSABS, epsrel=_INNER_EPSREL)
    else:
        tail = _quad(f, 1.0, wmax, weight="cos" if thermal else "sin", wvar=svar,
                     epsabs=_INNER_EPSABS, epsrel=_INNER_EPSREL)
    return head + tail


def _check_spec(spec):
    if not isinstance(spec.temp, (HighT, ZeroT, BoseEinstein)):
        raise DomainError(f"unsupported temperature regime {spec.temp!r}")


def _segment(spec, which, a, b):
    if which not in WHICH:
        raise DomainError(f"which must be one of {WHICH}, got {which!r}")
    key = _temp_key(spec.temp)
    thermal = which in ("delta", "pi")
    wm = w_max(spec.x)
    s_exp = float(spec.s)
    outer = "cos" if which in ("delta", "rren") else "sin"

    def kern(u):
        return inner_kernel(s_exp, key, thermal, float(u), wm)

    return _quad(kern, a, b, weight=outer, wvar=1.0 / spec.x,
                 epsabs=_OUTER_EPSABS, epsrel=_OUTER_EPSREL)


def coeff_oracle(spec, tau, which):
    """Reference value of one coefficient by nested adaptive quadrature.

    Parameters
    ----------
    spec : ReservoirSpec
        Any ``s > 0`` and any temperature regime (including full
        Bose-Einstein occupation) is accepted.
    tau : float
        Time, ``tau >= 0``.
    which : {'delta', 'pi', 'gamma', 'rren'}

    Returns
    -------
    float
        Coefficient value including the ``alpha**2`` prefactor.

    Raises
    ------
    ConvergenceError
        If either quadrature level misses its tolerance.
    """
    _check_spec(spec)
    tau = float(tau)
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    if tau == 0.0:
        return 0.0
    return spec.alpha**2 * _segment(spec, which, 0.0, tau)


def oracle_series(spec, tau_grid, which):
    """Coefficient on an ascending grid, integrating segment by segment.

    The segment integrals are accumulated, so each grid interval is
    integrated once.
    """
    _check_spec(spec)
    t = np.asarray(tau_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise DomainError("tau_grid must be a nonempty 1-D array")
    if t[0] < 0 or np.any(np.diff(t) < 0):
        raise DomainError("tau_grid must be nonnegative and ascending")
    pieces = np.empty(t.size)
    pieces[0] = _segment(spec, which, 0.0, t[0]) if t[0] > 0 else 0.0
    for i in range(1, t.size):
        pieces[i] = _segment(spec, which, t[i - 1], t[i]) if t[i] > t[i - 1] else 0.0
    return spec.alpha**2 * np.cumsum(pieces)
