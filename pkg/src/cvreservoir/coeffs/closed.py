"""Analytic time-dependent coefficients for exponentially cut-off spectra.

All values include the ``alpha**2`` prefactor; time is the dimensionless
``tau``. With the frequency integral done analytically,

    int_0^inf w**a exp(-w) exp(i w u) dw = Gamma(a+1) / (1 - i u)**(a+1),

every coefficient is a real or imaginary part of

    G_nu(sigma) = int_0^tau (1 - i u)**(-nu) exp(i sigma u / x) du,

with ``nu = s`` (high-T diffusion), ``nu = s + 1`` (zero-T diffusion and
damping) and ``sigma = +-1``. For integer ``nu``

    G_n(sigma) = i exp(sigma/x) [E_n(sigma/x) - W**(1-n) E_n(sigma W/x)],
    W = 1 - i tau,

and for half-integer ``nu`` the same integral reduces to ``erf``/``erfc`` of
``sqrt(W/x)``. Each product ``exp(+-1/x) E_n(...)`` is of order one, so this
arrangement has no exponential cancellation (:func:`closed_coefficients`).

The expanded Ohmic and super-Ohmic forms in terms of Ei, Ci, Si and Shi are
also provided (:func:`printed_coefficients`). They pair ``cosh(1/x)`` with
functions of size ``exp(1/x)`` and lose about ``0.87/x`` digits.
"""

import numpy as np
from scipy import special

from .. import specfun as sf
from ..errors import DomainError, EvaluationError, ImaginaryResidueError
from ..spectral import Family, HighT, ZeroT

__all__ = [
    "gamma_closed",
    "delta_closed",
    "pi_closed",
    "closed_coefficients",
    "printed_coefficients",
    "subohmic_delta_highT_erf",
    "g_integral",
    "cancellation_digits",
    "RESIDUE_TOL",
]

RESIDUE_TOL = 1e-10
_W14 = np.exp(0.25j * np.pi)
_W34 = np.exp(0.75j * np.pi)


def cancellation_digits(spec, arrangement="stable"):
    """Estimated decimal digits lost to cancellation.

    ``"stable"`` is the ``G``-integral route (no exponential cancellation);
    ``"printed"`` is the expanded Ei/Ci/Si/Shi form, whose large terms are of
    size ``exp(2/x)`` relative to the result.
    """
    if arrangement == "stable":
        return 0.0
    if arrangement == "printed":
        return 2.0 * np.log10(np.e) / spec.x
    raise DomainError(f"unknown arrangement {arrangement!r}")


def _check(spec):
    if spec.s_override is not None:
        raise DomainError("analytic coefficients exist only for s in {1/2, 1, 3}")
    if not isinstance(spec.temp, (HighT, ZeroT)):
        raise DomainError("analytic coefficients exist only in the high-T and zero-T limits")
    if 1.0 / spec.x > 700.0:
        raise EvaluationError(f"x={spec.x:g} too small: exp(1/x) overflows")


def _printed_ohmic(tau, x, temp):
    t = tau.astype(np.complex128)
    I = 1j
    e_m, e_p = np.exp(-1 / x), np.exp(1 / x)
    ei_a = sf.expint_ei((1 - I * t) / x)
    ei_b = sf.expint_ei((1 + I * t) / x)
    ei_c = sf.expint_ei((I * t - 1) / x)
    ei_d = sf.expint_ei(-(1 + I * t) / x)
    sin_, cos_ = np.sin(tau / x), np.cos(tau / x)
    w0 = 1 / x
    g = w0 / 4 * (
        I * e_m * (ei_a - ei_b)
        + e_p * (2 * np.pi + I * ei_c - I * ei_d)
        - 4 * x * sin_ / (1 + tau**2)
    )
    if isinstance(temp, HighT):
        th = temp.theta
        ch, sh = np.cosh(1 / x), np.sinh(1 / x)
        ci_m = sf.cosint_ci((t - I) / x)
        ci_p = sf.cosint_ci((t + I) / x)
        si_m = sf.sinint_si((t - I) / x)
        si_p = sf.sinint_si((t + I) / x)
        d = -th * (I * ch * (ci_m - ci_p + I * np.pi) + sh * (si_m + si_p))
        ci0 = sf.cosint_ci(-I / x) + sf.cosint_ci(I / x)
        shi1 = sf.sinhint_shi(1 / x)
        p = th * (sh * (ci_m + ci_p - ci0) + ch * (2 * shi1 - I * si_m + I * si_p))
    else:
        d = w0 / 4 * (
            I * e_m * (ei_a - ei_b)
            - e_p * (2 * np.pi + I * ei_c - I * ei_d)
            + 4 * x * t * cos_ / (1 + tau**2)
        )
        ei1 = sf.expint_ei(1 / x)
        eim1 = sf.expint_ei(-1 / x)
        p = w0 / 4 * (
            -e_m * (ei_a + ei_b - 2 * ei1)
            + e_p * (2 * eim1 - ei_c - ei_d)
            + 4 * x * t * sin_ / (1 + tau**2)
        )
    return d, p, g


def _printed_superohmic(tau, x, temp):
    t = tau.astype(np.complex128)
    I = 1j
    c, s = np.cos(tau / x), np.sin(tau / x)
    a = 1 + tau**2
    e1, e2 = np.exp(-1 / x), np.exp(2 / x)
    w0 = 1 / x
    ei_a = sf.expint_ei((1 - I * t) / x)
    ei_b = sf.expint_ei((1 + I * t) / x)
    ei_c = sf.expint_ei(-(1 + I * t) / x)
    ei_d = sf.expint_ei(-(1 - I * t) / x)
    ee = 2 * e2 * np.pi + I * ei_a - I * e2 * ei_c - I * ei_b + I * e2 * ei_d
    g = w0 / (4 * x**2 * a**3) * (
        8 * x**2 * a * tau * c + 4 * x * (-(a**2) + 2 * (3 * tau**2 - 1) * x**2) * s + e1 * a**3 * ee
    )
    if isinstance(temp, HighT):
        th = temp.theta
        pre = th / (2 * x**2 * a**2)
        d = pre * (8 * x**2 * tau * c - 4 * a * x * s + e1 * a**2 * ee)
        bracket = (
            4 * np.exp(1 / x) * x
            + 2 * e2 * sf.expint_ei(-1 / x)
            - 2 * sf.expint_ei(1 / x)
            + ei_a - e2 * ei_c + ei_b - e2 * ei_d
        )
        p = pre * (4 * x * a * c + 8 * tau * x**2 * s - e1 * a**2 * bracket)
    else:
        ch, sh = np.cosh(1 / x), np.sinh(1 / x)
        ci_m = sf.cosint_ci((t - I) / x)
        ci_p = sf.cosint_ci((t + I) / x)
        si_m = sf.sinint_si((t - I) / x)
        si_p = sf.sinint_si((t + I) / x)
        poly = 1 + 2 * tau**2 + tau**4 + 6 * x**2 - 2 * x**2 * tau**2
        d = w0 / (2 * x**2) * (
            2 * x / a**3 * (-(1 - tau**4) * x * s + tau * c * poly)
            + I * sh * (ci_m - ci_p + I * np.pi)
            + ch * (si_m + si_p)
        )
        ci0 = sf.cosint_ci(-I / x) + sf.cosint_ci(I / x)
        p = w0 / (2 * x**2) * (
            -2 * x**2
            + 2 * x / a**3 * ((1 - tau**4) * x * c + tau * s * poly)
            - ch * (ci_m + ci_p - ci0)
            + sh * (-2 * sf.sinhint_shi(1 / x) + I * si_m - I * si_p)
        )
    return d, p, g


def _g_half(nu, tau, x):
    """``G_nu(+1), G_nu(-1)`` for ``nu`` in {1/2, 3/2} via erf and erfc."""
    I = 1j
    t = tau.astype(np.complex128)
    W = 1 - I * t
    P = np.sqrt(W / x)
    r = 1 / np.sqrt(x)
    ep, em = np.exp(1 / x), np.exp(-1 / x)
    dc = sf.erfc_c(r) - sf.erfc_c(P)
    de = sf.erf_c(I * P) - sf.erf_c(I * r)
    if nu == 0.5:
        gp = I * ep * np.sqrt(np.pi * x) * dc
        gm = em * np.sqrt(np.pi * x) * de
    else:
        sw = np.sqrt(W)
        gp = I * (-2 * np.exp(I * t / x) / sw + 2 - 2 * np.sqrt(np.pi / x) * ep * dc)
        gm = I * (-2 * np.exp(-I * t / x) / sw + 2) + 2 * np.sqrt(np.pi / x) * em * de
    return gp, gm


def _g_int(n, tau, x):
    """``G_n(+1), G_n(-1)`` for integer ``n >= 1`` via ``E_n``."""
    I = 1j
    W = 1 - I * tau.astype(np.complex128)
    # sigma = -1 puts E_n(-1/x) on its cut; the path from -W/x approaches it from above.
    out = []
    for sig in (1.0, -1.0):
        z0 = complex(sig / x, 0.0)
        a = np.exp(sig / x) * sf.expint_en(n, z0)
        b = np.exp(sig / x) * W ** (1 - n) * sf.expint_en(n, sig * W / x)
        out.append(I * (a - b))
    return out[0], out[1]


def g_integral(nu, tau, x):
    """Return ``(G_nu(+1), G_nu(-1))`` on ``tau`` for ``nu`` in {1/2, 1, 3/2, 2, 3, 4}.

    Parameters
    ----------
    nu : float
        Exponent of ``(1 - i u)``.
    tau : array_like
        Upper limits, ``tau >= 0``.
    x : float
        Cutoff ratio.
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if nu in (0.5, 1.5):
        gp, gm = _g_half(nu, tau, x)
    elif float(nu).is_integer() and nu >= 1:
        gp, gm = _g_int(int(nu), tau, x)
    else:
        raise DomainError(f"no analytic G-integral for nu={nu!r}")
    zero = tau == 0
    gp = np.where(zero, 0.0, gp)
    gm = np.where(zero, 0.0, gm)
    return gp, gm


def _stable(tau, spec):
    s_ = spec.family.s
    x = spec.x
    gp, gm = g_integral(s_ + 1, tau, x)
    c1 = special.gamma(s_ + 1)
    g = -c1 * 0.5 * (gp - gm).real
    if isinstance(spec.temp, HighT):
        c0 = 2 * spec.temp.theta * special.gamma(s_)
        hp, hm = g_integral(s_, tau, x)
    else:
        c0 = c1
        hp, hm = gp, gm
    d = c0 * 0.5 * (hp + hm).real
    p = c0 * 0.5 * (hp - hm).imag
    return d, p, g


def subohmic_delta_highT_erf(spec, tau):
    """High-T sub-Ohmic diffusion coefficient written with erf of rotated roots.

    This is the form with ``(-1)**(1/4)`` and ``(-1)**(3/4)`` factors fixed to
    their principal values. It is algebraically equivalent to the
    ``G``-integral route used by :func:`delta_closed` and serves as an
    independent cross-check of it.
    """
    _check(spec)
    if spec.family is not Family.SUBOHMIC or not isinstance(spec.temp, HighT):
        raise DomainError("only defined for the sub-Ohmic high-T spectrum")
    tau = np.asarray(tau, dtype=float)
    x = spec.x
    I = 1j
    t = tau.astype(np.complex128)
    sq = np.sqrt
    val = -np.pi * spec.temp.theta / 2 * sq(x) * np.exp(-1 / x) * (
        sf.erf_c(_W14 * sq((I - t) / x))
        - sf.erf_c(_W14 * sq((I + t) / x))
        + I * np.exp(2 / x) * (sf.erf_c(_W34 * sq((I + t) / x)) - sf.erf_c(_W34 * sq((I - t) / x)))
    )
    scale = spec.alpha**2 * spec.temp.theta * 10 ** cancellation_digits(spec, "printed")
    return _realify(spec.alpha**2 * val, "delta", scale=scale)


def _realify(val, name, scale=None):
    val = np.asarray(val)
    if not np.all(np.isfinite(val)):
        raise EvaluationError(f"non-finite value in analytic {name}")
    ref = np.max(np.abs(val.real)) if val.size else 0.0
    if scale is not None:
        ref = max(ref, scale)
    bad = np.abs(val.imag) > RESIDUE_TOL * max(ref, 1.0)
    if np.any(bad):
        raise ImaginaryResidueError(
            f"analytic {name} has imaginary residue {np.max(np.abs(val.imag)):.3e}"
        )
    return val.real


def _prepare_tau(tau):
    tau_arr = np.asarray(tau, dtype=float)
    flat = np.atleast_1d(tau_arr).ravel()
    if np.any(flat < 0):
        raise DomainError("tau must be nonnegative")
    return tau_arr, flat


def _shape(v, tau_arr):
    return v.reshape(tau_arr.shape) if tau_arr.ndim else float(v[0])


def closed_coefficients(spec, tau):
    """Evaluate ``(delta, pi, gamma)`` analytically on ``tau``.

    Parameters
    ----------
    spec : ReservoirSpec
    tau : array_like
        Nonnegative times.

    Returns
    -------
    tuple of ndarray
        Real arrays of the same shape as ``tau``, each proportional to
        ``alpha**2``. Values at ``tau == 0`` are exactly zero.

    Raises
    ------
    EvaluationError
        If a special function returns a non-finite value.
    """
    _check(spec)
    tau_arr, flat = _prepare_tau(tau)
    with np.errstate(all="ignore"):
        d, p, g = _stable(flat, spec)
    a2 = spec.alpha**2
    out = []
    for name, v in (("delta", d), ("pi", p), ("gamma", g)):
        v = np.asarray(v, dtype=float) * a2
        if not np.all(np.isfinite(v)):
            raise EvaluationError(f"non-finite value in analytic {name}")
        out.append(_shape(np.where(flat == 0, 0.0, v), tau_arr))
    return tuple(out)


def printed_coefficients(spec, tau):
    """Expanded Ei/Ci/Si/Shi forms of ``(delta, pi, gamma)``, Ohmic and super-Ohmic.

    Each complex intermediate must be real up to ``RESIDUE_TOL`` relative to
    the largest cancelling term; the residue is then dropped.

    Raises
    ------
    ImaginaryResidueError
        If an imaginary part that must cancel survives above tolerance.
    """
    _check(spec)
    fn = {Family.OHMIC: _printed_ohmic, Family.SUPEROHMIC: _printed_superohmic}.get(spec.family)
    if fn is None:
        raise DomainError("expanded forms are provided for the Ohmic and super-Ohmic families only")
    tau_arr, flat = _prepare_tau(tau)
    with np.errstate(all="ignore"):
        d, p, g = fn(flat, spec.x, spec.temp)
    a2 = spec.alpha**2
    pref = spec.temp.theta if isinstance(spec.temp, HighT) else 1.0
    scale = a2 * pref * 10 ** cancellation_digits(spec, "printed") / spec.x**3
    out = []
    for name, v in (("delta", d), ("pi", p), ("gamma", g)):
        v = _realify(np.asarray(v) * a2, name, scale=scale)
        out.append(_shape(np.where(flat == 0, 0.0, v), tau_arr))
    return tuple(out)


def gamma_closed(spec, tau):
    """Damping coefficient ``gamma(tau)`` from its analytic form."""
    return closed_coefficients(spec, tau)[2]


def delta_closed(spec, tau):
    """Diffusion coefficient ``Delta(tau)``; high-T or zero-T form per ``spec``."""
    return closed_coefficients(spec, tau)[0]


def pi_closed(spec, tau):
    """Anomalous diffusion coefficient ``Pi(tau)``; high-T or zero-T form per ``spec``."""
    return closed_coefficients(spec, tau)[1]
