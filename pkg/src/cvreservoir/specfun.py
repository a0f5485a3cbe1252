"""Complex-argument exponential, trigonometric, hyperbolic and error integrals.

All functions accept scalars or array-likes, broadcast like numpy ufuncs and
return ``complex128`` results (a Python ``complex`` for scalar input).

Each function switches between two methods:

* a power series, used where the series does not cancel (the relative
  rounding loss is bounded by ``exp(_CANCEL)``), summed with Neumaier
  compensation;
* a continued fraction (modified Lentz) for ``E1`` or ``erfc`` elsewhere.

The switch regions are set by cancellation estimates rather than by a fixed
radius, so both methods are only used where each is accurate.

Branch conventions are principal. ``Ei`` and ``Ci`` have their cut on the
negative real axis. On the cut ``Ei`` returns the real value ``-E1(-z)``,
which is the usual real-variable convention. ``Ci`` raises ``BranchError``
on the cut.
"""

import numpy as np

from .errors import BranchError, ConvergenceError, DomainError

__all__ = [
    "expint_ei",
    "expint_e1",
    "expint_en",
    "cosint_ci",
    "sinint_si",
    "sinhint_shi",
    "erf_c",
    "erfc_c",
]

EULER = float(np.euler_gamma)
_EXP_MAX = 709.0
# Allowed log-magnitude of series cancellation: exp(4) * eps ~ 6e-15.
_CANCEL = 4.0
_SMALL = 2.0
_TOL = 2.0**-58
_MAX_TERMS = 20000
_TINY = 1e-300


def _prepare(z):
    z = np.asarray(z, dtype=np.complex128)
    return z, z.ndim == 0


def _finish(out, scalar):
    if scalar:
        return complex(out.reshape(()))
    return out


def _sum_series(z, first, ratio, weight, k_min):
    """Sum ``sum_k t_k * weight(k)`` with ``t_k = t_{k-1} * ratio(z, k)``.

    ``first`` gives ``(t_0, weight_0)`` contribution and the starting index.
    Neumaier-compensated, vectorised with per-element termination once the
    terms have passed their peak (``k > k_min``) and are below ``_TOL``.
    """
    t, s, k = first
    c = np.zeros_like(s)
    active = np.ones(z.shape, dtype=bool)
    while active.any():
        k += 1
        if k > _MAX_TERMS:
            raise ConvergenceError("power series did not converge")
        t = t * ratio(z, k)
        term = t * weight(k)
        tot = s + term
        big = np.abs(s) >= np.abs(term)
        c = c + np.where(big, (s - tot) + term, (term - tot) + s)
        s = tot
        done = (k > k_min) & (np.abs(term) <= _TOL * np.abs(s + c))
        active &= ~done
    return s + c


def _ein_part(z):
    """Entire part of Ei: ``sum_{k>=1} z**k / (k * k!)``."""
    if z.size == 0:
        return z.copy()
    return _sum_series(
        z,
        (z.copy(), z.copy(), 1),
        lambda w, k: w / k,
        lambda k: 1.0 / k,
        np.abs(z),
    )


def _cin_part(z):
    """Entire part of Ci: ``sum_{k>=1} (-1)**k z**(2k) / (2k (2k)!)``."""
    if z.size == 0:
        return z.copy()
    z2 = z * z
    t0 = -z2 / 2.0
    return _sum_series(
        z2,
        (t0, t0 / 2.0, 1),
        lambda w, k: -w / ((2 * k - 1) * (2 * k)),
        lambda k: 1.0 / (2 * k),
        np.abs(z),
    )


def _si_series(z):
    if z.size == 0:
        return z.copy()
    z2 = z * z
    # t_k = (-1)^k z^(2k+1) / (2k+1)!, weight 1/(2k+1); the seed carries z.
    t = z.copy()
    s = z.copy()
    k_min = np.abs(z)
    c = np.zeros_like(s)
    active = np.ones(z.shape, dtype=bool)
    k = 0
    while active.any():
        k += 1
        if k > _MAX_TERMS:
            raise ConvergenceError("power series did not converge")
        t = t * (-z2) / ((2 * k) * (2 * k + 1))
        term = t / (2 * k + 1)
        tot = s + term
        big = np.abs(s) >= np.abs(term)
        c = c + np.where(big, (s - tot) + term, (term - tot) + s)
        s = tot
        done = (2 * k > k_min) & (np.abs(term) <= _TOL * np.abs(s + c))
        active &= ~done
    return s + c


def _e1_cf(w):
    """``E1(w)`` from its continued fraction; needs ``w`` off the negative axis."""
    if w.size == 0:
        return w.copy()
    f = w + 1.0
    f = np.where(f == 0, _TINY, f)
    C = f.copy()
    D = np.zeros_like(f)
    active = np.ones(w.shape, dtype=bool)
    n = 0
    while active.any():
        n += 1
        if n > _MAX_TERMS:
            raise ConvergenceError("E1 continued fraction did not converge")
        a = -float(n * n)
        b = w + (2 * n + 1)
        D = b + a * D
        D = np.where(D == 0, _TINY, D)
        D = 1.0 / D
        C = b + a / C
        C = np.where(C == 0, _TINY, C)
        delta = np.where(active, C * D, 1.0)
        f = f * delta
        active &= np.abs(delta - 1.0) > _TOL
    return np.exp(-w) / f


def _erfc_cf(z):
    """``erfc(z)`` for ``Re z > 0`` from the Laplace continued fraction."""
    if z.size == 0:
        return z.copy()
    f = z.copy()
    C = f.copy()
    D = np.zeros_like(f)
    active = np.ones(z.shape, dtype=bool)
    n = 0
    while active.any():
        n += 1
        if n > _MAX_TERMS:
            raise ConvergenceError("erfc continued fraction did not converge")
        a = 0.5 * n
        D = z + a * D
        D = np.where(D == 0, _TINY, D)
        D = 1.0 / D
        C = z + a / C
        C = np.where(C == 0, _TINY, C)
        delta = np.where(active, C * D, 1.0)
        f = f * delta
        active &= np.abs(delta - 1.0) > _TOL
    return np.exp(-z * z) / (np.sqrt(np.pi) * f)


def expint_e1(z):
    """Exponential integral ``E1(z) = int_z^inf exp(-t)/t dt`` (principal branch).

    On the negative real axis the value approached from above is returned.

    Raises
    ------
    DomainError
        If ``z == 0``.
    OverflowError
        If ``exp(-Re z)`` overflows.
    """
    z, scalar = _prepare(z)
    if np.any(z == 0):
        raise DomainError("E1 has a logarithmic singularity at z = 0")
    if np.any(-z.real > _EXP_MAX):
        raise OverflowError("E1(z) overflows for Re z < -709")
    out = np.empty_like(z)
    r = np.abs(z)
    ser = (r + z.real <= _CANCEL) | (r <= _SMALL)
    zs = z[ser]
    # log of the upper side on the cut: sign of +0.0 imaginary part
    out[ser] = -EULER - np.log(zs) - _ein_part(-zs)
    out[~ser] = _e1_cf(z[~ser])
    return _finish(out, scalar)


def _en_cf(n, w):
    """``E_n(w)`` from the continued fraction of its Laplace form (Lentz)."""
    if w.size == 0:
        return w.copy()
    b = w + n
    C = np.full_like(w, 1.0 / _TINY)
    D = 1.0 / b
    h = D.copy()
    active = np.ones(w.shape, dtype=bool)
    i = 0
    while active.any():
        i += 1
        if i > _MAX_TERMS:
            raise ConvergenceError("E_n continued fraction did not converge")
        an = -float(i * (n - 1 + i))
        b = b + 2.0
        D = an * D + b
        D = np.where(D == 0, _TINY, D)
        D = 1.0 / D
        C = b + an / C
        C = np.where(C == 0, _TINY, C)
        delta = np.where(active, C * D, 1.0)
        h = h * delta
        active &= np.abs(delta - 1.0) > _TOL
    return h * np.exp(-w)


def _en_series(n, z):
    """Power series of ``E_n(z)``, ``n >= 1``; log on the principal branch."""
    if z.size == 0:
        return z.copy()
    psi = -EULER + sum(1.0 / k for k in range(1, n))
    fact = float(np.prod(np.arange(1, n))) if n > 1 else 1.0
    head = (-z) ** (n - 1) / fact * (-np.log(z) + psi)
    s = np.zeros_like(z)
    c = np.zeros_like(z)
    t = np.ones_like(z)  # (-z)^k / k!
    r = np.abs(z)
    k = 0
    while True:
        if k != n - 1:
            term = -t / (k - n + 1)
            tot = s + term
            big = np.abs(s) >= np.abs(term)
            c = c + np.where(big, (s - tot) + term, (term - tot) + s)
            s = tot
            if k > n and np.all(k > r) and np.all(np.abs(term) <= _TOL * np.abs(s + c + head)):
                break
        k += 1
        if k > _MAX_TERMS:
            raise ConvergenceError("E_n power series did not converge")
        t = t * (-z) / k
    return head + s + c


def expint_en(n, z):
    """Generalised exponential integral ``E_n(z) = int_1^inf exp(-z t) t**-n dt``.

    Parameters
    ----------
    n : int
        Order, ``n >= 1``.
    z : complex or array_like
        Argument. On the negative real axis the value approached from the
        upper half plane is returned.

    Raises
    ------
    DomainError
        If ``n < 1`` or ``z == 0`` with ``n == 1``.
    OverflowError
        If ``exp(-Re z)`` overflows.
    """
    n = int(n)
    if n < 1:
        raise DomainError("expint_en requires n >= 1")
    z, scalar = _prepare(z)
    if n == 1:
        out = np.asarray(expint_e1(z), dtype=np.complex128)
        return _finish(out, scalar)
    if np.any(-z.real > _EXP_MAX):
        raise OverflowError("E_n(z) overflows for Re z < -709")
    out = np.empty_like(z)
    zero = z == 0
    out[zero] = 1.0 / (n - 1)
    r = np.abs(z)
    ser = ((r + z.real <= _CANCEL) | (r <= _SMALL)) & ~zero
    out[ser] = _en_series(n, z[ser])
    cf = ~ser & ~zero
    out[cf] = _en_cf(n, z[cf])
    return _finish(out, scalar)


def expint_ei(z):
    """Exponential integral ``Ei(z) = -int_{-z}^inf exp(-t)/t dt``.

    Parameters
    ----------
    z : complex or array_like
        Argument; must be nonzero.

    Returns
    -------
    complex or ndarray
        Principal value. For negative real ``z`` the real value
        ``-E1(-z)`` is returned.

    Raises
    ------
    DomainError
        If ``z == 0``.
    OverflowError
        If ``exp(Re z)`` is not representable.
    """
    z, scalar = _prepare(z)
    if np.any(z == 0):
        raise DomainError("Ei has a logarithmic singularity at z = 0")
    if np.any(z.real > _EXP_MAX):
        raise OverflowError("Ei(z) overflows for Re z > 709")
    out = np.empty_like(z)
    r = np.abs(z)
    on_cut = (z.imag == 0) & (z.real < 0)
    ser = ((r - z.real <= _CANCEL) | (r <= _SMALL)) & ~on_cut
    zs = z[ser]
    out[ser] = EULER + np.log(zs) + _ein_part(zs)
    if on_cut.any():
        out[on_cut] = -expint_e1((-z[on_cut].real).astype(np.complex128)).real
    cf = ~ser & ~on_cut
    zc = z[cf]
    out[cf] = -_e1_cf(-zc) + 1j * np.pi * np.sign(zc.imag)
    return _finish(out, scalar)


def cosint_ci(z):
    """Cosine integral ``Ci(z) = -int_z^inf cos(t)/t dt`` (principal branch).

    Raises
    ------
    DomainError
        If ``z == 0``.
    BranchError
        If ``z`` lies on the negative real axis.
    OverflowError
        If ``|Im z|`` exceeds the exponential range.
    """
    z, scalar = _prepare(z)
    if np.any(z == 0):
        raise DomainError("Ci has a logarithmic singularity at z = 0")
    if np.any((z.imag == 0) & (z.real < 0)):
        raise BranchError("Ci is evaluated on its branch cut (negative real axis)")
    if np.any(np.abs(z.imag) > _EXP_MAX):
        raise OverflowError("Ci(z) overflows for |Im z| > 709")
    out = np.empty_like(z)
    r = np.abs(z)
    ser = (r - np.abs(z.imag) <= _CANCEL) | (r <= _SMALL)
    zs = z[ser]
    out[ser] = EULER + np.log(zs) + _cin_part(zs)
    cf = ~ser
    zc = z[cf]
    flip = zc.real < 0
    w = np.where(flip, -zc, zc)
    val = -0.5 * (_e1_cf(1j * w) + _e1_cf(-1j * w))
    # Ci(z) - Ci(-z) = log(z) - log(-z) = i*pi*sign(Im z) on the left half plane
    val = np.where(flip, val + 1j * np.pi * np.sign(zc.imag), val)
    out[cf] = val
    return _finish(out, scalar)


def sinint_si(z):
    """Sine integral ``Si(z) = int_0^z sin(t)/t dt`` (entire).

    Raises
    ------
    OverflowError
        If ``|Im z|`` exceeds the exponential range.
    """
    z, scalar = _prepare(z)
    if np.any(np.abs(z.imag) > _EXP_MAX):
        raise OverflowError("Si(z) overflows for |Im z| > 709")
    out = np.empty_like(z)
    r = np.abs(z)
    ser = (r - np.abs(z.imag) <= _CANCEL) | (r <= _SMALL)
    out[ser] = _si_series(z[ser])
    cf = ~ser
    zc = z[cf]
    flip = zc.real < 0
    w = np.where(flip, -zc, zc)
    val = 0.5 * np.pi + (_e1_cf(1j * w) - _e1_cf(-1j * w)) / 2j
    out[cf] = np.where(flip, -val, val)
    return _finish(out, scalar)


def sinhint_shi(z):
    """Hyperbolic sine integral ``Shi(z) = int_0^z sinh(t)/t dt = -i Si(i z)``.

    Raises
    ------
    OverflowError
        If ``|Re z|`` exceeds the exponential range.
    """
    z, scalar = _prepare(z)
    out = -1j * np.asarray(sinint_si(1j * z))
    return _finish(out, scalar)


def _erf_overflow_check(z):
    if np.any(z.imag**2 - z.real**2 > _EXP_MAX):
        raise OverflowError("erf(z) overflows: exp(Im(z)**2) not representable")


# Maclaurin cancellation grows like exp(2 (Re z)^2); 1.35 keeps it below exp(_CANCEL).
_ERF_RE = 1.35


def _erf_maclaurin(z):
    if z.size == 0:
        return z.copy()
    z2 = z * z
    s = _sum_series(
        z2,
        (z.copy(), z.copy(), 0),
        lambda w, k: -w / k,
        lambda k: 1.0 / (2 * k + 1),
        np.abs(z2),
    )
    return 2.0 / np.sqrt(np.pi) * s


def erfc_c(z):
    """Complementary error function ``1 - erf(z)``, accurate for large ``Re z``.

    Raises
    ------
    OverflowError
        If ``exp(-z**2)`` is not representable.
    """
    z, scalar = _prepare(z)
    _erf_overflow_check(z)
    out = np.empty_like(z)
    mac = np.abs(z.real) <= _ERF_RE
    out[mac] = 1.0 - _erf_maclaurin(z[mac])
    pos = z.real > _ERF_RE
    out[pos] = _erfc_cf(z[pos])
    neg = z.real < -_ERF_RE
    out[neg] = 2.0 - _erfc_cf(-z[neg])
    return _finish(out, scalar)


def erf_c(z):
    """Error function ``erf(z) = 2/sqrt(pi) int_0^z exp(-t**2) dt`` (entire).

    No clamping is applied; ``|erf(z)|`` can exceed 1 off the real axis.

    Parameters
    ----------
    z : complex or array_like

    Returns
    -------
    complex or ndarray

    Raises
    ------
    OverflowError
        If ``exp(Im(z)**2)`` is not representable.

    Examples
    --------
    >>> round(erf_c(1.0).real, 15)
    0.842700792949715
    """
    z, scalar = _prepare(z)
    _erf_overflow_check(z)
    out = np.empty_like(z)
    mac = np.abs(z.real) <= _ERF_RE
    out[mac] = _erf_maclaurin(z[mac])
    pos = z.real > _ERF_RE
    out[pos] = 1.0 - _erfc_cf(z[pos])
    neg = z.real < -_ERF_RE
    out[neg] = _erfc_cf(-z[neg]) - 1.0
    return _finish(out, scalar)
