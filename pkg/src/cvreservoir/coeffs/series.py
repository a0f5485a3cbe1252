"""Coefficient time series and the integrated quantities built from them.

For a sampled coefficient ``f`` the propagation needs

    Gamma(tau)   = 2 int_0^tau gamma
    Delta_Gamma  = exp(-Gamma(tau)) int_0^tau exp(Gamma(s)) Delta(s) ds
    f_co, f_si   = exp(-Gamma(tau)) int_0^tau exp(Gamma(s)) f(s) {cos, sin}(2 w0 (tau - s)) ds

for ``f`` in {Delta, Pi}. All integrals are cumulative composite Simpson
sums on the grid.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
import math

import numpy as np
from scipy.integrate import cumulative_simpson

from .._io import write_csv
from ..errors import GridError, ResolutionError
from ..spectral import HighT, ZeroT
from .closed import cancellation_digits, closed_coefficients
from .oracle import oracle_series

__all__ = [
    "CoeffMethod",
    "Truncation",
    "CoefficientSet",
    "default_grid",
    "compute_coefficients",
    "integrate_big_gamma",
    "secular_integrals",
    "write_coefficients_csv",
    "COEFF_COLUMNS",
    "MAX_CANCEL_DIGITS",
    "SAMPLES_PER_PERIOD",
]

MAX_CANCEL_DIGITS = 6.0
SAMPLES_PER_PERIOD = 20
COEFF_COLUMNS = (
    "tau", "delta", "pi", "gamma", "big_gamma", "delta_gamma",
    "delta_co", "delta_si", "pi_co", "pi_si",
)


class CoeffMethod(Enum):
    CLOSED_FORM = "closed"
    QUADRATURE_ORACLE = "oracle"


class Truncation(Enum):
    EXACT = "exact"
    WEAK_COUPLING_LEADING = "weak-leading"


@dataclass
class CoefficientSet:
    """Coefficients sampled on an ascending ``tau`` grid.

    Optional fields stay ``None`` until the corresponding integration step
    has run. ``meta`` records how the series were produced.
    """

    tau_grid: np.ndarray
    delta: np.ndarray
    pi_c: np.ndarray
    gamma_c: np.ndarray
    big_gamma: np.ndarray = None
    delta_gamma: np.ndarray = None
    delta_co: np.ndarray = None
    delta_si: np.ndarray = None
    pi_co: np.ndarray = None
    pi_si: np.ndarray = None
    r_renorm: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.tau_grid)
        for name in ("delta", "pi_c", "gamma_c", "big_gamma", "delta_gamma",
                     "delta_co", "delta_si", "pi_co", "pi_si", "r_renorm"):
            v = getattr(self, name)
            if v is None:
                continue
            v = np.asarray(v, dtype=float)
            if v.shape != (n,):
                raise GridError(f"{name} has shape {v.shape}, expected ({n},)")
            if not np.all(np.isfinite(v)):
                raise GridError(f"{name} contains non-finite values")
            setattr(self, name, v)
        self.tau_grid = np.asarray(self.tau_grid, dtype=float)

    @property
    def complete(self):
        return all(getattr(self, k) is not None for k in
                   ("big_gamma", "delta_gamma", "delta_co", "delta_si", "pi_co", "pi_si"))


def default_grid(spec, tau_max, n_steps=None):
    """Uniform grid on ``[0, tau_max]``.

    Without ``n_steps`` the step is ``min(0.01, x/40)``; with it, ``n_steps``
    intervals are used.
    """
    if not tau_max > 0:
        raise GridError("tau_max must be positive")
    if n_steps is None:
        h = min(0.01, spec.x / 40.0)
        n_steps = int(math.ceil(tau_max / h))
    if n_steps < 2:
        raise GridError("a grid needs at least 3 points")
    return np.linspace(0.0, float(tau_max), int(n_steps) + 1)


def _check_grid(t):
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 3:
        raise GridError("grid must be 1-D with at least 3 points")
    if t[0] != 0.0:
        raise GridError("grid must start at tau = 0")
    if np.any(np.diff(t) <= 0):
        raise GridError("grid must be strictly ascending")
    return t


def compute_coefficients(spec, tau_grid, method=CoeffMethod.CLOSED_FORM, with_rren=False):
    """Sample Delta, Pi and gamma on ``tau_grid``.

    With ``CLOSED_FORM`` the analytic route is used unless it is outside its
    range (non-limit temperature, non-standard ``s``, estimated cancellation
    above ``MAX_CANCEL_DIGITS`` or ``exp(1/x)`` overflow). In those cases the
    quadrature oracle is used instead and ``meta['fallback']`` says why.
    ``with_rren`` adds the oracle frequency-renormalisation diagnostic.
    """
    t = _check_grid(tau_grid)
    meta = {"method": CoeffMethod(method).value, "fallback": None}
    use_oracle = CoeffMethod(method) is CoeffMethod.QUADRATURE_ORACLE
    if not use_oracle:
        reason = None
        if spec.s_override is not None:
            reason = "non-standard spectral exponent"
        elif not isinstance(spec.temp, (HighT, ZeroT)):
            reason = "temperature outside the analytic limits"
        elif 1.0 / spec.x > 700.0:
            reason = "exp(1/x) overflows"
        elif cancellation_digits(spec) > MAX_CANCEL_DIGITS:
            reason = f"estimated cancellation {cancellation_digits(spec):.1f} digits"
        if reason is not None:
            use_oracle = True
            meta["fallback"] = f"quadrature oracle ({reason})"
    if use_oracle:
        d = oracle_series(spec, t, "delta")
        p = oracle_series(spec, t, "pi")
        g = oracle_series(spec, t, "gamma")
    else:
        d, p, g = closed_coefficients(spec, t)
    rr = oracle_series(spec, t, "rren") if with_rren else None
    return CoefficientSet(t, d, p, g, r_renorm=rr, meta=meta)


def _cumsimpson(y, t):
    return cumulative_simpson(y, x=t, initial=0.0)


def integrate_big_gamma(cs):
    """Return a copy of ``cs`` with ``big_gamma = 2 int_0^tau gamma``.

    Raises
    ------
    GridError
        If the grid has fewer than 3 points.
    """
    t = _check_grid(cs.tau_grid)
    G = 2.0 * _cumsimpson(cs.gamma_c, t)
    G[0] = 0.0
    return replace(cs, big_gamma=G, meta=dict(cs.meta))


def _max_step(t):
    return float(np.max(np.diff(t)))


def secular_integrals(cs, spec, truncation=Truncation.EXACT):
    """Fill Delta_Gamma and the four oscillating integrals.

    Parameters
    ----------
    cs : CoefficientSet
        Must carry ``big_gamma`` (see :func:`integrate_big_gamma`).
    spec : ReservoirSpec
        Supplies ``2 w0 = 2/x``.
    truncation : Truncation
        ``EXACT`` keeps the ``exp(+-Gamma)`` weights; ``WEAK_COUPLING_LEADING``
        replaces them by 1.

    Raises
    ------
    ResolutionError
        If the grid step exceeds ``pi x / 20`` (fewer than 20 samples per
        period of the ``2 w0`` kernel).
    """
    t = _check_grid(cs.tau_grid)
    if cs.big_gamma is None:
        raise GridError("big_gamma must be integrated first")
    h_max = math.pi * spec.x / SAMPLES_PER_PERIOD
    if _max_step(t) > h_max * (1 + 1e-12):
        raise ResolutionError(
            f"grid step {_max_step(t):.3g} exceeds {h_max:.3g} needed to resolve the 2/x oscillation"
        )
    truncation = Truncation(truncation)
    G = cs.big_gamma if truncation is Truncation.EXACT else np.zeros_like(t)
    w = 2.0 / spec.x
    # Shift the exponent so exp(G - G_ref) stays bounded.
    g_ref = float(np.max(G))
    up = np.exp(G - g_ref)
    down = np.exp(g_ref - G)
    phase = np.exp(-1j * w * t)

    def osc(f):
        h = up * f * phase
        V = _cumsimpson(h.real, t) + 1j * _cumsimpson(h.imag, t)
        z = down * np.conj(phase) * V
        z[0] = 0.0
        return z.real, z.imag

    dg = down * _cumsimpson(up * cs.delta, t)
    dg[0] = 0.0
    dco, dsi = osc(cs.delta)
    pco, psi = osc(cs.pi_c)
    meta = dict(cs.meta)
    meta["truncation"] = truncation.value
    return replace(cs, delta_gamma=dg, delta_co=dco, delta_si=dsi, pi_co=pco, pi_si=psi, meta=meta)


def write_coefficients_csv(cs, path):
    """Dump a complete CoefficientSet as CSV (17 significant digits)."""
    if not cs.complete:
        raise GridError("coefficient set is not fully integrated")
    cols = [cs.tau_grid, cs.delta, cs.pi_c, cs.gamma_c, cs.big_gamma, cs.delta_gamma,
            cs.delta_co, cs.delta_si, cs.pi_co, cs.pi_si]
    write_csv(path, list(COEFF_COLUMNS), cols)
