"""Reservoir spectral densities and thermal occupation factors.

Units throughout: hbar = k_B = omega_c = 1, so frequencies are measured in
units of the cutoff and time is the dimensionless ``tau = omega_c * t``.
The oscillator frequency is ``omega_0 = 1 / x`` with ``x = omega_c / omega_0``.
"""

from dataclasses import dataclass, field
from enum import Enum
import math
import warnings

import numpy as np

from .errors import DomainError

__all__ = [
    "Family",
    "HighT",
    "ZeroT",
    "BoseEinstein",
    "ReservoirSpec",
    "spectral_density",
    "thermal_factor",
    "ALPHA_WARN",
    "THETA_MIN",
]

ALPHA_MAX = 0.5
ALPHA_WARN = 0.2
THETA_MIN = 10.0


class Family(Enum):
    """Spectral density family ``J(w) = w**s * exp(-w)``."""

    OHMIC = 1.0
    SUBOHMIC = 0.5
    SUPEROHMIC = 3.0

    @property
    def s(self):
        return self.value

    @classmethod
    def parse(cls, name):
        key = str(name).strip().lower().replace("-", "").replace("_", "")
        table = {"ohmic": cls.OHMIC, "subohmic": cls.SUBOHMIC, "superohmic": cls.SUPEROHMIC}
        if key not in table:
            raise DomainError(f"unknown spectrum {name!r}; expected one of {sorted(table)}")
        return table[key]


@dataclass(frozen=True)
class HighT:
    """High-temperature limit, ``2N(w) + 1 -> 2 theta / w``."""

    theta: float

    def label(self):
        return f"high:{self.theta:g}"


@dataclass(frozen=True)
class ZeroT:
    """Zero-temperature limit, ``2N(w) + 1 -> 1``."""

    def label(self):
        return "zero"


@dataclass(frozen=True)
class BoseEinstein:
    """Full Bose-Einstein occupation, ``2N(w) + 1 = coth(w / (2 theta))``.

    Only the quadrature oracle supports this regime.
    """

    theta: float

    def label(self):
        return f"bose:{self.theta:g}"


@dataclass(frozen=True)
class ReservoirSpec:
    """Parameters of one (of two identical) local reservoirs.

    Parameters
    ----------
    family : Family
        Spectral density family.
    x : float
        Cutoff ratio ``omega_c / omega_0``; must be positive.
    alpha : float
        Dimensionless coupling in ``(0, 0.5]``. Values above 0.2 are accepted
        with a warning recorded in ``notes``.
    temp : HighT, ZeroT or BoseEinstein
        Temperature regime. ``HighT`` requires ``theta >= 10``.
    s_override : float, optional
        Arbitrary exponent ``s > 0`` for the quadrature oracle. Closed forms
        reject specs that set it.
    """

    family: Family
    x: float
    alpha: float
    temp: object
    s_override: float = None
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family.parse(self.family))
        if not (math.isfinite(self.x) and self.x > 0):
            raise DomainError(f"x must be a positive finite number, got {self.x!r}")
        if not (0 < self.alpha <= ALPHA_MAX):
            raise DomainError(f"alpha must lie in (0, {ALPHA_MAX}], got {self.alpha!r}")
        notes = list(self.notes)
        if self.alpha > ALPHA_WARN:
            msg = f"alpha={self.alpha:g} exceeds {ALPHA_WARN}; weak-coupling expansion may be inaccurate"
            warnings.warn(msg, RuntimeWarning, stacklevel=3)
            notes.append(msg)
        if isinstance(self.temp, HighT):
            if not self.temp.theta >= THETA_MIN:
                raise DomainError(f"high-T limit requires theta >= {THETA_MIN:g}, got {self.temp.theta!r}")
        elif isinstance(self.temp, BoseEinstein):
            if not self.temp.theta > 0:
                raise DomainError("theta must be positive")
        elif not isinstance(self.temp, ZeroT):
            raise DomainError(f"unsupported temperature regime {self.temp!r}")
        if self.s_override is not None and not self.s_override > 0:
            raise DomainError("s_override must be positive")
        object.__setattr__(self, "notes", tuple(notes))

    @property
    def s(self):
        return self.family.s if self.s_override is None else float(self.s_override)

    @property
    def omega0(self):
        return 1.0 / self.x

    @property
    def theta_x(self):
        """``k_B T / (hbar omega_0)``, recorded so the high-T regime can be audited."""
        if isinstance(self.temp, (HighT, BoseEinstein)):
            return self.temp.theta * self.x
        return 0.0

    def with_alpha(self, alpha):
        return ReservoirSpec(self.family, self.x, alpha, self.temp, self.s_override)


def spectral_density(spec, w):
    """Spectral density ``J_s(w) = w**s exp(-w)`` in cutoff units.

    Parameters
    ----------
    spec : ReservoirSpec
    w : float or array_like
        Frequencies, ``w >= 0``.

    Returns
    -------
    float or ndarray
        Nonnegative values of ``J``.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise DomainError("spectral density is defined for w >= 0")
    out = w**spec.s * np.exp(-w)
    return float(out) if out.ndim == 0 else out


def thermal_factor(spec, w):
    """Thermal weight ``2N(w) + 1`` in the regime selected by ``spec.temp``.

    ``HighT`` gives ``2 theta / w``, ``ZeroT`` gives 1 and ``BoseEinstein``
    gives ``coth(w / (2 theta))``.
    """
    w = np.asarray(w, dtype=float)
    if isinstance(spec.temp, ZeroT):
        out = np.ones_like(w)
    else:
        if np.any(w <= 0):
            raise DomainError("thermal factor diverges at w <= 0")
        if isinstance(spec.temp, HighT):
            out = 2.0 * spec.temp.theta / w
        else:
            out = 1.0 / np.tanh(w / (2.0 * spec.temp.theta))
    return float(out) if out.ndim == 0 else out
