"""Two-mode Gaussian states: covariance propagation and entanglement.

Quadratures are ordered ``(x1, p1, x2, p2)`` and the vacuum covariance is
``identity / 2``. Covariance matrices are handled as plain ``(4, 4)``
arrays wrapped in :class:`CovMatrix` for validation and block access.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AsymmetryError, DomainError, GridError, NumericalError, ShapeError

__all__ = [
    "CovMatrix",
    "TwbParams",
    "SymplecticInvariants",
    "twb_covariance",
    "entropy_of_entanglement",
    "symplectic_invariants",
    "symplectic_eigenvalues",
    "is_physical",
    "eof_symmetric",
    "eof_from_invariants",
    "propagate_covariance",
    "propagate_mean",
    "evolve_blocks",
    "local_rotation",
    "ASSEMBLIES",
]

SYM_TOL = 1e-13
BLOCK_TOL = 1e-10
DISC_TOL = 1e-12
PHYS_TOL = 1e-9
ASSEMBLIES = ("consistent", "printed")


class CovMatrix:
    """Real symmetric 4x4 covariance matrix of two modes.

    Parameters
    ----------
    matrix : array_like, shape (4, 4)
    check : bool
        Validate shape, finiteness and symmetry (relative ``1e-13``).
    """

    def __init__(self, matrix, check=True):
        m = np.array(matrix, dtype=float)
        if check:
            if m.shape != (4, 4):
                raise ShapeError(f"covariance matrix must be 4x4, got {m.shape}")
            if not np.all(np.isfinite(m)):
                raise ShapeError("covariance matrix has non-finite entries")
            scale = max(1.0, float(np.max(np.abs(m))))
            if np.max(np.abs(m - m.T)) > SYM_TOL * scale:
                raise ShapeError("covariance matrix is not symmetric")
        self.matrix = m

    @classmethod
    def from_blocks(cls, A, B, C):
        A, B, C = (np.asarray(v, dtype=float) for v in (A, B, C))
        return cls(np.block([[A, C], [C.T, B]]))

    @property
    def A(self):
        return self.matrix[:2, :2]

    @property
    def B(self):
        return self.matrix[2:, 2:]

    @property
    def C(self):
        return self.matrix[:2, 2:]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"CovMatrix({self.matrix!r})"


@dataclass(frozen=True)
class TwbParams:
    """Twin-beam (two-mode squeezed vacuum) state with squeezing ``r >= 0``."""

    r: float

    def __post_init__(self):
        if not (np.isfinite(self.r) and self.r >= 0):
            raise DomainError(f"squeezing must satisfy r >= 0, got {self.r!r}")


class SymplecticInvariants(NamedTuple):
    i1: float
    i3: float
    i4: float


def _as_r(p):
    return p.r if isinstance(p, TwbParams) else TwbParams(float(p)).r


def _as_matrix(sigma):
    return sigma.matrix if isinstance(sigma, CovMatrix) else CovMatrix(sigma).matrix


def twb_covariance(p):
    """Covariance matrix of the twin-beam state.

    ``A = B = cosh(2r)/2 * 1`` and ``C = diag(sinh(2r)/2, -sinh(2r)/2)``.
    """
    r = _as_r(p)
    a = np.cosh(2 * r) / 2
    c = np.sinh(2 * r) / 2
    return CovMatrix.from_blocks(a * np.eye(2), a * np.eye(2), np.diag([c, -c]))


def entropy_of_entanglement(p):
    """Entanglement of the pure twin-beam state (nats).

    ``E0(r) = 2 [cosh(r)**2 ln cosh(r) - sinh(r)**2 ln sinh(r)]``, with the
    ``r -> 0`` limit taken analytically.
    """
    r = _as_r(p)
    if r == 0:
        return 0.0
    ch, sh = np.cosh(r), np.sinh(r)
    return float(2 * (ch**2 * np.log(ch) - sh**2 * np.log(sh)))


def symplectic_invariants(sigma):
    """Return ``(det A, det C, det sigma)``."""
    m = _as_matrix(sigma)
    return SymplecticInvariants(
        float(np.linalg.det(m[:2, :2])),
        float(np.linalg.det(m[:2, 2:])),
        float(np.linalg.det(m)),
    )


def symplectic_eigenvalues(sigma):
    """Symplectic eigenvalues ``(nu_-, nu_+)`` of a two-mode covariance matrix.

    Taken from the spectrum of ``i J sigma``; the invariant formula loses
    about ``log10(cosh(2r)^2)`` digits for strongly squeezed states.
    """
    lo, hi = _sympl_eigs_batch(_as_matrix(sigma)[None])
    return float(lo[0]), float(hi[0])


_PT = np.diag([1.0, 1.0, 1.0, -1.0])
_J4 = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _sympl_eigs_batch(m):
    """``(nu_-, nu_+)`` for a stack of 4x4 covariance matrices."""
    ev = np.sort(np.abs(np.linalg.eigvals(_J4 @ m)), axis=-1)
    # eigenvalues come in pairs +-i nu
    return 0.5 * (ev[..., 0] + ev[..., 1]), 0.5 * (ev[..., 2] + ev[..., 3])


def is_physical(sigma, tol=PHYS_TOL):
    """True when both symplectic eigenvalues are at least ``1/2 - tol``."""
    lo, _ = symplectic_eigenvalues(sigma)
    return bool(lo >= 0.5 - tol)


def eof_from_invariants(i1, i3, i4):
    """Entanglement of formation of a symmetric state from its invariants.

    Vectorised over array inputs. Small negative discriminants (relative
    ``1e-12``) are clamped to zero.

    Raises
    ------
    NumericalError
        If a discriminant is negative beyond tolerance or ``i1 <= 0``.
    """
    i1 = np.asarray(i1, dtype=float)
    i3 = np.asarray(i3, dtype=float)
    i4 = np.asarray(i4, dtype=float)
    if np.any(i1 <= 0):
        raise NumericalError("det A must be positive")
    D = i1**2 + i3**2 - i4
    scale = np.maximum(1.0, i1**2)
    if np.any(D < -DISC_TOL * scale):
        raise NumericalError("I1^2 + I3^2 - I4 is negative")
    D = np.maximum(D, 0.0)
    disc = D**2 - (2 * i1 * i3) ** 2
    if np.any(disc < -DISC_TOL * scale**2):
        raise NumericalError("discriminant of c_+- is negative")
    root = np.sqrt(np.maximum(disc, 0.0))
    cp = np.sqrt((D + root) / (2 * i1))
    cm = np.sqrt(np.maximum(D - root, 0.0) / (2 * i1))
    an = np.sqrt(i1)
    kappa = np.sqrt(np.maximum((an - cp) * (an - cm), 0.0))
    return _eof_from_kappa(kappa)


def _eof_from_kappa(kappa):
    kappa = np.asarray(kappa, dtype=float)
    ent = kappa < 0.5
    k = np.where(ent, kappa, 0.25)
    xm = (k**2 + 0.25) / (2 * k)
    with np.errstate(divide="ignore", invalid="ignore"):
        ef = (xm + 0.5) * np.log(xm + 0.5) - np.where(
            xm > 0.5, (xm - 0.5) * np.log(np.maximum(xm - 0.5, 1e-300)), 0.0
        )
    out = np.where(ent, ef, 0.0)
    return float(out) if out.ndim == 0 else out


def eof_symmetric(sigma):
    """Entanglement of formation of a symmetric two-mode Gaussian state (nats).

    Parameters
    ----------
    sigma : CovMatrix or array_like
        Covariance with ``A == B`` to within ``1e-10``.

    Returns
    -------
    float
        Zero when the minimum symplectic eigenvalue of the partial
        transpose is at least ``1/2``.

    Raises
    ------
    AsymmetryError
        If the local blocks differ.
    NumericalError
        If a discriminant is negative beyond tolerance.
    """
    m = _as_matrix(sigma)
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m[:2, :2] - m[2:, 2:])) > BLOCK_TOL * scale:
        raise AsymmetryError("eof_symmetric needs identical local blocks")
    inv = symplectic_invariants(m)
    # raises on a bad discriminant; kappa itself comes from the partially
    # transposed spectrum, which keeps its digits at large squeezing
    eof_from_invariants(inv.i1, inv.i3, inv.i4)
    pt = _PT @ m @ _PT
    kappa, _ = _sympl_eigs_batch(pt[None])
    return float(_eof_from_kappa(kappa[0]))


def local_rotation(phi1, phi2):
    """Symplectic matrix ``R(phi1) (+) R(phi2)`` of local phase rotations."""
    def rot(p):
        c, s = np.cos(p), np.sin(p)
        return np.array([[c, s], [-s, c]])

    out = np.zeros((4, 4))
    out[:2, :2] = rot(phi1)
    out[2:, 2:] = rot(phi2)
    return out


def _symmetric_family(m):
    scale = max(1.0, float(np.max(np.abs(m))))
    tol = 1e-12 * scale
    A, B, C = m[:2, :2], m[2:, 2:], m[:2, 2:]
    if abs(A[0, 1]) > tol or abs(A[0, 0] - A[1, 1]) > tol:
        raise ShapeError("A0 must be proportional to the identity")
    if abs(B[0, 1]) > tol or abs(B[0, 0] - B[1, 1]) > tol:
        raise ShapeError("B0 must be proportional to the identity")
    if abs(C[0, 1]) > tol or abs(C[1, 0]) > tol:
        raise ShapeError("C0 must be diagonal")
    return A[0, 0], B[0, 0], C[0, 0], C[1, 1]


def _series_at(cs, tau):
    """Values of the integrated series at ``tau`` (exact grid hit or linear interpolation)."""
    t = cs.tau_grid
    tau = float(tau)
    span = t[-1] - t[0]
    if tau < t[0] - 1e-12 * span or tau > t[-1] + 1e-12 * span:
        raise GridError(f"tau={tau} outside the coefficient grid [{t[0]}, {t[-1]}]")
    names = ("big_gamma", "delta_gamma", "delta_co", "delta_si", "pi_co", "pi_si")
    if any(getattr(cs, n) is None for n in names):
        raise GridError("coefficient set lacks the integrated series")
    i = int(np.searchsorted(t, tau))
    for j in (i - 1, i):
        if 0 <= j < t.size and abs(t[j] - tau) <= 1e-12 * max(span, 1.0):
            return {n: float(getattr(cs, n)[j]) for n in names}
    return {n: float(np.interp(tau, t, getattr(cs, n))) for n in names}


def evolve_blocks(a, b, c1, c2, cs, spec, secular_only=False, assembly="consistent"):
    """Covariance blocks on the whole grid of ``cs``.

    Returns
    -------
    dict
        Arrays ``A`` and ``B`` of shape ``(n, 2, 2)`` and ``C`` of the same
        shape, for the initial blocks ``A0 = a 1``, ``B0 = b 1`` and
        ``C0 = diag(c1, c2)``.

    Notes
    -----
    With ``R`` the free rotation by ``w0 tau`` (``x -> x cos + p sin``) the
    solution is ``sigma_t = exp(-Gamma) (R+R) sigma_0 (R+R)^T + 2 (W+W)`` where

        2W = [[D_G - (D_co - P_si), D_si + P_co],
              [D_si + P_co,         D_G + (D_co - P_si)]].

    This is the exact solution of the second-moment equations with
    rotation-averaged damping ``-2 gamma`` on both quadratures, diffusion
    ``2 Delta`` into ``<p^2>`` and ``Pi`` into ``<{x, p}>/2``.

    ``assembly="printed"`` instead uses ``D_G + (D_co - P_si)`` on the
    diagonal, ``-(D_si - P_co)`` off it and a cross block
    ``c exp(-Gamma) [[cos, sin], [sin, -cos]]`` at angle ``2 w0 tau``. That
    variant is kept only to audit its effect.
    """
    if assembly not in ASSEMBLIES:
        raise DomainError(f"assembly must be one of {ASSEMBLIES}")
    t = cs.tau_grid
    eg = np.exp(-cs.big_gamma)
    ang = t / spec.x
    co, si = np.cos(ang), np.sin(ang)
    n = t.size
    dg = cs.delta_gamma
    if secular_only:
        u = np.zeros(n)
        off = np.zeros(n)
    elif assembly == "consistent":
        u = cs.pi_si - cs.delta_co
        off = cs.delta_si + cs.pi_co
    else:
        u = cs.delta_co - cs.pi_si
        off = cs.pi_co - cs.delta_si
    W = np.empty((n, 2, 2))
    W[:, 0, 0] = dg + u
    W[:, 1, 1] = dg - u
    W[:, 0, 1] = W[:, 1, 0] = off
    eye = np.eye(2)
    A = a * eg[:, None, None] * eye + W
    B = b * eg[:, None, None] * eye + W
    R = np.empty((n, 2, 2))
    R[:, 0, 0] = co
    R[:, 0, 1] = si
    R[:, 1, 0] = -si
    R[:, 1, 1] = co
    C0 = np.diag([c1, c2])
    C = eg[:, None, None] * (R @ C0 @ np.transpose(R, (0, 2, 1)))
    if assembly == "printed":
        if abs(c1 + c2) > 1e-12 * max(1.0, abs(c1)):
            raise DomainError("printed assembly is defined for c1 = -c2 only")
        c2w = np.cos(2 * ang)
        s2w = np.sin(2 * ang)
        C = c1 * eg[:, None, None] * np.stack(
            [np.stack([c2w, s2w], -1), np.stack([s2w, -c2w], -1)], -2
        )
    return {"A": A, "B": B, "C": C}


def propagate_covariance(sigma0, coeffs, spec, tau, secular_only=False, assembly="consistent"):
    """Covariance matrix at time ``tau``.

    Parameters
    ----------
    sigma0 : CovMatrix or array_like
        Initial covariance with ``A0 = a 1``, ``B0 = b 1`` and diagonal ``C0``.
    coeffs : CoefficientSet
        Fully integrated series (see :func:`cvreservoir.coeffs.secular_integrals`).
    spec : ReservoirSpec
    tau : float
        Time on, or interpolable from, ``coeffs.tau_grid``.
    secular_only : bool
        Drop the four oscillating integrals.

    Raises
    ------
    GridError
        If ``tau`` lies outside the grid.
    ShapeError
        If ``sigma0`` is not in the symmetric family.
    """
    m0 = _as_matrix(sigma0)
    a, b, c1, c2 = _symmetric_family(m0)
    v = _series_at(coeffs, tau)
    eg = np.exp(-v["big_gamma"])
    ang = float(tau) / spec.x
    co, si = np.cos(ang), np.sin(ang)
    if secular_only:
        u = off = 0.0
    elif assembly == "consistent":
        u = v["pi_si"] - v["delta_co"]
        off = v["delta_si"] + v["pi_co"]
    else:
        u = v["delta_co"] - v["pi_si"]
        off = v["pi_co"] - v["delta_si"]
    W = np.array([[v["delta_gamma"] + u, off], [off, v["delta_gamma"] - u]])
    R = np.array([[co, si], [-si, co]])
    if assembly == "printed":
        C = c1 * eg * np.array([[np.cos(2 * ang), np.sin(2 * ang)], [np.sin(2 * ang), -np.cos(2 * ang)]])
    elif assembly == "consistent":
        C = eg * R @ np.diag([c1, c2]) @ R.T
    else:
        raise DomainError(f"assembly must be one of {ASSEMBLIES}")
    if float(tau) == 0.0:
        return CovMatrix(m0)
    A = a * eg * np.eye(2) + W
    B = b * eg * np.eye(2) + W
    m = np.block([[A, C], [C.T, B]])
    return CovMatrix(0.5 * (m + m.T))


def propagate_mean(m0, coeffs, spec, tau):
    """First moments at ``tau``: ``exp(-Gamma/2) (R+R) m0``."""
    m0 = np.asarray(m0, dtype=float)
    if m0.shape != (4,) or not np.all(np.isfinite(m0)):
        raise ShapeError("mean vector must have 4 finite entries")
    t = coeffs.tau_grid
    if coeffs.big_gamma is None:
        raise GridError("coefficient set lacks big_gamma")
    span = t[-1] - t[0]
    if tau < t[0] - 1e-12 * span or tau > t[-1] + 1e-12 * span:
        raise GridError(f"tau={tau} outside the coefficient grid")
    G = float(np.interp(tau, t, coeffs.big_gamma))
    ang = float(tau) / spec.x
    rot = local_rotation(ang, ang)
    return np.exp(-G / 2) * rot @ m0
