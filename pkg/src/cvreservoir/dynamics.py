"""Entanglement trajectories, death/revival detection and regime labels."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .coeffs import (
    CoeffMethod,
    Truncation,
    compute_coefficients,
    integrate_big_gamma,
    secular_integrals,
)
from .coeffs.series import SAMPLES_PER_PERIOD
from .errors import DomainError, ThresholdError
from .gaussian import (
    PHYS_TOL,
    TwbParams,
    _sympl_eigs_batch,
    entropy_of_entanglement,
    eof_from_invariants,
    evolve_blocks,
)

__all__ = [
    "Trajectory",
    "RegimeReport",
    "Label",
    "Attribution",
    "run_trajectory",
    "detect_events",
    "disentanglement_time",
    "default_eps",
    "sweep",
    "TAU_MAX_DEFAULT",
    "N_STEPS_DEFAULT",
]

TAU_MAX_DEFAULT = 10.0
N_STEPS_DEFAULT = 2000
MIN_STEPS = 16


class Label(Enum):
    ESD = "ESD"
    NMREV = "NMRev"
    NSREV = "NSRev"
    MIXED = "Mixed"
    NODEATH = "NoDeath"


class Attribution(Enum):
    COEFF_NEGATIVE = "CoeffNegative"
    COEFF_POSITIVE = "CoeffPositive"


@dataclass
class Trajectory:
    tau_grid: np.ndarray
    eof_exact: np.ndarray
    eof_secular: np.ndarray
    coeff_ref: object
    physicality_flags: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def initial_eof(self):
        return float(self.eof_exact[0])


@dataclass
class RegimeReport:
    label: Label
    death_times: list
    revival_times: list
    attribution: list
    gamma_negative: list = field(default_factory=list)
    eps: float = None

    def to_dict(self):
        return {
            "label": self.label.value,
            "death_times": [float(v) for v in self.death_times],
            "revival_times": [float(v) for v in self.revival_times],
            "attribution": [a.value for a in self.attribution],
            "gamma_negative": [bool(v) for v in self.gamma_negative],
            "eps": self.eps,
        }


def _steps_needed(spec, tau_max, n_steps):
    h_max = math.pi * spec.x / SAMPLES_PER_PERIOD
    need = int(math.ceil(tau_max / h_max))
    return max(int(n_steps), need)


def run_trajectory(spec, p, tau_max=TAU_MAX_DEFAULT, n_steps=N_STEPS_DEFAULT,
                   truncation=Truncation.EXACT, method=CoeffMethod.CLOSED_FORM,
                   assembly="consistent"):
    """Exact and secular entanglement of formation of an initial twin beam.

    Parameters
    ----------
    spec : ReservoirSpec
    p : TwbParams or float
        Squeezing of the initial state.
    tau_max : float
    n_steps : int
        Number of grid intervals, at least 16. Raised automatically until the
        ``2/x`` oscillation has 20 samples per period; ``meta['n_steps']``
        reports the value used.

    Returns
    -------
    Trajectory
    """
    r = p.r if isinstance(p, TwbParams) else TwbParams(float(p)).r
    if not tau_max > 0:
        raise DomainError("tau_max must be positive")
    if int(n_steps) < MIN_STEPS:
        raise DomainError(f"n_steps must be at least {MIN_STEPS}")
    n = _steps_needed(spec, tau_max, n_steps)
    t = np.linspace(0.0, float(tau_max), n + 1)
    cs = compute_coefficients(spec, t, method=method)
    cs = integrate_big_gamma(cs)
    cs = secular_integrals(cs, spec, truncation)
    a = np.cosh(2 * r) / 2
    c = np.sinh(2 * r) / 2
    out = {}
    for key, sec in (("exact", False), ("secular", True)):
        blk = evolve_blocks(a, a, c, -c, cs, spec, secular_only=sec, assembly=assembly)
        A, C = blk["A"], blk["C"]
        i1 = np.linalg.det(A)
        i3 = np.linalg.det(C)
        i4 = np.linalg.det(_full(A, C))
        out[key] = (eof_from_invariants(i1, i3, i4), A, C)
    _, A, C = out["exact"]
    lo, _ = _sympl_eigs_batch(_full(A, C))
    phys = lo >= 0.5 - PHYS_TOL
    meta = {
        "family": spec.family.name,
        "x": spec.x,
        "alpha": spec.alpha,
        "temperature": spec.temp.label(),
        "theta_x": spec.theta_x,
        "r": r,
        "tau_max": float(tau_max),
        "n_steps": n,
        "n_steps_requested": int(n_steps),
        "truncation": Truncation(truncation).value,
        "assembly": assembly,
        "coefficients": dict(cs.meta),
        "notes": list(spec.notes),
    }
    return Trajectory(t, out["exact"][0], out["secular"][0], cs, phys, meta)


def _full(A, C):
    """Batched ``[[A, C], [C^T, A]]``."""
    top = np.concatenate([A, C], axis=2)
    bot = np.concatenate([np.transpose(C, (0, 2, 1)), A], axis=2)
    return np.concatenate([top, bot], axis=1)


def default_eps(traj_or_r):
    """``max(1e-6, 1e-3 * E0)`` with ``E0`` the initial entanglement."""
    if isinstance(traj_or_r, Trajectory):
        e0 = traj_or_r.initial_eof
    else:
        e0 = entropy_of_entanglement(traj_or_r)
    return max(1e-6, 1e-3 * e0)


def _crossings(tau, e, eps):
    """Death and revival times of ``e`` against threshold ``eps``."""
    alive = e >= eps
    deaths, revivals = [], []
    idx_d, idx_r = [], []
    state = bool(alive[0])
    for i in range(1, len(e)):
        if state and not alive[i]:
            deaths.append(float(tau[i]))
            idx_d.append(i)
            state = False
        elif not state and alive[i]:
            revivals.append(float(tau[i]))
            idx_r.append(i)
            state = True
    return deaths, revivals, idx_d, idx_r


def detect_events(traj, eps=None, series="exact"):
    """Deaths, revivals and regime label of an entanglement trajectory.

    A death is the first sample below ``eps`` after being at or above it and
    a revival the first sample back at or above ``eps``. A revival is
    attributed ``CoeffNegative`` when ``Delta < 0`` anywhere between the
    preceding death and the revival, else ``CoeffPositive``. Whether
    ``gamma`` was negative there is recorded as well.

    Raises
    ------
    ThresholdError
        If ``eps`` is not below the initial entanglement.
    """
    e = traj.eof_exact if series == "exact" else traj.eof_secular
    if eps is None:
        eps = default_eps(traj)
    if not (eps > 0 and eps < e[0]):
        raise ThresholdError(f"eps={eps!r} must lie in (0, initial EoF={e[0]!r})")
    tau = traj.tau_grid
    deaths, revivals, idx_d, idx_r = _crossings(tau, e, eps)
    d = traj.coeff_ref.delta
    g = traj.coeff_ref.gamma_c
    attribution, gneg = [], []
    for k, ir in enumerate(idx_r):
        lo = idx_d[k]
        seg = slice(lo, ir + 1)
        attribution.append(
            Attribution.COEFF_NEGATIVE if np.any(d[seg] < 0) else Attribution.COEFF_POSITIVE
        )
        gneg.append(bool(np.any(g[seg] < 0)))
    if not deaths:
        label = Label.NODEATH
    elif not revivals:
        label = Label.ESD
    elif all(a is Attribution.COEFF_NEGATIVE for a in attribution):
        label = Label.NMREV
    elif all(a is Attribution.COEFF_POSITIVE for a in attribution):
        label = Label.NSREV
    else:
        label = Label.MIXED
    return RegimeReport(label, deaths, revivals, attribution, gneg, float(eps))


def disentanglement_time(traj, eps=None, series="exact"):
    """Time after which the entanglement stays below ``eps``.

    Returns ``None`` if the state is still entangled at the end of the grid
    and ``0.0`` if it never reached ``eps`` (for example ``r = 0``).
    """
    e = traj.eof_exact if series == "exact" else traj.eof_secular
    if eps is None:
        eps = default_eps(traj)
    if not eps > 0:
        raise ThresholdError("eps must be positive")
    if np.max(e) < eps:
        return 0.0
    if e[-1] >= eps:
        return None
    deaths, _, _, _ = _crossings(traj.tau_grid, e, eps)
    return deaths[-1]


def _one(args):
    spec, r, tau_max, n_steps, kw = args
    try:
        traj = run_trajectory(spec, r, tau_max, n_steps, **kw)
        report = None
        if traj.initial_eof > default_eps(traj):
            report = detect_events(traj)
        meta = dict(traj.meta)
        meta["t_dis_exact"] = disentanglement_time(traj)
        meta["t_dis_secular"] = disentanglement_time(traj, series="secular")
        return meta, report, traj
    except Exception as exc:  # collected per item, the batch continues
        meta = {"family": spec.family.name, "x": spec.x, "r": float(r),
                "error": f"{type(exc).__name__}: {exc}"}
        return meta, None, None


def sweep(specs, rs, tau_max=TAU_MAX_DEFAULT, n_steps=N_STEPS_DEFAULT, threads=1, **kw):
    """Run every ``(spec, r)`` pair and detect events.

    Items are ordered spec-major, matching the input order. A failing item
    yields ``(meta with 'error', None, None)`` and does not stop the batch.
    """
    specs = list(specs)
    rs = [float(r) for r in rs]
    if not specs or not rs:
        raise DomainError("sweep needs at least one spec and one r")
    jobs = [(s, r, tau_max, n_steps, kw) for s in specs for r in rs]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as ex:
            return list(ex.map(_one, jobs))
    return [_one(j) for j in jobs]
