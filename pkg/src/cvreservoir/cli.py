"""Batch command-line front end.

Usage::

    cvreservoir --mode trajectory --spectrum ohmic --x 10 --temperature high:100 \
        --r 2 --output run.csv
    cvreservoir --mode figure --figure fig6 --output fig6.csv

Every run writes its data file plus a ``<output>.meta.json`` sidecar. Exit
status: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.
"""

from dataclasses import asdict, dataclass, field
import datetime as _dt
import os
import sys
import warnings

import numpy as np

from . import __version__
from ._io import csv_text, json_text, atomic_write_text
from .coeffs import (
    COEFF_COLUMNS,
    Truncation,
    compute_coefficients,
    default_grid,
    integrate_big_gamma,
    secular_integrals,
)
from .dynamics import (
    N_STEPS_DEFAULT,
    TAU_MAX_DEFAULT,
    MIN_STEPS,
    default_eps,
    detect_events,
    disentanglement_time,
    run_trajectory,
    sweep,
)
from .errors import DomainError, ReservoirError, UsageError
from .spectral import Family, HighT, ReservoirSpec, ZeroT

__all__ = ["RunConfig", "FigurePreset", "PRESETS", "parse_config", "run", "main"]

MODES = ("trajectory", "sweep", "coeffs-dump", "figure")
SECULAR = ("exact", "secular", "both")
FORMATS = ("csv", "json")
UNITS_NOTE = (
    "hbar = k_B = omega_c = 1; tau = omega_c t; x = omega_c / omega_0; "
    "theta = k_B T / (hbar omega_c); EoF in nats"
)
FLAGS = (
    "mode", "spectrum", "x", "alpha", "temperature", "r", "tau-max", "steps",
    "secular", "truncation", "figure", "output", "format", "config", "threads",
)
# Fields a figure preset fixes; the command line may not override them.
PINNED = ("spectrum", "x", "alpha", "temperature", "r")


@dataclass(frozen=True)
class FigurePreset:
    id: str
    families: tuple
    x: float
    r: float
    temperature: object
    tau_max: float
    secular: str = "both"
    alpha: float = 0.1


_HT = HighT(100.0)
_ALL = (Family.OHMIC, Family.SUBOHMIC, Family.SUPEROHMIC)
PRESETS = {
    p.id: p
    for p in (
        FigurePreset("fig1a", (Family.OHMIC,), 10.0, 2.0, _HT, 6.0),
        FigurePreset("fig1b", (Family.OHMIC,), 10.0, 0.5, _HT, 6.0),
        FigurePreset("fig2a", (Family.OHMIC,), 0.2, 1.0, _HT, 10.0),
        FigurePreset("fig2b", (Family.OHMIC,), 0.2, 0.1, _HT, 10.0),
        FigurePreset("fig3", (Family.SUPEROHMIC,), 0.3, 0.01, ZeroT(), 10.0),
        FigurePreset("fig4a", _ALL, 10.0, 2.0, _HT, 6.0, secular="secular"),
        FigurePreset("fig4b", _ALL, 10.0, 2.0, _HT, 6.0, secular="exact"),
        FigurePreset("fig5a", _ALL, 0.2, 0.005, ZeroT(), 10.0),
        FigurePreset("fig5b", _ALL, 10.0, 0.01, ZeroT(), 10.0),
        FigurePreset("fig6", (Family.OHMIC,), 0.15, 0.06, _HT, 5.0),
        FigurePreset("fig7", (Family.SUBOHMIC,), 0.3, 2.0, _HT, 4.0),
        FigurePreset("fig8", _ALL, 0.2, 2.0, _HT, 5.0),
    )
}


@dataclass
class RunConfig:
    mode: str
    spectra: tuple
    x: tuple
    alpha: float
    temperature: object
    r: tuple
    tau_max: float
    steps: int
    secular: str
    truncation: Truncation
    output: str
    format: str
    threads: int = 1
    figure: str = None
    notes: list = field(default_factory=list)

    def specs(self):
        """Reservoir specs in family-major, then ``x``, order."""
        out = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for fam in self.spectra:
                for x in self.x:
                    out.append(ReservoirSpec(fam, x, self.alpha, self.temperature))
        return out


def _tokens(args):
    """Split ``--key value`` pairs; returns (dict, errors)."""
    vals, errs = {}, []
    args = list(args)
    i = 0
    while i < len(args):
        tok = args[i]
        if not tok.startswith("--"):
            errs.append(f"unexpected token {tok!r}")
            i += 1
            continue
        key = tok[2:]
        if "=" in key:
            key, v = key.split("=", 1)
            i += 1
        elif i + 1 < len(args) and not args[i + 1].startswith("--"):
            v = args[i + 1]
            i += 2
        else:
            errs.append(f"{key}: missing value")
            i += 1
            continue
        if key not in FLAGS:
            errs.append(f"unknown flag --{key}")
            continue
        vals[key] = v
    return vals, errs


def _file_pairs(text):
    vals, errs = {}, []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errs.append(f"config line {n}: expected key=value")
            continue
        k, v = (p.strip() for p in line.split("=", 1))
        k = k.replace("_", "-")
        if k not in FLAGS or k == "config":
            errs.append(f"config line {n}: unknown key {k!r}")
            continue
        vals[k] = v
    return vals, errs


def _parse_temperature(v):
    v = v.strip().lower()
    if v == "zero":
        return ZeroT()
    if v.startswith("high:"):
        return HighT(float(v[5:]))
    raise ValueError("expected 'zero' or 'high:<theta>'")


def _floats(v):
    out = tuple(float(p) for p in v.split(",") if p.strip())
    if not out:
        raise ValueError("empty list")
    return out


def parse_config(args, file=None):
    """Build a validated RunConfig from ``--key value`` tokens.

    Parameters
    ----------
    args : sequence of str
    file : str, optional
        Flat ``key=value`` text. ``--config PATH`` in ``args`` reads one from
        disk. Command-line values override file values.

    Raises
    ------
    UsageError
        Listing every invalid or missing field.
    """
    cli, errs = _tokens(args)
    text = file
    if "config" in cli:
        try:
            with open(cli["config"]) as fh:
                text = fh.read()
        except OSError as exc:
            errs.append(f"config: cannot read {cli['config']!r} ({exc.strerror})")
    vals = {}
    if text:
        fv, fe = _file_pairs(text)
        vals.update(fv)
        errs.extend(fe)
    vals.update({k: v for k, v in cli.items() if k != "config"})

    def get(key, conv, default=None, required=False):
        if key not in vals:
            if required:
                errs.append(f"{key}: required")
            return default
        try:
            return conv(vals[key])
        except (ValueError, DomainError) as exc:
            errs.append(f"{key}: invalid value {vals[key]!r} ({exc})")
            return default

    def choice(opts):
        def conv(v):
            if v not in opts:
                raise ValueError(f"expected one of {', '.join(opts)}")
            return v
        return conv

    mode = get("mode", choice(MODES), "trajectory")
    preset = None
    if mode == "figure":
        preset = get("figure", choice(tuple(PRESETS)), required=True)
        preset = PRESETS.get(preset)
        for k in PINNED:
            if k in cli:
                errs.append(f"{k}: fixed by the figure preset")
    elif "figure" in vals:
        errs.append("figure: only valid with --mode figure")

    need_phys = mode != "figure"
    spectra = get("spectrum", lambda v: tuple(Family.parse(p) for p in v.split(",")),
                  required=need_phys)
    xs = get("x", _floats, required=need_phys)
    alpha = get("alpha", float, 0.1)
    temp = get("temperature", _parse_temperature, required=need_phys)
    rs = get("r", _floats, required=need_phys and mode in ("trajectory", "sweep"))
    tau_max = get("tau-max", float, preset.tau_max if preset else TAU_MAX_DEFAULT)
    steps = get("steps", int, N_STEPS_DEFAULT)
    secular = get("secular", choice(SECULAR), preset.secular if preset else "both")
    trunc = get("truncation", Truncation, Truncation.EXACT)
    output = get("output", str, required=True)
    fmt = get("format", choice(FORMATS), "csv")
    threads = get("threads", int, 1)

    if preset is not None:
        spectra, xs, alpha = preset.families, (preset.x,), preset.alpha
        temp, rs = preset.temperature, (preset.r,)
    if tau_max is not None and not tau_max > 0:
        errs.append("tau-max: must be positive")
    if steps is not None and steps < MIN_STEPS:
        errs.append(f"steps: must be at least {MIN_STEPS}")
    if alpha is not None and not 0 < alpha <= 0.5:
        errs.append("alpha: must lie in (0, 0.5]")
        alpha = None
    if threads is not None and threads < 1:
        errs.append("threads: must be at least 1")
    if rs is not None and any(not r >= 0 for r in rs):
        errs.append("r: must be nonnegative")
    if mode == "trajectory":
        if spectra is not None and len(spectra) > 1:
            errs.append("spectrum: trajectory mode takes a single family (use sweep)")
        if xs is not None and len(xs) > 1:
            errs.append("x: trajectory mode takes a single value (use sweep)")
        if rs is not None and len(rs) > 1:
            errs.append("r: trajectory mode takes a single value (use sweep)")
    if mode == "coeffs-dump" and spectra is not None and (len(spectra) > 1 or len(xs or ()) > 1):
        errs.append("coeffs-dump takes a single spectrum and x")

    notes = []
    if spectra and xs and alpha is not None and temp is not None:
        for fam in spectra:
            for x in xs:
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always")
                    try:
                        ReservoirSpec(fam, x, alpha, temp)
                    except DomainError as exc:
                        errs.append(f"{fam.name.lower()}, x={x}: {exc}")
                notes.extend(str(w.message) for w in caught)
    if errs:
        raise UsageError(errs)
    return RunConfig(mode, tuple(spectra), tuple(xs), alpha, temp, tuple(rs or ()),
                     tau_max, steps, secular, trunc, output, fmt, threads,
                     preset.id if preset else None, sorted(set(notes)))


def _config_dict(cfg):
    d = asdict(cfg)
    d["spectra"] = [f.name.lower() for f in cfg.spectra]
    d["temperature"] = cfg.temperature.label()
    d["truncation"] = cfg.truncation.value
    return d


def _emit(path, fmt, header, columns):
    if fmt == "csv":
        atomic_write_text(path, csv_text(header, columns))
    else:
        atomic_write_text(path, json_text({h: np.asarray(c) for h, c in zip(header, columns)}))


def _traj_columns(traj, secular):
    cols = [("tau", traj.tau_grid)]
    if secular in ("exact", "both"):
        cols.append(("eof_exact", traj.eof_exact))
    if secular in ("secular", "both"):
        cols.append(("eof_secular", traj.eof_secular))
    cols += [
        ("delta", traj.coeff_ref.delta),
        ("gamma", traj.coeff_ref.gamma_c),
        ("physical_flag", traj.physicality_flags.astype(int)),
    ]
    return [c[0] for c in cols], [c[1] for c in cols]


def _traj_record(traj):
    rec = dict(traj.meta)
    rec["physical_all"] = bool(np.all(traj.physicality_flags))
    eps = default_eps(traj)
    if traj.initial_eof > eps:
        rec["regime_exact"] = detect_events(traj, eps).to_dict()
        rec["regime_secular"] = detect_events(traj, eps, series="secular").to_dict()
    rec["t_dis_exact"] = disentanglement_time(traj, eps)
    rec["t_dis_secular"] = disentanglement_time(traj, eps, series="secular")
    return rec


def _with_suffix(path, tag):
    stem, ext = os.path.splitext(path)
    return f"{stem}_{tag}{ext}"


def _execute(cfg):
    """Run the configured job; returns (written data paths, metadata)."""
    meta = {"results": []}
    written = []
    if cfg.mode in ("trajectory", "figure"):
        specs = cfg.specs()
        for spec in specs:
            traj = run_trajectory(spec, cfg.r[0], cfg.tau_max, cfg.steps, truncation=cfg.truncation)
            path = cfg.output if len(specs) == 1 else _with_suffix(cfg.output, spec.family.name.lower())
            _emit(path, cfg.format, *_traj_columns(traj, cfg.secular))
            written.append(path)
            rec = _traj_record(traj)
            rec["file"] = os.path.basename(path)
            meta["results"].append(rec)
    elif cfg.mode == "sweep":
        items = sweep(cfg.specs(), cfg.r, cfg.tau_max, cfg.steps, threads=cfg.threads,
                      truncation=cfg.truncation)
        header = ["family", "x", "r", "label", "n_deaths", "n_revivals",
                  "t_dis_exact", "t_dis_secular", "error"]
        rows = {h: [] for h in header}
        for m, rep, _ in items:
            rows["family"].append(m["family"].lower())
            rows["x"].append(m["x"])
            rows["r"].append(m["r"])
            rows["label"].append(rep.label.value if rep else "")
            rows["n_deaths"].append(len(rep.death_times) if rep else 0)
            rows["n_revivals"].append(len(rep.revival_times) if rep else 0)
            for k in ("t_dis_exact", "t_dis_secular"):
                v = m.get(k)
                rows[k].append("" if v is None else v)
            rows["error"].append(m.get("error", ""))
            rec = {k: v for k, v in m.items()}
            if rep is not None:
                rec["regime_exact"] = rep.to_dict()
            meta["results"].append(rec)
        _emit(cfg.output, cfg.format, header, [rows[h] for h in header])
        written.append(cfg.output)
        meta["failed_items"] = sum(1 for m, _, _ in items if "error" in m)
    else:
        spec = cfg.specs()[0]
        grid = default_grid(spec, cfg.tau_max, max(cfg.steps, _min_steps(spec, cfg.tau_max)))
        cs = compute_coefficients(spec, grid)
        cs = secular_integrals(integrate_big_gamma(cs), spec, cfg.truncation)
        cols = [cs.tau_grid, cs.delta, cs.pi_c, cs.gamma_c, cs.big_gamma, cs.delta_gamma,
                cs.delta_co, cs.delta_si, cs.pi_co, cs.pi_si]
        _emit(cfg.output, cfg.format, list(COEFF_COLUMNS), cols)
        written.append(cfg.output)
        meta["results"].append({"coefficients": dict(cs.meta), "theta_x": spec.theta_x})
    return written, meta


def _min_steps(spec, tau_max):
    from .dynamics import _steps_needed
    return _steps_needed(spec, tau_max, MIN_STEPS)


def run(config):
    """Execute a RunConfig and write its outputs. Returns the exit status."""
    try:
        written, meta = _execute(config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except (ReservoirError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    meta.update(
        config=_config_dict(config),
        units=UNITS_NOTE,
        version=__version__,
        created=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        warnings=list(config.notes),
        data_files=[os.path.basename(p) for p in written],
    )
    try:
        atomic_write_text(config.output + ".meta.json", json_text(meta))
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        for m in exc.messages:
            print(f"error: {m}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
