"""Command-line front end: ``spectrum``, ``sweep`` and ``validate``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import KEYS, SWEEP_KEYS, RunConfig, build_config, coerce, parse_pairs, with_value
from .curve import make_grid
from .errors import ConfigError, SqzError
from .spectra_current import SHOT_NOISE_MODE, CurrentDetectionConfig, optimize_phases, shot_noise
from .spectra_optical import squeezing_optical

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _current_cfg(cfg: RunConfig, delta_omega):
    return CurrentDetectionConfig.symmetric(
        delta_omega, cfg.gamma_c, cfg.gamma_s, cfg.dt_window, cfg.horizon,
        lo_tracking=cfg.lo_tracking)


def _point(cfg: RunConfig, rabi_sq, delta_omega):
    atom = cfg.atom(rabi_sq)
    if cfg.mode == "current":
        point = _current_cfg(cfg, delta_omega)
        return optimize_phases(atom, point).s_min - shot_noise(point)
    return squeezing_optical(atom, cfg.gamma_f if cfg.mode == "optical" else 0.0, delta_omega)


def evaluate(cfg: RunConfig):
    """Return ``(grid, values, failures)``; failed points are NaN."""
    grid = make_grid(cfg.grid_min, cfg.grid_max, cfg.grid_points)
    vals = np.empty(grid.size)
    failures = []
    for i, x in enumerate(grid):
        r2, dw = (x, cfg.delta_omega) if cfg.axis == "rabi_sq" else (cfg.rabi_sq, x)
        try:
            vals[i] = _point(cfg, r2, dw)
        except SqzError as exc:
            vals[i] = np.nan
            failures.append({"x": float(x), "error": f"{type(exc).__name__}: {exc}"})
    return grid, vals, failures


def metadata(cfg: RunConfig, config_text=None):
    meta = {
        "tool": "sqzspec", "version": __version__, "mode": cfg.mode,
        "config": cfg.as_dict(),
        "assumptions": {
            "resonance": "laser = atom = mean signal frequency",
            "stationary": "t -> infinity (optical); horizon and window given (current)",
            "ideal_coherent_part": "dropped (delta at zero detuning)",
            "phase_optimization": ("closed-form minimum over a common LO phase"
                                   if cfg.mode == "current" else "maximally squeezed quadrature"),
            "normalization": "all coupling and gain constants 1",
        },
    }
    if cfg.mode == "current":
        meta["assumptions"].update({
            "filter_centers": "symmetric -dw/2, +dw/2",
            "lo_frequencies": f"lo_tracking * filter centre (lo_tracking = {cfg.lo_tracking})",
            "shot_noise_mode": SHOT_NOISE_MODE,
            "moments": "field fluctuations (mean current removed)",
            "non_stationary_terms": "dropped (time average)",
            "window_quadrature": "Gauss-Legendre with node doubling to 1e-6 relative",
        })
    if config_text is not None:
        meta["config_text"] = config_text
    return meta


def format_value(v):
    if not np.isfinite(v):
        return "nan"
    return np.format_float_positional(float(v), precision=12, unique=False,
                                      fractional=False, trim="-")


def csv_text(cfg, grid, vals):
    rows = [f"{cfg.axis},s_value"]
    rows += [f"{format_value(x)},{format_value(v)}" for x, v in zip(grid, vals)]
    return "\n".join(rows) + "\n"


def _write(path: Path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=float) + "\n"


def run_spectrum(cfg: RunConfig, config_text=None):
    """Compute one curve and write it; returns ``(grid, values, failures, paths)``."""
    grid, vals, failures = evaluate(cfg)
    meta = metadata(cfg, config_text)
    meta["failures"] = failures
    out = Path(cfg.out)
    if cfg.format == "csv":
        paths = [out.with_name(out.name + ".csv"), out.with_name(out.name + ".json")]
        _write(paths[0], csv_text(cfg, grid, vals))
        _write(paths[1], _dump(meta))
    else:
        paths = [out.with_name(out.name + ".json")]
        meta["data"] = {cfg.axis: [format_value(x) for x in grid],
                        "s_value": [format_value(v) for v in vals]}
        _write(paths[0], _dump(meta))
    return grid, vals, failures, paths


def sweep_name(out, key, value):
    return f"{out}.{key}={format_value(value)}.{{ext}}"


def run_sweep(cfg: RunConfig, key, values, config_text=None):
    if key not in SWEEP_KEYS:
        raise ConfigError(f"sweep key must be one of {', '.join(SWEEP_KEYS)}, got {key!r}", key=key)
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value", key=key)
    results = []
    for v in values:
        sub = with_value(cfg, key, v)
        grid, vals, failures = evaluate(sub)
        path = Path(sweep_name(cfg.out, key, v).format(ext=sub.format))
        if sub.format == "csv":
            _write(path, csv_text(sub, grid, vals))
        else:
            _write(path, _dump({cfg.axis: [format_value(x) for x in grid],
                                "s_value": [format_value(y) for y in vals]}))
        results.append((v, grid, vals, failures, path))
    meta = metadata(cfg, config_text)
    meta["sweep"] = {"key": key, "values": values,
                     "files": [str(r[4]) for r in results],
                     "failures": {format_value(r[0]): r[3] for r in results if r[3]}}
    sidecar = Path(f"{cfg.out}.sweep.json")
    _write(sidecar, _dump(meta))
    return results, sidecar


# ----------------------------------------------------------------- argparse

def _parser():
    p = argparse.ArgumentParser(prog="sqzspec", description="Squeezing spectra of resonance fluorescence.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "sweep"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path)
        for key in KEYS:
            sp.add_argument(f"--{key.replace('_', '-')}", dest=f"opt_{key}", metavar="VALUE")
        if name == "sweep":
            sp.add_argument("--key", required=True)
            sp.add_argument("--values", required=True, help="comma-separated list")
    val = sub.add_parser("validate")
    val.add_argument("--suite", choices=("fast", "full"), default="fast")
    return p


def _load(args):
    text, pairs, lines = None, {}, {}
    if args.config is not None:
        text = args.config.read_text()
        pairs, lines = parse_pairs(text)
    for key in KEYS:
        raw = getattr(args, f"opt_{key}")
        if raw is not None:
            pairs[key] = raw
            lines.pop(key, None)
    return build_config(pairs, lines), text


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "validate":
            from .validate import run_suite
            return EXIT_OK if run_suite(args.suite, out=sys.stdout) else EXIT_NUMERIC
        cfg, text = _load(args)
        if args.command == "spectrum":
            _, _, failures, paths = run_spectrum(cfg, text)
        else:
            if not args.values.strip():
                raise ConfigError("sweep needs at least one value", key=args.key)
            values = [coerce(args.key, v) for v in args.values.split(",")] \
                if args.key in KEYS else []
            results, sidecar = run_sweep(cfg, args.key, values, text)
            failures = [f for r in results for f in r[3]]
            paths = [r[4] for r in results] + [sidecar]
        for path in paths:
            print(path)
        if failures:
            print(f"error: {len(failures)} grid point(s) failed; written as nan", file=sys.stderr)
            return EXIT_NUMERIC
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SqzError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
