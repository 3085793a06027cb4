"""Flat ``key = value`` run configuration."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction

from .bloch import AtomParams
from .curve import MODES
from .errors import ConfigError, SqzError

FORMATS = ("csv", "json")
AXES = ("delta_omega", "rabi_sq")
SWEEP_KEYS = ("gamma_f", "gamma_c", "rabi_sq")


@dataclass(frozen=True)
class RunConfig:
    mode: str = "ideal"
    gamma1: float = 1.0
    gamma2: float | None = None     # None: purely radiative, gamma1 / 2
    rabi_sq: float = 1 / 12
    gamma_f: float = 0.0
    gamma_c: float = 0.1
    gamma_s: float = 10.0
    dt_window: float = 0.05
    horizon: float = 100.0
    lo_tracking: float = 0.0
    axis: str = "delta_omega"
    delta_omega: float = 0.0        # fixed detuning when axis = rabi_sq
    grid_min: float = -5.0
    grid_max: float = 5.0
    grid_points: int = 201
    out: str = "spectrum"
    format: str = "csv"

    def __post_init__(self):
        validate(self)

    @property
    def gamma2_eff(self):
        return self.gamma1 / 2 if self.gamma2 is None else self.gamma2

    def atom(self, rabi_sq=None):
        r2 = self.rabi_sq if rabi_sq is None else rabi_sq
        return AtomParams.from_rabi_sq(r2, self.gamma1, self.gamma2_eff)

    def as_dict(self):
        return asdict(self)


_FLOAT_KEYS = {f.name for f in fields(RunConfig)} - {"mode", "axis", "grid_points", "out", "format"}
KEYS = tuple(f.name for f in fields(RunConfig))


def _positive(cfg, key):
    if not getattr(cfg, key) > 0:
        raise ConfigError(f"{key} must be positive, got {getattr(cfg, key)}", key=key)


def validate(cfg: RunConfig):
    if cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {cfg.mode!r}", key="mode")
    if cfg.format not in FORMATS:
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}", key="format")
    if cfg.axis not in AXES:
        raise ConfigError(f"axis must be delta_omega or rabi_sq, got {cfg.axis!r}", key="axis")
    for key in _FLOAT_KEYS:
        val = getattr(cfg, key)
        if val is not None and not math.isfinite(val):
            raise ConfigError(f"{key} must be finite", key=key)
    _positive(cfg, "gamma1")
    if cfg.rabi_sq < 0:
        raise ConfigError(f"rabi_sq must be non-negative, got {cfg.rabi_sq}", key="rabi_sq")
    if cfg.gamma2 is not None and cfg.gamma2 < 0.5 * cfg.gamma1 * (1 - 1e-12):
        raise ConfigError(f"gamma2 must be >= gamma1/2, got {cfg.gamma2}", key="gamma2")
    if cfg.gamma_f < 0:
        raise ConfigError(f"gamma_f must be non-negative, got {cfg.gamma_f}", key="gamma_f")
    if cfg.mode == "ideal" and cfg.gamma_f != 0:
        raise ConfigError("ideal mode has no optical filter; drop gamma_f or use mode=optical",
                          key="gamma_f")
    if cfg.mode == "current":
        for key in ("gamma_c", "gamma_s", "dt_window", "horizon"):
            _positive(cfg, key)
        if cfg.horizon < cfg.dt_window:
            raise ConfigError("horizon must be at least dt_window", key="horizon")
    if isinstance(cfg.grid_points, bool) or not isinstance(cfg.grid_points, int) or cfg.grid_points < 2:
        raise ConfigError(f"grid_points must be an integer >= 2, got {cfg.grid_points}",
                          key="grid_points")
    if not cfg.grid_max > cfg.grid_min:
        raise ConfigError("grid_max must exceed grid_min", key="grid_max")
    if cfg.axis == "rabi_sq" and cfg.grid_min < 0:
        raise ConfigError("a rabi_sq axis must start at a non-negative value", key="grid_min")
    if not cfg.out:
        raise ConfigError("out must be a non-empty path", key="out")


def parse_number(text, key):
    """Float or exact fraction such as ``1/12``."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{key}: not a number: {text!r}", key=key) from None


def coerce(key, raw):
    if key not in KEYS:
        raise ConfigError(f"unknown key {key!r}", key=key)
    raw = raw.strip()
    if key in ("mode", "axis", "out", "format"):
        return raw
    if key == "grid_points":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"grid_points: not an integer: {raw!r}", key=key) from None
    return parse_number(raw, key)


def parse_pairs(text):
    """Split a config document into ``{key: raw}``; ``#`` starts a comment."""
    pairs, lines = {}, {}
    for n, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {n}: expected key=value, got {body!r}", line=n)
        key, raw = (part.strip() for part in body.split("=", 1))
        if not key:
            raise ConfigError(f"line {n}: empty key", line=n)
        if key in pairs:
            raise ConfigError(f"line {n}: duplicate key {key!r}", key=key, line=n)
        pairs[key], lines[key] = raw, n
    return pairs, lines


def build_config(pairs, lines=None):
    lines = lines or {}
    values = {}
    for key, raw in pairs.items():
        try:
            values[key] = coerce(key, raw)
        except ConfigError as exc:
            raise ConfigError(_at(lines.get(key), str(exc)), key=key, line=lines.get(key)) from None
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        line = lines.get(exc.key)
        raise ConfigError(_at(line, str(exc)), key=exc.key, line=line) from None
    except SqzError as exc:
        raise ConfigError(str(exc)) from None


def _at(line, msg):
    return msg if line is None or msg.startswith("line ") else f"line {line}: {msg}"


def parse_config(text: str) -> RunConfig:
    pairs, lines = parse_pairs(text)
    return build_config(pairs, lines)


def with_value(cfg: RunConfig, key, value):
    try:
        return replace(cfg, **{key: value})
    except ConfigError:
        raise
    except TypeError:
        raise ConfigError(f"unknown key {key!r}", key=key) from None
