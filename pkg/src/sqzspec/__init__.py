"""Squeezing spectra of resonance fluorescence from a driven two-level atom."""

__version__ = "0.1.0"

from .bloch import AtomParams, BlochState, steady_state  # noqa: E402
from .curve import SpectrumCurve  # noqa: E402
from .errors import ConfigError, DomainError, PoleError, QuadratureError, SqzError  # noqa: E402

__all__ = [
    "AtomParams", "BlochState", "steady_state", "SpectrumCurve",
    "SqzError", "DomainError", "PoleError", "QuadratureError", "ConfigError",
]
