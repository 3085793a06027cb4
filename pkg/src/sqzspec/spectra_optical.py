"""Squeezing spectra for ideal and Lorentzian optically filtered detection.

The spectrum at the maximally squeezed phase is

    S(dw) = (2/pi) Re[ sigma22/(gamma2 + s) - 2 S21(s) ],   s = gamma_f - i dw,

i.e. the Laplace transform of <E-(tau)E+(0)> - <E+(tau)E+(0)> damped by the
filter bandwidth.  For gamma_f = 0 the coherent (elastic) contribution is a
delta function at dw = 0 and is dropped; elsewhere it contributes nothing
to the real part.
"""

from __future__ import annotations

import numpy as np

from .bloch import (AtomParams, laplace_s21, laplace_s21_regular, steady_state)
from .curve import SpectrumCurve
from .errors import DomainError


def _check_gamma_f(gamma_f):
    if not gamma_f >= 0:
        raise DomainError(f"filter bandwidth must be >= 0, got {gamma_f}")


def squeezing_optical(atom: AtomParams, gamma_f: float, delta_omega: float) -> float:
    _check_gamma_f(gamma_f)
    if atom.rabi == 0:
        return 0.0
    s = complex(gamma_f, -delta_omega)
    s22 = steady_state(atom).sigma22_inf
    if gamma_f == 0:
        s21 = laplace_s21_regular(atom, s)
    else:
        s21 = laplace_s21(atom, s)
    return float(2 / np.pi * (s22 / (atom.gamma2 + s) - 2 * s21).real)


def squeezing_incoherent(atom: AtomParams, gamma_f: float, delta_omega: float) -> float:
    """Same as :func:`squeezing_optical` with the coherent part always removed.

    This is the spectrum of the field fluctuations alone; it is the
    reference for detection schemes that subtract mean signals.
    """
    _check_gamma_f(gamma_f)
    if atom.rabi == 0:
        return 0.0
    s = complex(gamma_f, -delta_omega)
    s22 = steady_state(atom).sigma22_inf
    return float(2 / np.pi * (s22 / (atom.gamma2 + s)
                              - 2 * laplace_s21_regular(atom, s)).real)


def squeezing_at_zero(atom: AtomParams, gamma_f: float) -> float:
    """Closed form of the spectrum at dw = 0."""
    _check_gamma_f(gamma_f)
    g1, g2, w2 = atom.gamma1, atom.gamma2, atom.rabi_sq
    s22 = steady_state(atom).sigma22_inf
    if gamma_f == 0:
        return float(2 * s22 * g1 / np.pi * (g1 * g2 + 2 * w2 - g1 * g1) / (g1 * g2 + w2) ** 2)
    gf = gamma_f
    return float(2 * s22 / (np.pi * gf) * (g1 + gf) ** 2
                 / ((g1 + gf) * (g2 + gf) + w2))


def negativity_threshold(atom: AtomParams, gamma_f: float):
    """Lower bound on dw^2 beyond which the spectrum turns negative.

    Returns ``None`` when gamma1 <= gamma2 + gamma_f: the filter width then
    acts as extra dephasing and no detuning shows squeezing.  For
    ``gamma_f > 0`` the bound substitutes gamma2 + gamma_f for gamma2 and is
    only indicative.
    """
    _check_gamma_f(gamma_f)
    g1 = atom.gamma1
    g2_eff = atom.gamma2 + gamma_f
    if g1 <= g2_eff:
        return None
    return 2 * atom.rabi_sq * g1 / (g1 - g2_eff) - g1 * g1


def _curve(atom, gamma_f, grid, mode, fn):
    grid = np.asarray(grid, dtype=float)
    vals = np.array([fn(atom, gamma_f, dw) for dw in grid])
    params = {
        "gamma1": atom.gamma1, "gamma2": atom.gamma2, "rabi_sq": atom.rabi_sq,
        "gamma_f": gamma_f, "phase": "maximally-squeezed",
        "resonance": "laser = atom = mean signal frequency",
        "stationary": "t -> infinity",
        "coherent_part": "dropped (delta at dw=0)" if gamma_f == 0 else "included",
    }
    return SpectrumCurve(grid, vals, mode, params)


def squeezing_ideal_curve(atom: AtomParams, grid) -> SpectrumCurve:
    return _curve(atom, 0.0, grid, "ideal", squeezing_optical)


def squeezing_optical_curve(atom: AtomParams, gamma_f: float, grid) -> SpectrumCurve:
    return _curve(atom, gamma_f, grid, "ideal" if gamma_f == 0 else "optical",
                  squeezing_optical)
