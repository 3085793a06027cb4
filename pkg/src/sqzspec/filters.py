"""Lorentzian filter kernels and filtered two-time field moments.

Kernels have the causal form ``theta(t) * width * exp(-width t - i center t)``.
Field moments of the resonance fluorescence enter through the regression
correlations: ``<E+(tau) E+(0)>`` is G21, ``<E-(tau) E+(0)>`` is G12 and
``<E-E->`` is the conjugate of ``<E+E+>`` (unit source-field coupling).

Both filters of a pair share the bandwidth ``gamma_f`` and sit at
``-delta_omega/2`` and ``+delta_omega/2`` relative to the laser frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bloch
from .bloch import AtomParams
from .errors import DomainError
from .linexp import laplace_window

# beyond this value of damping*t the start-up transient is below exp(-60)
_TRANSIENT_CUTOFF = 60.0


@dataclass(frozen=True)
class _Lorentzian:
    center: float = 0.0
    bandwidth: float = 1.0

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise DomainError(f"bandwidth must be positive, got {self.bandwidth}")

    def kernel(self, t):
        t = np.asarray(t, dtype=float)
        val = self.bandwidth * np.exp(-(self.bandwidth + 1j * self.center) * np.where(t >= 0, t, 0.0))
        out = np.where(t >= 0, val, 0j)
        return complex(out) if out.ndim == 0 else out

    def transfer(self, omega=0.0):
        """Fourier transform ``int kernel(t) exp(i omega t) dt``."""
        return self.bandwidth / (self.bandwidth + 1j * (self.center - omega))


class OpticalFilter(_Lorentzian):
    """Spectral filter acting on the light before detection."""


class CurrentFilter(_Lorentzian):
    """Electronic pass-band filter acting on a photocurrent."""


class DetectorResponse(_Lorentzian):
    """Detector response function S(tau)."""


@dataclass(frozen=True)
class LocalOscillator:
    freq: float = 0.0
    phase: float = 0.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.amplitude != 1.0:
            raise DomainError("local oscillator amplitude is normalised to 1")
        object.__setattr__(self, "phase", float(self.phase) % (2 * math.pi))


@dataclass(frozen=True)
class Normalization:
    """Coupling and gain constants, all fixed at unity."""

    e_lo: float = 1.0
    atom_number_N: float = 1.0
    gain_g: float = 1.0
    electron_charge_e: float = 1.0
    coupling_g_squared: float = 1.0

    def __post_init__(self):
        for name, val in vars(self).items():
            if val != 1.0:
                raise DomainError(f"{name} is normalised to 1, got {val}")


def optical_kernel(f: OpticalFilter, t):
    return f.kernel(t)


def current_kernel(f: CurrentFilter, t):
    return f.kernel(t)


def detector_kernel(d: DetectorResponse, t):
    return d.kernel(t)


# moment kinds -> (row index of the regression vector, conjugate?)
_MOMENT = {"++": (bloch.IDX21, False), "--": (bloch.IDX21, True), "-+": (bloch.IDX12, False)}


def moment_generator(atom: AtomParams, kind: str, fluctuation: bool = False):
    """Return ``(m, row, vec)`` with the moment equal to ``row @ expm(m tau) @ vec``.

    ``fluctuation=True`` removes the steady-state products so the moment
    decays to zero.
    """
    try:
        idx, conj = _MOMENT[kind]
    except KeyError:
        raise DomainError(f"unknown moment kind {kind!r}") from None
    m = bloch.generator(atom)
    vec = bloch.fluctuation_initial(atom) if fluctuation else bloch.regression_initial(atom)
    if conj:
        m, vec = m.conj(), vec.conj()
    row = np.zeros(4)
    row[idx] = 1.0
    return m, row, vec


def _check(gamma_f, t):
    if not gamma_f > 0:
        raise DomainError(f"filter bandwidth must be positive, got {gamma_f}")
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")


def _damped_window(m, row, vec, rate, damp, t):
    """``int_0^t exp(-rate x) f(x) (1 - exp(-damp (t - x))) dx`` for f = row expm(m x) vec."""
    if math.isinf(t) or (damp.real * t > _TRANSIENT_CUTOFF):
        return complex(laplace_window(m, row, vec, rate, t))
    first = laplace_window(m, row, vec, rate, t)
    second = np.exp(-damp * t) * laplace_window(m, row, vec, rate - damp, t)
    return complex(first - second)


def filtered_plus_plus(atom: AtomParams, gamma_f: float, delta_omega: float,
                       t: float = math.inf) -> complex:
    """``<E1+ E2+>`` of the two filtered fields at time ``t`` after switch-on.

    Exact value of the double filter convolution
    ``gf^2 int_0^t int_0^t exp(-gf (t1 + t2)) exp(-i dw (t2 - t1)/2) G21(|t2 - t1|)``.
    The stationary limit (default) is
    ``gf/2 [S21(gf + i dw/2) + S21(gf - i dw/2)]``.
    """
    _check(gamma_f, t)
    if atom.rabi == 0 or t == 0:
        return 0j
    m, row, vec = moment_generator(atom, "++")
    damp = complex(2 * gamma_f)
    total = 0j
    for sign in (1, -1):
        rate = complex(gamma_f, sign * delta_omega / 2)
        total += _damped_window(m, row, vec, rate, damp, t)
    return gamma_f / 2 * total


def filtered_minus_minus(atom, gamma_f, delta_omega, t=math.inf):
    return filtered_plus_plus(atom, gamma_f, delta_omega, t).conjugate()


def filtered_minus_plus(atom: AtomParams, gamma_f: float, delta_omega: float,
                        t: float = math.inf) -> complex:
    """``<E1- E2+>`` of the two filtered fields, in the frame of the source.

    ``gf^2 int_0^t int_0^t du dv exp(-(gf + i dw/2)(u + v)) <E-(t-u) E+(t-v)>``
    with the normally ordered moment G12(v-u) for v >= u and its conjugate
    otherwise.  Stationary limit: ``gf^2/(2k) [S12(k) + conj S12(conj k)]``
    with ``k = gf + i dw/2``.
    """
    _check(gamma_f, t)
    if atom.rabi == 0 or t == 0:
        return 0j
    kappa = complex(gamma_f, delta_omega / 2)
    damp = 2 * kappa
    m, row, vec = moment_generator(atom, "-+")
    later = _damped_window(m, row, vec, kappa, damp, t)
    earlier = _damped_window(m.conj(), row, vec.conj(), kappa, damp, t)
    return gamma_f ** 2 / damp * (later + earlier)
