"""Balanced homodyne correlation algebra.

Detector correlations are combined into F-functions by binomial sums, and
field moments are recovered from F sampled over the local-oscillator phase.
Everything here works on plain numbers supplied by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_PHASE_POINTS = 16

# (n, m) -> normalisation of the phase integral for the k=2 scheme (E_LO = 1)
_K2_NORMALIZATION = {(2, 0): math.pi / 2, (1, 1): math.pi, (0, 2): math.pi / 2}
_K2_MAX_HARMONIC = 2


@dataclass(frozen=True)
class DetectionLayout:
    k: int = 2
    ell: int = 0

    def __post_init__(self):
        if self.k < 0 or not 0 <= self.ell <= self.k:
            raise DomainError(f"need 0 <= ell <= k, got k={self.k}, ell={self.ell}")


@dataclass(frozen=True)
class PhaseScan:
    """F-function samples on a uniform grid over [0, 2 pi)."""

    phases: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        if ph.shape != vals.shape or ph.ndim != 1 or ph.size < 2:
            raise DomainError("phase scan needs matching 1-D phase and value arrays")
        expected = uniform_phases(ph.size)
        if not np.allclose(ph, expected, atol=1e-12, rtol=0):
            raise DomainError("phase grid must be uniform over [0, 2 pi) starting at 0")
        object.__setattr__(self, "phases", ph)
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, fn, points=DEFAULT_PHASE_POINTS):
        ph = uniform_phases(points)
        return cls(ph, np.array([fn(p) for p in ph], dtype=complex))

    @property
    def size(self):
        return self.phases.size


def uniform_phases(points):
    return 2 * np.pi * np.arange(points) / points


def binomial_combine(correlations, k=None):
    """``sum_l (-1)^(k-l) C(k, l) Gamma_l`` for ``l = 0..k``."""
    vals = list(correlations)
    if k is None:
        k = len(vals) - 1
    if len(vals) != k + 1:
        raise DomainError(f"expected {k + 1} correlation values, got {len(vals)}")
    # the alternating binomial sum is the k-th forward difference; differencing
    # avoids the cancellation of large weighted terms and is exact on constants
    arr = np.asarray(vals)
    return arr[0] if k == 0 else np.diff(arr, n=k)[0]


def two_arm_combine(n_corr):
    """``sum_{l,m in {0,1}} (-1)^(1-l) (-1)^(1-m) Gamma_{l,m}``.

    ``n_corr`` is a 2x2 nested sequence indexed ``[l][m]`` or a mapping
    keyed by ``(l, m)``.
    """
    if isinstance(n_corr, dict):
        if set(n_corr) != {(0, 0), (0, 1), (1, 0), (1, 1)}:
            raise DomainError("two-arm combination needs keys (l, m) in {0,1}^2")
        get = n_corr.__getitem__
    else:
        arr = np.asarray(n_corr)
        if arr.shape != (2, 2):
            raise DomainError(f"two-arm combination needs a 2x2 array, got shape {arr.shape}")
        get = lambda lm: arr[lm]  # noqa: E731
    return sum((-1) ** (1 - ell) * (-1) ** (1 - m) * get((ell, m))
               for ell in (0, 1) for m in (0, 1))


def reconstruct_moment(scan: PhaseScan, n: int, m: int) -> complex:
    """Recover ``<E-^n E+^m>`` from an F^(2) phase scan.

    The phase integral ``int_0^2pi F(phi) exp(-i (n-m) phi) dphi`` is
    evaluated with the periodic trapezoid rule, exact for the
    trigonometric polynomials produced by a k=2 scheme.
    """
    try:
        norm = _K2_NORMALIZATION[(n, m)]
    except KeyError:
        raise DomainError(f"(n, m) = ({n}, {m}) is not a k=2 moment") from None
    q = n - m
    # F^(2) carries harmonics up to |n - m| = 2; fewer points alias them
    need = 2 * _K2_MAX_HARMONIC + 1
    if scan.size < need:
        raise DomainError(f"{scan.size} phase points alias a k=2 scan; need at least {need}")
    integral = np.sum(scan.values * np.exp(-1j * q * scan.phases)) * (2 * np.pi / scan.size)
    return complex(integral / norm)


def quadrature_f2(minus_minus, minus_plus, plus_plus):
    """Return ``phi -> <:X_phi^2:>/4`` for the given normally ordered moments.

    ``X_phi = E+ exp(-i phi) + E- exp(i phi)`` with unit LO amplitude.
    """
    def f(phi):
        return 0.25 * (plus_plus * np.exp(-2j * phi) + 2 * minus_plus
                       + minus_minus * np.exp(2j * phi))
    return f
