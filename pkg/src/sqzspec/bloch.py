"""Driven two-level atom: optical Bloch equations, steady state and
quantum-regression correlations.

All rates and frequencies are in units of the energy damping rate
``gamma1`` (normally 1.0); times are in units of ``1/gamma1``.  The laser,
the atomic transition and the mean signal frequency coincide, so every
quantity here is expressed in the frame rotating at the laser frequency.

State vectors are ordered ``(sigma22, sigma11, sigma21, sigma12)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, PoleError

#: distance to a pole below which rational functions refuse to evaluate
POLE_TOL = 1e-9

IDX22, IDX11, IDX21, IDX12 = range(4)


@dataclass(frozen=True)
class AtomParams:
    """Damping rates and Rabi frequency of the resonantly driven atom."""

    gamma1: float = 1.0
    gamma2: float = 0.5
    rabi: float = 0.0

    def __post_init__(self):
        if not self.gamma1 > 0:
            raise DomainError(f"gamma1 must be positive, got {self.gamma1}")
        if not self.rabi >= 0:
            raise DomainError(f"rabi must be non-negative, got {self.rabi}")
        # relative slack so that gamma2 = gamma1/2 computed in floating point passes
        if self.gamma2 < 0.5 * self.gamma1 * (1 - 1e-12):
            raise DomainError(
                f"gamma2 must be >= gamma1/2 ({0.5 * self.gamma1}), got {self.gamma2}")

    @classmethod
    def from_rabi_sq(cls, rabi_sq, gamma1=1.0, gamma2=None):
        if rabi_sq < 0:
            raise DomainError(f"rabi_sq must be non-negative, got {rabi_sq}")
        if gamma2 is None:
            gamma2 = gamma1 / 2
        return cls(gamma1=gamma1, gamma2=gamma2, rabi=float(np.sqrt(rabi_sq)))

    @property
    def rabi_sq(self):
        return self.rabi ** 2

    @property
    def generalized_rabi(self):
        """Mollow sideband position sqrt(rabi^2 + gamma1^2/2)."""
        return float(np.sqrt(self.rabi ** 2 + 0.5 * self.gamma1 ** 2))


@dataclass(frozen=True)
class BlochState:
    """Density-matrix elements in the rotating frame.

    ``kind`` is ``"density"`` for physical states and ``"regression"`` for
    vectors propagated from quantum-regression initial conditions, which
    need not have unit trace or Hermitian coherences.
    """

    sigma22: complex
    sigma11: complex
    sigma21: complex
    sigma12: complex
    kind: str = "density"

    def __post_init__(self):
        if self.kind not in ("density", "regression"):
            raise DomainError(f"unknown state kind {self.kind!r}")

    @classmethod
    def ground(cls):
        return cls(0.0, 1.0, 0.0, 0.0)

    @classmethod
    def excited(cls):
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_vector(cls, vec, kind="density"):
        v = np.asarray(vec, dtype=complex)
        return cls(complex(v[0]), complex(v[1]), complex(v[2]), complex(v[3]), kind)

    def as_vector(self):
        return np.array([self.sigma22, self.sigma11, self.sigma21, self.sigma12],
                        dtype=complex)

    @property
    def trace(self):
        return self.sigma11 + self.sigma22


@dataclass(frozen=True)
class SteadyState:
    sigma22_inf: float
    sigma21_inf: complex

    @property
    def sigma11_inf(self):
        return 1.0 - self.sigma22_inf

    @property
    def sigma12_inf(self):
        return self.sigma21_inf.conjugate()

    def as_state(self):
        return BlochState(self.sigma22_inf, self.sigma11_inf,
                          self.sigma21_inf, self.sigma12_inf)


@dataclass(frozen=True)
class CorrelationCurves:
    """Slowly varying two-time correlations G_ab(tau) on a time grid.

    ``g21`` is the ``<E+(tau) E+(0)>`` moment and ``g12`` the
    ``<E-(tau) E+(0)>`` moment of the source field (unit coupling).
    """

    tau_grid: np.ndarray
    g11: np.ndarray
    g12: np.ndarray
    g21: np.ndarray
    g22: np.ndarray
    meta: dict = field(default_factory=dict)


def steady_state(atom: AtomParams) -> SteadyState:
    g1, g2, w = atom.gamma1, atom.gamma2, atom.rabi
    if not g1 > 0:
        raise DomainError("gamma1 must be positive")
    denom = g1 * g2 + w * w
    return SteadyState(sigma22_inf=0.5 * w * w / denom,
                       sigma21_inf=0.5j * g1 * w / denom)


def generator(atom: AtomParams) -> np.ndarray:
    """4x4 matrix M with d/dt (s22, s11, s21, s12) = M @ (s22, s11, s21, s12)."""
    g1, g2 = atom.gamma1, atom.gamma2
    h = 0.5j * atom.rabi
    return np.array([
        [-g1, 0.0, -h, h],
        [g1, 0.0, h, -h],
        [-h, h, -g2, 0.0],
        [h, -h, 0.0, -g2],
    ], dtype=complex)


def bloch_derivative(state: BlochState, atom: AtomParams) -> BlochState:
    return BlochState.from_vector(generator(atom) @ state.as_vector(), state.kind)


def evolve(state0: BlochState, atom: AtomParams, t: float) -> BlochState:
    """Exact propagation of the linear Bloch system over time ``t``."""
    if t < 0:
        raise DomainError(f"evolution time must be non-negative, got {t}")
    if t == 0:
        return state0
    vec = expm(generator(atom) * t) @ state0.as_vector()
    return BlochState.from_vector(vec, state0.kind)


def regression_initial(atom: AtomParams) -> np.ndarray:
    """Initial vector (G22, G11, G21, G12)(0) = delta_a1 * sigma_2b."""
    ss = steady_state(atom)
    g0 = np.zeros(4, dtype=complex)
    g0[IDX11] = ss.sigma21_inf
    g0[IDX12] = ss.sigma22_inf
    return g0


def fluctuation_initial(atom: AtomParams) -> np.ndarray:
    """Initial vector of the correlations with the steady-state products removed.

    Propagating it under the generator gives G_ab(tau) - <A_ba><A_12>, which
    decays to zero.
    """
    ss = steady_state(atom)
    return regression_initial(atom) - ss.sigma21_inf * ss.as_state().as_vector()


def _check_grid(tau_grid):
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size == 0:
        raise DomainError("tau grid must be a non-empty 1-D array")
    if np.any(tau < 0):
        raise DomainError("tau grid must be non-negative")
    if np.any(np.diff(tau) < 0):
        raise DomainError("tau grid must be ascending")
    return tau


def regression_correlations(atom: AtomParams, tau_grid) -> CorrelationCurves:
    tau = _check_grid(tau_grid)
    m = generator(atom)
    # step-by-step propagation reuses one exponential per distinct increment
    out = np.empty((tau.size, 4), dtype=complex)
    vec = regression_initial(atom)
    prev = 0.0
    cache = {}
    for i, t in enumerate(tau):
        dt = t - prev
        if dt > 0:
            key = round(dt, 15)
            if key not in cache:
                cache[key] = expm(m * dt)
            vec = cache[key] @ vec
        out[i] = vec
        prev = t
    return CorrelationCurves(tau_grid=tau, g22=out[:, IDX22], g11=out[:, IDX11],
                             g21=out[:, IDX21], g12=out[:, IDX12],
                             meta={"method": "matrix-exponential"})


def s21_poles(atom: AtomParams) -> np.ndarray:
    """Poles of the Laplace transform of G21: 0, -gamma2 and the Mollow pair."""
    g1, g2, w = atom.gamma1, atom.gamma2, atom.rabi
    pair = np.roots([1.0, g1 + g2, g1 * g2 + w * w])
    return np.concatenate([[0.0, -g2], pair]).astype(complex)


def _check_poles(atom, s, poles):
    near = np.abs(s - poles) < POLE_TOL
    if np.any(near):
        raise PoleError(f"s={s} coincides with pole {poles[np.argmax(near)]}")


def laplace_s21(atom: AtomParams, s: complex) -> complex:
    """Laplace transform of G21(tau) = <A12(tau) A12(0)>.

    Evaluated as the single rational function obtained from the regression
    solution.  It has a genuine pole at s=0 (residue sigma21(inf)^2, the
    coherent part) whenever the drive is on.
    """
    g1, g2, w = atom.gamma1, atom.gamma2, atom.rabi
    if w == 0:
        return 0j
    s = complex(s)
    _check_poles(atom, s, s21_poles(atom))
    w2 = w * w
    d = g1 * g2 + w2
    num = g1 * g1 * g2 + (g1 * g1 + g1 * g2 - w2) * s + g1 * s * s
    den = 4 * s * (s + g2) * d * ((s + g1) * (s + g2) + w2)
    return -w2 * num / den


def laplace_s21_regular(atom: AtomParams, s: complex) -> complex:
    """Laplace transform of G21(tau) - sigma21(inf)^2 (the s=0 pole removed)."""
    g1, g2, w = atom.gamma1, atom.gamma2, atom.rabi
    if w == 0:
        return 0j
    s = complex(s)
    _check_poles(atom, s, s21_poles(atom)[1:])
    w2 = w * w
    d = g1 * g2 + w2
    num = w2 * w2 + g1 ** 3 * g2 + (g1 ** 3 + g1 * g1 * g2 - w2 * g1) * s + g1 * g1 * s * s
    den = 4 * d * d * (s + g2) * ((s + g1) * (s + g2) + w2)
    return w2 * num / den


def laplace_s12(atom: AtomParams, s: complex) -> complex:
    """Laplace transform of G12 via S12(s) = sigma22(inf)/(s + gamma2) - S21(s)."""
    if atom.rabi == 0:
        return 0j
    s = complex(s)
    _check_poles(atom, s, s21_poles(atom))
    return steady_state(atom).sigma22_inf / (s + atom.gamma2) - laplace_s21(atom, s)


def laplace_s12_regular(atom: AtomParams, s: complex) -> complex:
    """Laplace transform of G12(tau) - |sigma21(inf)|^2."""
    if atom.rabi == 0:
        return 0j
    s = complex(s)
    _check_poles(atom, s, s21_poles(atom)[1:])
    return steady_state(atom).sigma22_inf / (s + atom.gamma2) - laplace_s21_regular(atom, s)
