"""Brute-force validators.

Nothing here calls the production numerics (matrix exponentials, Laplace
forms, exact window integrals).  The Bloch equations are integrated with an
adaptive step-doubling Runge-Kutta scheme; time integrals are done by plain
quadrature on sampled curves.  Only the parameter types are shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .bloch import AtomParams, BlochState
from .curve import SpectrumCurve
from .errors import DomainError, QuadratureError

ODE_TOL = 1e-12


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    closed_form: complex
    oracle_value: complex
    tolerance: float
    truncation: dict = field(default_factory=dict)
    tail_bound: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.abs_dev) and np.isfinite(self.rel_dev)):
            raise QuadratureError(f"{self.quantity}: non-finite deviation")

    @property
    def abs_dev(self):
        return float(abs(self.closed_form - self.oracle_value))

    @property
    def rel_dev(self):
        return self.abs_dev / max(abs(self.oracle_value), 1e-300)

    @property
    def passed(self):
        return self.rel_dev <= self.tolerance and self.tail_bound < self.tolerance

    def __str__(self):
        trunc = " ".join(f"{k}={v}" for k, v in self.truncation.items())
        return (f"[{'PASS' if self.passed else 'FAIL'}] {self.quantity}: "
                f"closed={self.closed_form:.12g} oracle={self.oracle_value:.12g} "
                f"abs={self.abs_dev:.3e} rel={self.rel_dev:.3e} tol={self.tolerance:g} "
                f"tail<={self.tail_bound:.1e} {trunc}")


# ------------------------------------------------------------ ODE integrator

def _bloch_rhs(atom):
    g1, g2 = atom.gamma1, atom.gamma2
    h = 0.5j * atom.rabi

    def rhs(y):
        s22, s11, s21, s12 = y
        drive = h * (s12 - s21)
        return (-g1 * s22 + drive,
                g1 * s22 - drive,
                h * (s11 - s22) - g2 * s21,
                h * (s22 - s11) - g2 * s12)
    return rhs


def _rk4(rhs, y, h):
    k1 = rhs(y)
    k2 = rhs(tuple(a + 0.5 * h * b for a, b in zip(y, k1)))
    k3 = rhs(tuple(a + 0.5 * h * b for a, b in zip(y, k2)))
    k4 = rhs(tuple(a + h * b for a, b in zip(y, k3)))
    return tuple(a + h / 6 * (b + 2 * c + 2 * d + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4))


def _integrate(rhs, y, t, h0=0.05, tol=ODE_TOL):
    """Adaptive step doubling: compare one RK4 step with two half steps."""
    done, h = 0.0, min(h0, t)
    while done < t:
        h = min(h, t - done)
        if h < 1e-14 * max(t, 1.0):
            raise QuadratureError("step size underflow in oracle integrator")
        full = _rk4(rhs, y, h)
        half = _rk4(rhs, _rk4(rhs, y, h / 2), h / 2)
        err = max(abs(a - b) for a, b in zip(full, half)) / 15
        scale = max(1.0, max(abs(a) for a in half))
        if err <= tol * scale:
            y = tuple(a + (a - b) / 15 for a, b in zip(half, full))
            done += h
            grow = 2.0 if err == 0 else min(2.0, 0.9 * (tol * scale / err) ** 0.2)
            h *= max(grow, 1.0)
        else:
            h *= max(0.2, 0.9 * (tol * scale / err) ** 0.2)
    return y


def oracle_evolve(state0: BlochState, atom: AtomParams, t: float) -> BlochState:
    if t < 0:
        raise DomainError(f"evolution time must be non-negative, got {t}")
    y = tuple(complex(v) for v in state0.as_vector())
    return BlochState.from_vector(_integrate(_bloch_rhs(atom), y, float(t)), state0.kind)


def _slowest_rate(atom):
    # every Bloch mode except the trace decays at least this fast
    return min(atom.gamma1, atom.gamma2)


def oracle_steady_state(atom: AtomParams):
    """Long-time limit from the ground state, ``t = 40 / slowest rate``."""
    t = 40.0 / _slowest_rate(atom)
    return oracle_evolve(BlochState.ground(), atom, t)


# -------------------------------------------------------- regression curves

@dataclass(frozen=True)
class OracleCurves:
    step: float
    g21: np.ndarray
    g12: np.ndarray
    dg21: np.ndarray
    dg12: np.ndarray

    @property
    def tau(self):
        return self.step * np.arange(self.g21.size)


def oracle_regression_curves(atom: AtomParams, step: float, tau_max: float) -> OracleCurves:
    """G21 and G12 on ``tau = 0, step, ...`` from the integrated regression system."""
    ss = oracle_steady_state(atom).as_vector()
    s21 = ss[2]
    y = (0j, complex(s21), 0j, complex(ss[0]))
    rhs = _bloch_rhs(atom)
    n = int(math.ceil(tau_max / step)) + 1
    out = np.empty((n, 4), dtype=complex)
    out[0] = y
    for i in range(1, n):
        y = _integrate(rhs, y, step, h0=step)
        out[i] = y
    return OracleCurves(step, out[:, 2], out[:, 3],
                        out[:, 2] - s21 * ss[2], out[:, 3] - s21 * ss[3])


def _simpson(vals, step, axis=-1):
    n = vals.shape[axis]
    if n % 2 == 0:
        raise DomainError("Simpson rule needs an odd number of samples")
    w = np.ones(n)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return np.tensordot(vals, w, axes=([axis], [0])) * step / 3


def oracle_laplace(atom: AtomParams, s_values, kind="21", step=0.005):
    """Numerical ``int_0^T exp(-s tau) G(tau) dtau`` for each ``s`` (Re s > 0)."""
    s = np.atleast_1d(np.asarray(s_values, dtype=complex))
    smin = float(np.min(s.real))
    if smin <= 0:
        raise DomainError("numerical Laplace transform needs Re s > 0")
    tau_max = 32.0 / smin
    tau_max = 2 * step * math.ceil(tau_max / (2 * step))
    curves = oracle_regression_curves(atom, step, tau_max)
    g = curves.g21 if kind == "21" else curves.g12
    vals = np.exp(-np.outer(s, curves.tau)) * g
    tail = float(np.max(np.abs(g[-10:]))) * math.exp(-smin * tau_max) / smin
    return _simpson(vals, step), tail


# --------------------------------------------------- filtered field moments

def _gauss_panels(a, b, width, nodes):
    n = max(1, int(math.ceil((b - a) / width)))
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def _triangle_sum(f, t_max, width, nodes):
    """``int_0^T du int_0^u dv f(u, v)`` with Gauss panels in both variables."""
    us, wu = _gauss_panels(0.0, t_max, width, nodes)
    total = 0j
    for u, w in zip(us, wu):
        vs, wv = _gauss_panels(0.0, u, width, nodes)
        total += w * np.sum(wv * f(u, vs))
    return total


def _filtered_moment_raw(spl21, spl12, gamma_f, delta_omega, kind, t_max, width, nodes):
    gf, dw = gamma_f, delta_omega

    def g21(x):
        return spl21[0](x) + 1j * spl21[1](x)

    def g12(x):
        return spl12[0](x) + 1j * spl12[1](x)

    if kind == "++":
        # symmetric in (t1, t2) apart from the detuning phase
        def lower(u, v):   # t2 = v < t1 = u
            return np.exp(-gf * (u + v) - 0.5j * dw * (v - u)) * g21(u - v)

        def upper(u, v):   # t1 = v < t2 = u
            return np.exp(-gf * (u + v) - 0.5j * dw * (u - v)) * g21(u - v)
    elif kind == "-+":
        k = complex(gf, dw / 2)

        def lower(u, v):   # v = later time: moment G12(u - v) with E- at t - u
            return np.exp(-k * (u + v)) * g12(u - v)

        def upper(u, v):
            return np.exp(-k * (u + v)) * np.conj(g12(u - v))
    else:
        raise DomainError(f"unknown moment kind {kind!r}")
    return gf * gf * (_triangle_sum(lower, t_max, width, nodes)
                      + _triangle_sum(upper, t_max, width, nodes))


def oracle_filtered_moment(atom: AtomParams, gamma_f: float, delta_omega: float, kind: str,
                           t: float = math.inf, width=1.0, nodes=10):
    """2-D quadrature of the double filter convolution.

    Returns ``(value, self_convergence_delta, tail_bound)``; the delta is the
    change when the panel width is halved.
    """
    if not gamma_f > 0:
        raise DomainError("filter bandwidth must be positive")
    if atom.rabi == 0:
        return 0j, 0.0, 0.0
    t_trunc = 30.0 / gamma_f
    t_max = min(t, t_trunc)
    tail = 0.0 if t <= t_trunc else 2 * math.exp(-gamma_f * t_trunc)
    step = 0.01
    curves = oracle_regression_curves(atom, step, t_max + step)
    tau = curves.tau
    spl21 = (CubicSpline(tau, curves.g21.real), CubicSpline(tau, curves.g21.imag))
    spl12 = (CubicSpline(tau, curves.g12.real), CubicSpline(tau, curves.g12.imag))
    coarse = _filtered_moment_raw(spl21, spl12, gamma_f, delta_omega, kind, t_max, width, nodes)
    fine = _filtered_moment_raw(spl21, spl12, gamma_f, delta_omega, kind, t_max, width / 2, nodes)
    return complex(fine), float(abs(fine - coarse)), tail


# ------------------------------------------------------------- spectrum

def oracle_spectrum_fourier(atom: AtomParams, gamma_f: float, grid, step=0.0025) -> SpectrumCurve:
    """One-sided Fourier transform of the fluctuation moments.

    ``S(dw) = (2/pi) Re int_0^inf exp((i dw - gf) tau) [G12 - G21](tau) dtau``,
    with the steady-state products removed when ``gf = 0`` (the ideal
    spectrum keeps only the incoherent part).
    """
    if gamma_f < 0:
        raise DomainError("filter bandwidth must be non-negative")
    grid = np.asarray(grid, dtype=float)
    rate = _slowest_rate(atom) + gamma_f
    tau_max = 2 * step * math.ceil(40.0 / rate / (2 * step))
    if atom.rabi == 0:
        vals = np.zeros(grid.size)
    else:
        c = oracle_regression_curves(atom, step, tau_max)
        f = (c.dg12 - c.dg21) * np.exp(-gamma_f * c.tau)
        vals = np.empty(grid.size)
        for i in range(0, grid.size, 64):
            blk = grid[i:i + 64]
            vals[i:i + 64] = 2 / math.pi * _simpson(np.exp(1j * np.outer(blk, c.tau)) * f, step).real
        if gamma_f > 0:
            # constant steady-state products decay only through the filter: integrate exactly
            const = (c.g12[0] - c.dg12[0]) - (c.g21[0] - c.dg21[0])
            vals += 2 / math.pi * (const / (gamma_f - 1j * grid)).real
    params = {"gamma1": atom.gamma1, "gamma2": atom.gamma2, "rabi_sq": atom.rabi_sq,
              "gamma_f": gamma_f, "method": "time-domain Simpson", "step": step,
              "tau_max": tau_max}
    return SpectrumCurve(grid, vals, "ideal" if gamma_f == 0 else "optical", params)


# ------------------------------------------------ photocurrent lattice

def _numeric_weights(delta, gamma_s, window, p, sign):
    """Detector weights by direct quadrature of the inner response integral."""
    def resp(x):
        return gamma_s * math.exp(-gamma_s * x)

    out = np.empty(p.size, dtype=complex)
    for i, pi in enumerate(p):
        if sign == "-":
            def f(q, part):
                z = resp(pi - q) * np.exp(-1j * delta * q)
                return z.real if part == 0 else z.imag
            a, b = 0.0, pi
        else:
            def f(q, part):
                z = resp(q - pi) * np.exp(1j * delta * q)
                return z.real if part == 0 else z.imag
            a, b = pi, window
        re = quad(f, a, b, args=(0,), epsabs=1e-14, epsrel=1e-13)[0]
        im = quad(f, a, b, args=(1,), epsabs=1e-14, epsrel=1e-13)[0]
        out[i] = re + 1j * im
    return out


def _lattice_sum(cfg, curves, cells):
    """Midpoint lattice sum of every stationary term with ``cells`` window cells."""
    gc, gs, dt = cfg.filter_bandwidth, cfg.detector.bandwidth, cfg.window
    h = dt / cells
    stride = int(round(h / curves.step))
    dg21 = curves.dg21[::stride]
    dg12 = curves.dg12[::stride]
    nu = int(round(cfg.horizon / h))
    u = (np.arange(nu) + 0.5) * h
    p = (np.arange(cells) + 0.5) * h
    deltas = [o.freq for o in cfg.lo]
    gain = quad(lambda x: 1 - math.exp(-gs * x), 0, dt, epsabs=1e-15, epsrel=1e-14)[0]

    def moment(kinds, j):
        a = np.abs(j)
        g21 = np.where(a < dg21.size, dg21[np.minimum(a, dg21.size - 1)], 0)
        g12 = np.where(a < dg12.size, dg12[np.minimum(a, dg12.size - 1)], 0)
        if kinds == ("+", "+"):
            return g21
        if kinds == ("-", "-"):
            return np.conj(g21)
        if kinds == ("-", "+"):
            return np.where(j <= 0, g12, np.conj(g12))
        return np.where(j >= 0, g12, np.conj(g12))

    terms = {}
    for kinds in (("-", "-"), ("+", "+"), ("-", "+"), ("+", "-")):
        alphas = [deltas[i] if kinds[i] == "-" else -deltas[i] for i in (0, 1)]
        if abs(alphas[0] + alphas[1]) > 1e-12:
            terms[kinds] = 0j
            continue
        f1 = gc * np.exp(-(gc + 1j * cfg.filter_centers[0] - 1j * alphas[0]) * u)
        f2 = gc * np.exp(-(gc + 1j * cfg.filter_centers[1] - 1j * alphas[1]) * u)
        # H[j] = sum_{i - k = j} f1[i] f2[k], j = -(nu-1) .. nu-1
        size = 1 << (2 * nu - 1).bit_length()
        hcorr = np.fft.ifft(np.fft.fft(f1, size) * np.fft.fft(f2[::-1], size))[:2 * nu - 1]
        w1 = _numeric_weights(deltas[0], gs, dt, p, kinds[0])
        w2 = _numeric_weights(deltas[1], gs, dt, p, kinds[1])
        # C[l] = sum_m w1[m] w2[m + l], l = -(cells-1) .. cells-1
        cw = np.correlate(w2, w1, mode="full")
        jj = np.arange(-(nu - 1), nu)
        ll = np.arange(-(cells - 1), cells)
        # Q[j] = sum_l C[l] M(j + l); y = (u - v) + (p2 - p1) in units of h
        q = np.zeros(jj.size, dtype=complex)
        for l_, c in zip(ll, cw):
            q += c * moment(kinds, jj + l_)
        terms[kinds] = h ** 4 * np.sum(hcorr * q) / (math.pi * gc * gain ** 2)
    return terms


def oracle_f11_current_lattice(atom: AtomParams, cfg, levels=(8, 16, 32)):
    """Direct lattice quadrature of the photocurrent correlation.

    The four nested time integrals (two filter ages, two detection offsets)
    are summed on a midpoint lattice of step ``window / cells`` and
    Richardson-extrapolated in ``h^2``.  Returns ``(value, terms, delta)``
    where ``delta`` is the change between the last two extrapolants.
    """
    zero = {k: 0j for k in (("-", "-"), ("+", "+"), ("-", "+"), ("+", "-"))}
    if not cfg.signal or atom.rabi == 0:
        return 0.0, zero, 0.0
    finest = cfg.window / max(levels)
    tau_max = min(40.0 / _slowest_rate(atom), 2 * cfg.horizon + cfg.window)
    curves = oracle_regression_curves(atom, finest, tau_max)
    sums = [_lattice_sum(cfg, curves, n) for n in levels]
    keys = list(zero)
    rich1 = [{k: (4 * b[k] - a[k]) / 3 for k in keys} for a, b in zip(sums, sums[1:])]
    if len(rich1) >= 2:
        best = {k: (16 * rich1[-1][k] - rich1[-2][k]) / 15 for k in keys}
        delta = max(abs(rich1[-1][k] - rich1[-2][k]) for k in keys)
    else:
        best, delta = rich1[-1], max(abs(rich1[-1][k] - sums[-1][k]) for k in keys)
    phi1, phi2 = cfg.lo[0].phase, cfg.lo[1].phase
    val = (best[("-", "-")] * np.exp(1j * (phi1 + phi2)) + best[("+", "+")] * np.exp(-1j * (phi1 + phi2))
           + best[("-", "+")] * np.exp(1j * (phi1 - phi2)) + best[("+", "-")] * np.exp(-1j * (phi1 - phi2)))
    return float(val.real), best, float(delta)
