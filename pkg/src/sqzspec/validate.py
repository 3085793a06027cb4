"""Oracle comparison suites behind ``sqzspec validate``."""

from __future__ import annotations

import sys

import numpy as np

from . import oracle
from .bloch import AtomParams, BlochState, evolve, laplace_s12, laplace_s21, steady_state
from .filters import filtered_minus_plus, filtered_plus_plus
from .spectra_current import CurrentDetectionConfig, optimize_phases
from .spectra_optical import squeezing_optical_curve

SEED = 20240611


def random_atoms(n, rng):
    out = []
    for _ in range(n):
        g1 = rng.uniform(0.5, 2.0)
        out.append(AtomParams.from_rabi_sq(rng.uniform(0.01, 2.0) * g1 ** 2, g1,
                                           g1 * rng.uniform(0.5, 1.5)))
    return out


def _evolve_reports():
    atom = AtomParams.from_rabi_sq(1 / 12)
    for t in (1.0, 10.0, 50.0):
        a = evolve(BlochState.ground(), atom, t).sigma22
        b = oracle.oracle_evolve(BlochState.ground(), atom, t).sigma22
        yield oracle.OracleReport(f"evolve sigma22 t={t:g}", a, b, 1e-9)


def _steady_reports(atoms):
    for i, atom in enumerate(atoms):
        ss = steady_state(atom)
        o = oracle.oracle_steady_state(atom)
        yield oracle.OracleReport(f"steady sigma22 #{i}", ss.sigma22_inf, o.sigma22.real, 1e-8)
        yield oracle.OracleReport(f"steady sigma21 #{i}", ss.sigma21_inf, o.sigma21, 1e-8)


def _laplace_reports(atoms):
    s = np.array([0.5 + 1j, 1.0 - 2j, 2.0 + 0.5j])
    for i, atom in enumerate(atoms):
        for kind, fn in (("21", laplace_s21), ("12", laplace_s12)):
            vals, tail = oracle.oracle_laplace(atom, s, kind)
            for sv, ov in zip(s, vals):
                yield oracle.OracleReport(f"laplace S{kind}({sv:g}) #{i}", fn(atom, sv), ov, 1e-6,
                                          tail_bound=tail)


def _moment_reports(atoms):
    for i, atom in enumerate(atoms):
        for kind, fn in (("++", filtered_plus_plus), ("-+", filtered_minus_plus)):
            val, delta, tail = oracle.oracle_filtered_moment(atom, 0.5, 0.7, kind)
            yield oracle.OracleReport(f"filtered {kind} #{i}", fn(atom, 0.5, 0.7), val, 1e-6,
                                      {"refine_delta": f"{delta:.1e}"}, tail)


def _fourier_reports():
    atom = AtomParams.from_rabi_sq(1 / 12)
    grid = np.linspace(-5, 5, 21)
    for gf in (0.0, 0.1):
        ref = squeezing_optical_curve(atom, gf, grid).values
        orc = oracle.oracle_spectrum_fourier(atom, gf, grid).values
        k = int(np.argmax(np.abs(ref - orc)))
        yield oracle.OracleReport(f"spectrum gf={gf:g} worst dw={grid[k]:g}", ref[k], orc[k], 1e-6)


LATTICE_POINTS = (
    (1 / 12, 0.1, 1.0),
    (1 / 12, 0.1, 0.0),
    (0.25, 1.0, 0.5),
)


def lattice_reports(points=LATTICE_POINTS):
    for r2, gc, dw in points:
        atom = AtomParams.from_rabi_sq(r2)
        cfg = CurrentDetectionConfig.symmetric(dw, gc)
        opt = optimize_phases(atom, cfg)
        val, _, delta = oracle.oracle_f11_current_lattice(atom, cfg.with_phases(opt.phi1, opt.phi2))
        yield oracle.OracleReport(f"f11_current rabi_sq={r2:.4g} gc={gc:g} dw={dw:g}",
                                  opt.s_min, val, 1e-4, {"richardson_delta": f"{delta:.1e}"})


def run_suite(suite="fast", out=sys.stdout):
    rng = np.random.default_rng(SEED)
    n = 3 if suite == "fast" else 10
    atoms = random_atoms(n, rng)
    groups = [_evolve_reports(), _steady_reports(atoms), _laplace_reports(atoms[:2]),
              _moment_reports(atoms[:1] if suite == "fast" else atoms[:3]), _fourier_reports()]
    if suite == "full":
        groups.append(lattice_reports())
    ok = True
    for group in groups:
        for rep in group:
            print(rep, file=out)
            ok &= rep.passed
    print(f"suite {suite}: {'PASS' if ok else 'FAIL'}", file=out)
    return ok
