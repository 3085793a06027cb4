import math

import numpy as np
import pytest

from sqzspec.bloch import AtomParams, BlochState
from sqzspec.errors import DomainError, QuadratureError
from sqzspec.oracle import (OracleReport, oracle_evolve, oracle_f11_current_lattice,
                            oracle_filtered_moment, oracle_laplace, oracle_regression_curves,
                            oracle_spectrum_fourier)
from sqzspec.spectra_current import CurrentDetectionConfig


def test_free_decay_and_trace():
    s = oracle_evolve(BlochState.excited(), AtomParams(), 3.0)
    assert s.sigma22 == pytest.approx(math.exp(-3.0), abs=1e-10)
    s = oracle_evolve(BlochState.ground(), AtomParams.from_rabi_sq(2.0), 100.0)
    assert abs(s.trace - 1) < 1e-10
    with pytest.raises(DomainError):
        oracle_evolve(BlochState.ground(), AtomParams(), -1)


def test_regression_curves_decay():
    c = oracle_regression_curves(AtomParams.from_rabi_sq(0.5), 0.05, 80.0)
    assert abs(c.dg21[-1]) < 1e-12 and abs(c.dg12[-1]) < 1e-12
    assert c.tau[1] == pytest.approx(0.05)


def test_laplace_domain():
    with pytest.raises(DomainError):
        oracle_laplace(AtomParams.from_rabi_sq(0.1), [0.0 + 1j])


def test_filtered_moment_self_convergence():
    val, delta, tail = oracle_filtered_moment(AtomParams.from_rabi_sq(1 / 12), 0.3, 0.4, "++")
    assert delta < 1e-7 and tail < 1e-7
    with pytest.raises(DomainError):
        oracle_filtered_moment(AtomParams.from_rabi_sq(0.1), 0.3, 0.4, "+-")


def test_fourier_tail_and_evenness():
    atom = AtomParams.from_rabi_sq(1 / 12)
    c = oracle_spectrum_fourier(atom, 0.0, np.array([-50.0, -1.3, 1.3, 50.0]))
    assert abs(c.values[0]) < 1e-5 and abs(c.values[-1]) < 1e-5
    assert c.values[1] == pytest.approx(c.values[2], abs=1e-9)


def test_lattice_trivial():
    cfg = CurrentDetectionConfig.symmetric(1.0, 0.1)
    assert oracle_f11_current_lattice(AtomParams(), cfg)[0] == 0
    off = CurrentDetectionConfig.symmetric(1.0, 0.1, signal=False)
    assert oracle_f11_current_lattice(AtomParams.from_rabi_sq(0.1), off)[0] == 0


def test_report():
    r = OracleReport("x", 1.0, 1.0 + 1e-9, 1e-6, {"n": 3}, 1e-12)
    assert r.passed and "PASS" in str(r) and "n=3" in str(r)
    assert not OracleReport("y", 1.0, 2.0, 1e-6).passed
    with pytest.raises(QuadratureError):
        OracleReport("z", float("nan"), 1.0, 1e-6)
