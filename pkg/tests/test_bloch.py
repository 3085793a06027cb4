import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import simpson

from sqzspec.bloch import (AtomParams, BlochState, evolve, fluctuation_initial, generator,
                           laplace_s12, laplace_s12_regular, laplace_s21, laplace_s21_regular,
                           regression_correlations, regression_initial, s21_poles, steady_state)
from sqzspec.errors import DomainError, PoleError
from sqzspec.oracle import oracle_evolve

atoms = st.builds(
    lambda g1, r, x: AtomParams.from_rabi_sq(x * g1 * g1, g1, g1 * r),
    st.floats(0.2, 5.0), st.floats(0.5, 3.0), st.floats(0.0, 10.0))


def test_params_validation():
    with pytest.raises(DomainError):
        AtomParams(gamma1=0.0)
    with pytest.raises(DomainError):
        AtomParams(gamma2=0.4)
    with pytest.raises(DomainError):
        AtomParams.from_rabi_sq(-1.0)
    assert AtomParams.from_rabi_sq(4.0).generalized_rabi == pytest.approx(math.sqrt(4.5))


def test_steady_state_weak_and_strong():
    ss = steady_state(AtomParams.from_rabi_sq(1 / 12))
    # sigma22 = (W^2/2)/(g1 g2 + W^2) with g1 g2 = 1/2
    assert ss.sigma22_inf == pytest.approx((1 / 24) / (0.5 + 1 / 12))
    assert ss.sigma21_inf.real == 0
    strong = steady_state(AtomParams.from_rabi_sq(1e8))
    assert strong.sigma22_inf == pytest.approx(0.5, abs=1e-7)
    assert steady_state(AtomParams()).sigma22_inf == 0


@settings(max_examples=40, deadline=None)
@given(atoms)
def test_steady_state_is_fixed_point(atom):
    v = steady_state(atom).as_state().as_vector()
    assert np.max(np.abs(generator(atom) @ v)) < 1e-12
    assert 0 <= v[0].real <= 0.5


@settings(max_examples=30, deadline=None)
@given(atoms, st.floats(0.0, 30.0))
def test_evolve_conserves_trace(atom, t):
    state = evolve(BlochState.ground(), atom, t)
    assert abs(state.trace - 1) < 1e-12
    assert state.sigma12 == pytest.approx(np.conj(state.sigma21), abs=1e-12)


def test_evolve_matches_oracle_and_free_decay():
    atom = AtomParams.from_rabi_sq(0.3)
    for t in (1.0, 10.0, 50.0):
        a = evolve(BlochState.ground(), atom, t).as_vector()
        b = oracle_evolve(BlochState.ground(), atom, t).as_vector()
        assert np.max(np.abs(a - b)) < 1e-9
    free = evolve(BlochState.excited(), AtomParams(), 2.0)
    assert free.sigma22 == pytest.approx(math.exp(-2.0), abs=1e-12)
    with pytest.raises(DomainError):
        evolve(BlochState.ground(), atom, -1.0)


def test_regression_initial_and_limits():
    atom = AtomParams.from_rabi_sq(1 / 12)
    ss = steady_state(atom)
    g0 = regression_initial(atom)
    assert g0[1] == ss.sigma21_inf and g0[3] == ss.sigma22_inf
    curves = regression_correlations(atom, [0.0, 1.0, 200.0])
    assert curves.g21[-1] == pytest.approx(ss.sigma21_inf ** 2, abs=1e-12)
    assert curves.g12[-1] == pytest.approx(abs(ss.sigma21_inf) ** 2, abs=1e-12)
    # fluctuation vector has no component along the stationary mode
    fl = evolve(BlochState.from_vector(fluctuation_initial(atom), "regression"), atom, 200.0)
    assert np.max(np.abs(fl.as_vector())) < 1e-12
    with pytest.raises(DomainError):
        regression_correlations(atom, [1.0, 0.5])


def test_laplace_poles_and_regular_parts():
    atom = AtomParams.from_rabi_sq(0.25)
    poles = s21_poles(atom)
    with pytest.raises(PoleError):
        laplace_s21(atom, 0.0)
    with pytest.raises(PoleError):
        laplace_s12(atom, poles[1])
    s = 0.3 - 0.8j
    c = steady_state(atom).sigma21_inf
    assert laplace_s21(atom, s) - laplace_s21_regular(atom, s) == pytest.approx(c * c / s)
    assert laplace_s12(atom, s) - laplace_s12_regular(atom, s) == pytest.approx(abs(c) ** 2 / s)
    assert laplace_s21_regular(atom, 0.0) == pytest.approx(laplace_s21_regular(atom, 1e-7), rel=1e-5)
    assert laplace_s21(AtomParams(), 1.0) == 0


def test_laplace_matches_exponential_quadrature():
    atom = AtomParams.from_rabi_sq(0.7, gamma2=0.8)
    tau = np.linspace(0, 60, 60001)
    c = regression_correlations(atom, tau)
    s = 0.6 + 1.3j
    w = np.exp(-s * tau)
    assert simpson(w * c.g21, x=tau) == pytest.approx(laplace_s21(atom, s), abs=1e-8)
    assert simpson(w * c.g12, x=tau) == pytest.approx(laplace_s12(atom, s), abs=1e-8)
