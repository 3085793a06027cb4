import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sqzspec.errors import DomainError
from sqzspec.homodyne import (DetectionLayout, PhaseScan, binomial_combine, quadrature_f2,
                              reconstruct_moment, two_arm_combine, uniform_phases)

cplx = st.builds(complex, st.floats(-10, 10), st.floats(-10, 10))


@settings(max_examples=100, deadline=None)
@given(cplx, st.floats(0, 10), st.integers(5, 40))
def test_roundtrip(pp, mp, points):
    mm = np.conj(pp)
    scan = PhaseScan.sample(quadrature_f2(mm, mp, pp), points)
    assert reconstruct_moment(scan, 2, 0) == pytest.approx(mm, abs=1e-10)
    assert reconstruct_moment(scan, 1, 1) == pytest.approx(mp, abs=1e-10)
    assert reconstruct_moment(scan, 0, 2) == pytest.approx(pp, abs=1e-10)


def test_aliasing_and_bad_moments():
    scan = PhaseScan.sample(lambda p: 1.0, 4)
    with pytest.raises(DomainError):
        reconstruct_moment(scan, 1, 1)
    with pytest.raises(DomainError):
        reconstruct_moment(PhaseScan.sample(lambda p: 1.0), 3, 0)
    with pytest.raises(DomainError):
        PhaseScan(np.array([0.0, 1.0, 2.0]), np.zeros(3))


@pytest.mark.parametrize("k", range(1, 7))
def test_binomial_annihilates_constants(k):
    assert binomial_combine([2.5] * (k + 1)) == 0
    assert binomial_combine([0, 1], k=1) == 1
    with pytest.raises(DomainError):
        binomial_combine([1, 2, 3], k=1)


def test_two_arm_combination():
    assert two_arm_combine([[1, 1], [1, 1]]) == 0
    vals = {(0, 0): 1.0, (0, 1): 2.0, (1, 0): 3.0, (1, 1): 7.0}
    assert two_arm_combine(vals) == 1 - 2 - 3 + 7
    assert two_arm_combine(np.array([[1, 2], [3, 7]])) == 3
    with pytest.raises(DomainError):
        two_arm_combine({(0, 0): 1})


def test_layout_and_phases():
    DetectionLayout(2, 1)
    with pytest.raises(DomainError):
        DetectionLayout(2, 3)
    assert uniform_phases(4)[1] == pytest.approx(math.pi / 2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=9))
def test_binomial_matches_explicit_sum(vals):
    k = len(vals) - 1
    explicit = sum((-1) ** (k - l) * math.comb(k, l) * g for l, g in enumerate(vals))
    assert binomial_combine(vals) == pytest.approx(explicit, abs=1e-9 * 2 ** k * 100)
