"""Instanton-overlap and spin-wave gap estimates."""

import math

import numpy as np
import pytest

from nqac.gap import (gap_exponent_fit, instanton_overlap, spinwave_spectrum)
from nqac.model import InputError, ModelParams


def test_overlap_bounds_and_identity():
    P = ModelParams(p=4, q=2, J=1.0, lam=1.0, gamma=2.6)
    est = instanton_overlap(P, 0.4, 0.4)
    assert est.overlap == pytest.approx(1.0)
    assert est.log_gap_per_spin == pytest.approx(0.0)


def test_overlap_orthogonal_at_zero_field():
    # Gamma = 0 with opposite-sign longitudinal fields: orthogonal states
    P = ModelParams(p=2, q=2, J=1.0, lam=0.0, gamma=0.0)
    est = instanton_overlap(P, -0.5, 0.5)
    assert est.overlap == pytest.approx(0.0, abs=1e-12)
    assert est.log_gap_per_spin < -30


def test_overlap_matches_bloch_angle_formula():
    P = ModelParams(p=4, q=2, J=1.0, lam=1.0, gamma=2.0)
    m0, mc = 0.1, 0.8
    h = lambda m: 4 * m ** 3 + 2 * m
    a0 = math.atan2(2.0, h(m0))
    ac = math.atan2(2.0, h(mc))
    est = instanton_overlap(P, m0, mc)
    assert est.overlap == pytest.approx(abs(math.cos((a0 - ac) / 2)), rel=1e-12)


def test_spinwave_validation():
    with pytest.raises(InputError):
        spinwave_spectrum(0.0, 1.0, 0.5, 1.0)
    with pytest.raises(InputError):
        spinwave_spectrum(1.0, 1.0, 0.5, -0.1)


def test_spinwave_soft_mode_vanishes_at_critical_field():
    J, C, lam = 1.0, 2.0, 0.5
    gc = 2 * J * C * lam
    s = spinwave_spectrum(J, C, lam, gc)
    assert s.gap == pytest.approx(0.0, abs=1e-9)
    # continuous from both sides
    above = spinwave_spectrum(J, C, lam, gc + 1e-8)
    below = spinwave_spectrum(J, C, lam, gc - 1e-8)
    assert above.gap < 1e-3 and below.gap < 1e-3


def test_spinwave_classical_angle():
    J, C, lam = 1.0, 1.0, 0.5
    gc = 2 * J * C * lam
    assert spinwave_spectrum(J, C, lam, 2 * gc).theta == 0.0
    assert spinwave_spectrum(J, C, lam, 0.5 * gc).theta == pytest.approx(
        math.acos(0.5))


def test_spinwave_branch_closed_forms():
    # omega = A sqrt(1 - lam_A^2), B sqrt(1 - lam_B^2)
    s = spinwave_spectrum(1.3, 2.0, 0.4, 1.1)
    assert s.omega0 == pytest.approx(s.A * math.sqrt(1 - s.lambda_A ** 2),
                                     rel=1e-10)
    assert s.omega1 == pytest.approx(s.B * math.sqrt(1 - s.lambda_B ** 2),
                                     rel=1e-10)


def test_exponent_fit_exact_power_law():
    d = np.logspace(-6, -2, 20)
    w = 3.0 * d ** 0.5
    expo, coeff = gap_exponent_fit(d, w)
    assert expo == pytest.approx(0.5, abs=1e-10)
    assert coeff == pytest.approx(3.0, rel=1e-10)


def test_exponent_fit_validation():
    with pytest.raises(InputError):
        gap_exponent_fit([1e-3], [1.0])
    with pytest.raises(InputError):
        gap_exponent_fit([1e-3, -1e-3], [1.0, 1.0])
    with pytest.raises(InputError):
        gap_exponent_fit([1e-3, 1e-3], [1.0, 1.0])
