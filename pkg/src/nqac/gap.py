"""Spectral-gap estimates.

Two independent routes: (1) overlap of the two-level effective ground states
at a first-order transition (the gap shrinks as overlap^(N*C)); (2) Bogoliubov
spin-wave frequencies of the harmonic fluctuations about the classical nested
state for the quadratic model, whose smaller branch closes as |Gamma-Gamma_c|^(1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import InputError, ModelParams

__all__ = [
    "GapEstimate",
    "SpinWaveSpectrum",
    "instanton_overlap",
    "spinwave_spectrum",
    "gap_exponent_fit",
]

_CLAMP = 1e-12


@dataclass(frozen=True)
class GapEstimate:
    overlap: float                 # |<m0|mc>| in [0, 1]
    log_gap_per_spin: float        # log Delta / (N*C) = log overlap
    at_params: ModelParams


@dataclass(frozen=True)
class SpinWaveSpectrum:
    theta: float                   # classical rotation angle in [0, pi/2]
    omega0: float
    omega1: float
    A: float
    B: float
    lambda_A: float
    lambda_B: float

    @property
    def gap(self) -> float:
        return min(self.omega0, self.omega1)


def _mean_field(params: ModelParams, m: float) -> float:
    """Longitudinal field of the linearized two-level Hamiltonian at
    magnetization m (both order parameters evaluated at m)."""
    p, q, C = params.p, params.q, params.nesting
    return (p * params.J * C ** (p - 1) * float(m) ** (p - 1)
            + q * params.lam * C ** (q - 1) * float(m) ** (q - 1))


def instanton_overlap(params: ModelParams, m0: float, mc: float) -> GapEstimate:
    """Ground-state overlap of H_eff(m) = -h(m) sigma_z - Gamma sigma_x at the
    two competing magnetizations of a first-order point.

    The ground-state Bloch angle is alpha(m) = atan2(Gamma, h(m)); the overlap
    is |cos((alpha(m0) - alpha(mc))/2)|.  At Gamma = 0 with opposite-sign
    fields the states are orthogonal and overlap 0 is reported, not errored.
    """
    a0 = math.atan2(params.gamma, _mean_field(params, m0))
    ac = math.atan2(params.gamma, _mean_field(params, mc))
    overlap = abs(math.cos(0.5 * (a0 - ac)))
    overlap = min(overlap, 1.0)
    log_gap = math.log(overlap) if overlap > 0 else -math.inf
    return GapEstimate(overlap=overlap, log_gap_per_spin=log_gap, at_params=params)


def spinwave_spectrum(J: float, C: float, lam: float, gamma: float) -> SpinWaveSpectrum:
    """Bogoliubov frequencies of the nested quadratic model.

    ``lam`` here is the penalty-to-J ratio of the harmonic-fluctuation
    analysis (the penalty coupling is J*C*lam), deliberately distinct from
    ModelParams.lam.  The classical angle is theta = 0 for Gamma >= 2*J*C*lam
    and cos(theta) = Gamma/(2*J*C*lam) below; omega1 vanishes exactly at the
    boundary from both sides.
    """
    if J <= 0 or C <= 0 or lam <= 0:
        raise InputError("J, C, lam must be positive")
    if gamma < 0:
        raise InputError("gamma must be nonnegative")
    gc = 2.0 * J * C * lam
    if gamma >= gc:
        ct, st = 1.0, 0.0
    else:
        ct = gamma / gc
        st = math.sqrt(1.0 - ct * ct)
    theta = math.acos(ct)

    A = J * C * (1.0 - lam) * ct * ct + 2.0 * J * C * lam * st * st + gamma * ct
    B = 2.0 * J * C * lam * st * st - J * C * lam * ct * ct + gamma * ct
    lam_A = J * C * (1.0 - lam) * ct * ct / A
    lam_B = -J * C * lam * ct * ct / B

    w0sq = A * A * (1.0 - lam_A * lam_A)
    w1sq = B * B * (1.0 - lam_B * lam_B)
    for name, val in (("omega0", w0sq), ("omega1", w1sq)):
        if val < -_CLAMP * max(1.0, A * A, B * B):
            raise RuntimeError(f"negative {name}^2 = {val}: branch misassignment")
    w0 = math.sqrt(max(w0sq, 0.0))
    w1 = math.sqrt(max(w1sq, 0.0))
    return SpinWaveSpectrum(theta=theta, omega0=w0, omega1=w1,
                            A=A, B=B, lambda_A=lam_A, lambda_B=lam_B)


def gap_exponent_fit(deltas, omegas):
    """Least-squares power-law fit omega ~ coeff * delta^exponent.

    ``deltas`` are distances |Gamma - Gamma_c| and ``omegas`` the matching
    soft-mode frequencies; returns (exponent, coefficient).
    """
    d = np.asarray(deltas, dtype=float)
    w = np.asarray(omegas, dtype=float)
    if d.shape != w.shape or d.ndim != 1:
        raise InputError("deltas and omegas must be 1-d arrays of equal length")
    if len(d) < 2 or np.any(d <= 0) or np.any(w <= 0):
        raise InputError("need >= 2 strictly positive samples")
    if np.ptp(np.log(d)) < 1e-12:
        raise InputError("degenerate sample spacing")
    slope, intercept = np.polyfit(np.log(d), np.log(w), 1)
    return float(slope), float(math.exp(intercept))
