"""Metastable excited states: existence regions, energies, and occupancies.

The ferromagnetic case uses two sectors (k of N logical qubits flipped); the
antiferromagnetic case uses three sectors where a single flipped spin mediates
the transition between neighboring excited levels.  Zero-temperature,
zero-field existence conditions are closed forms; elsewhere existence is
decided by the sectored saddle solver plus local stability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .model import InputError, ModelParams, SectorConfig, free_energy
from .saddle import SolverSettings, solve_sectored

__all__ = [
    "MetastabilityRegion",
    "OccupancySpectrum",
    "fm_zero_T_threshold",
    "fm_metastable_exists",
    "fm_disappearance_point",
    "af_zero_T_threshold",
    "af_metastable_exists",
    "af_occupancy",
    "fm_occupancy",
    "trace_fm_region",
]

_W_MIN = 1e-3        # |w| below this counts as a collapsed (non-mixed) sector


@dataclass(frozen=True)
class MetastabilityRegion:
    axis1: str
    axis2: str
    boundary: tuple            # of (x, y) points; y is nan where no flip found
    side_with_metastable: str  # 'below' | 'above' (in axis2)


@dataclass(frozen=True)
class OccupancySpectrum:
    energies: tuple            # per-logical-qubit energies E_k
    log_weights: tuple         # log d_k - beta * N * E_k
    probabilities: tuple
    normalized_free_energies: tuple | None = None


def _log_binomial(N: int, k: int) -> float:
    return gammaln(N + 1) - gammaln(k + 1) - gammaln(N - k + 1)


def _probabilities(log_w: np.ndarray) -> np.ndarray:
    finite = np.isfinite(log_w)
    probs = np.zeros_like(log_w)
    if not finite.any():
        raise InputError("all occupancy weights vanished")
    probs[finite] = np.exp(log_w[finite] - logsumexp(log_w[finite]))
    return probs


# ---------------------------------------------------------------------------
# Ferromagnetic (two-sector) metastability
# ---------------------------------------------------------------------------

def fm_zero_T_threshold(J: float, lam: float) -> float:
    """k/N above which the flipped-sector state is locally stable at T=Gamma=0
    (condition 2J - 4J k/N - 2 lam < 0); 0 when any k/N qualifies."""
    if J <= 0:
        raise InputError("J must be positive")
    return max((J - lam) / (2.0 * J), 0.0)


def fm_metastable_exists(params: ModelParams, k_over_N: float,
                         settings: SolverSettings = SolverSettings()) -> bool:
    """Whether a locally stable mixed-sign two-sector state exists at fraction
    k/N of flipped logical qubits."""
    if not 0 < k_over_N < 1:
        raise InputError(f"k_over_N must be in (0, 1), got {k_over_N}")
    if params.zero_temperature and params.gamma == 0.0:
        return k_over_N > fm_zero_T_threshold(params.J, params.lam)
    sols = solve_sectored(params, (1.0 - k_over_N, k_over_N), settings)
    for s in sols:
        w = np.asarray(s.config.w)
        if (s.stability == "local_min" and np.all(np.abs(w) > _W_MIN)
                and w[0] * w[1] < 0):
            return True
    return False


def fm_disappearance_point(params: ModelParams, k_over_N: float, axis: str,
                           hi: float, tol: float = 1e-3) -> float:
    """Scaled value of ``axis`` ('gamma_over_C' or 'T_over_C') where the FM
    metastable state disappears, by bisection from 0 (exists) to hi (absent)."""
    C = params.nesting

    def with_value(v: float) -> ModelParams:
        if axis == "gamma_over_C":
            return params.with_(gamma=v * C)
        if axis == "T_over_C":
            return params.with_(temperature=v * C)
        raise InputError(f"axis must be 'gamma_over_C' or 'T_over_C', got {axis!r}")

    if not fm_metastable_exists(with_value(0.0), k_over_N):
        return math.nan
    if fm_metastable_exists(with_value(hi), k_over_N):
        return hi
    lo_v, hi_v = 0.0, hi
    while hi_v - lo_v > tol:
        mid = 0.5 * (lo_v + hi_v)
        if fm_metastable_exists(with_value(mid), k_over_N):
            lo_v = mid
        else:
            hi_v = mid
    return 0.5 * (lo_v + hi_v)


def trace_fm_region(params: ModelParams, k_values, axis: str, hi: float,
                    tol: float = 1e-3) -> MetastabilityRegion:
    """Boundary of the FM metastable region over a grid of k/N values, by
    bisection along the chosen scaled axis line by line."""
    boundary = tuple((float(k), fm_disappearance_point(params, float(k), axis, hi, tol))
                     for k in np.atleast_1d(np.asarray(k_values, dtype=float)))
    return MetastabilityRegion(axis1="k_over_N", axis2=axis, boundary=boundary,
                               side_with_metastable="below")


# ---------------------------------------------------------------------------
# Antiferromagnetic (three-sector) metastability
# ---------------------------------------------------------------------------

def af_zero_T_threshold(J: float, k: int, N: int) -> float:
    """Penalty strength above which the k-th AF excited state is locally
    stable at T=Gamma=0: lam > 2 k J / N."""
    if N <= 0 or N % 2:
        raise InputError("N must be a positive even integer")
    return 2.0 * k * J / N


def af_metastable_exists(params: ModelParams, k: int, N: int, w3_sign: int = +1,
                         settings: SolverSettings = SolverSettings()) -> bool:
    """Existence of the three-sector AF metastable state at level k.

    w3_sign selects the branch of the single mediating spin: +1 connects to
    the k-th excited state (condition lam > 2kJ/N at T=Gamma=0), -1 to the
    (k+1)-th (lam > 2(k+1)J/N).
    """
    if params.coupling != "antiferro":
        raise InputError("af_metastable_exists requires antiferro coupling")
    if N % 2 or not 0 <= k < N // 2 - 1:
        raise InputError(f"need even N and 0 <= k < N/2 - 1, got k={k}, N={N}")
    if w3_sign not in (+1, -1):
        raise InputError("w3_sign must be +1 or -1")
    if params.zero_temperature and params.gamma == 0.0:
        k_eff = k if w3_sign > 0 else k + 1
        return params.lam > af_zero_T_threshold(params.J, k_eff, N)
    fracs = ((N / 2 - k - 1) / N, (N / 2 + k) / N, 1.0 / N)
    sols = solve_sectored(params, fracs, settings)
    for s in sols:
        w = np.asarray(s.config.w)
        if np.any(np.abs(w) <= _W_MIN):
            continue
        if w[0] * w[1] < 0 and np.sign(w[2]) == w3_sign * np.sign(w[0]):
            if _af_stable(params, np.asarray(fracs), w):
                return True
    return False


def _af_stable(params: ModelParams, fracs: np.ndarray, w: np.ndarray,
               tol: float = 1e-8) -> bool:
    """Local stability of an AF sectored solution.

    The antiferro p-body term makes the sector free energy concave along the
    total-magnetization direction (that variable enters the variational
    functional as a maximizer), so stability is judged on the Hessian
    restricted to the zero-magnetization subspace sum f_i dw_i = 0.
    """
    from .saddle import _sector_hessian
    H = _sector_hessian(params, fracs, w)
    f = fracs / np.linalg.norm(fracs)
    # orthonormal basis of the subspace orthogonal to the magnetization drift
    basis = np.linalg.svd(f[None, :])[2][1:].T
    eig = np.linalg.eigvalsh(basis.T @ H @ basis)
    return bool(np.all(eig > -tol))


# ---------------------------------------------------------------------------
# Occupancy spectra at the end of the anneal (Gamma = 0)
# ---------------------------------------------------------------------------

def af_occupancy(J: float, C: float, lam: float, beta: float, N: int) -> OccupancySpectrum:
    """Occupation of AF excited levels i = 0..N/2 away from the balanced
    ground sector: E_i = C^2 [J (2i/N)^2 + lam] per logical qubit, degeneracy
    binom(N, N/2 + i) (doubled for i > 0), Boltzmann weights on the extensive
    energies N*E_i, all in log space.
    """
    if N <= 0 or N % 2:
        raise InputError("N must be a positive even integer")
    if beta < 0:
        raise InputError("beta must be nonnegative")
    i = np.arange(N // 2 + 1)
    E = C ** 2 * (J * (2.0 * i / N) ** 2 + lam)
    log_d = np.array([_log_binomial(N, N // 2 + ii) for ii in i])
    log_d[1:] += math.log(2.0)
    if math.isinf(beta):
        log_w = np.where(E == E.min(), log_d, -np.inf)
    else:
        log_w = log_d - beta * N * E
    return OccupancySpectrum(energies=tuple(E), log_weights=tuple(log_w),
                             probabilities=tuple(_probabilities(log_w)))


def fm_occupancy(params: ModelParams, N: int) -> OccupancySpectrum:
    """Occupation of FM two-sector levels k = 0..N/2 at Gamma = 0.

    E_k is the zero-temperature two-sector energy with w = (1, -1); weights
    combine binomial degeneracies with Boltzmann factors on the extensive
    energies.  Also reports the per-level normalized free energy including the
    degeneracy entropy term.
    """
    if params.gamma != 0.0:
        raise InputError("fm_occupancy is defined at gamma = 0")
    if N <= 0:
        raise InputError("N must be positive")
    p0 = params.with_(temperature=0.0)
    ks = np.arange(N // 2 + 1)
    E = np.empty(len(ks))
    for j, k in enumerate(ks):
        cfg = SectorConfig(((1.0 - k / N, 1.0), (k / N, -1.0)))
        E[j] = free_energy(p0, cfg)
    log_d = np.array([_log_binomial(N, int(k)) for k in ks])
    if params.zero_temperature:
        log_w = np.where(E == E.min(), log_d, -np.inf)
        entropy = np.zeros(len(ks))
    else:
        beta = 1.0 / params.temperature
        log_w = log_d - beta * N * E
        entropy = params.temperature * log_d / N
    C2 = params.nesting ** max(params.p, params.q)
    F_norm = (E - entropy) / C2
    return OccupancySpectrum(energies=tuple(E), log_weights=tuple(log_w),
                             probabilities=tuple(_probabilities(log_w)),
                             normalized_free_energies=tuple(F_norm))
