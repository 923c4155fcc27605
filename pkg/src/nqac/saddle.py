"""Self-consistent saddle-point solvers and grid-scan minimizers.

The symmetric solver brackets sign changes of w - rhs(w) on a dense grid and
refines each root by bisection; the coupled sectored system is solved by
damped simultaneous iteration from many seeds.  ``global_minimum`` is a plain
exhaustive scan of the free-energy surface and serves as the independent
oracle for everything else.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .model import (InputError, ModelParams, SectorConfig, _free_energy_arrays,
                    free_energy, log2cosh, sector_field)

__all__ = [
    "SolverSettings",
    "SaddleSolution",
    "solve_symmetric",
    "solve_sectored",
    "global_minimum",
    "saddle_rhs",
]

log = logging.getLogger(__name__)

DEDUP_TOL = 1e-8
STABILITY_TOL = 1e-8


@dataclass(frozen=True)
class SolverSettings:
    grid_points: int = 2001          # per dimension, odd so m = 0 is on-grid
    fp_tolerance: float = 1e-12
    max_iterations: int = 10000
    damping: float = 0.5

    def __post_init__(self):
        if self.grid_points % 2 == 0:
            raise InputError(f"grid_points must be odd, got {self.grid_points}")
        if not 0 < self.damping <= 1:
            raise InputError(f"damping must be in (0, 1], got {self.damping}")


@dataclass(frozen=True)
class SaddleSolution:
    config: SectorConfig
    residual: float
    stability: str                   # 'local_min' | 'saddle' | 'local_max'
    free_energy: float
    multiplicity: int = 1


def saddle_rhs(params: ModelParams, m, w):
    """Right-hand side (h/E) tanh(beta E) of the self-consistency equation.

    At T = 0 this is h/E; at E = 0 the value is 0 (paramagnetic point).
    """
    h = sector_field(params, m, w)
    E = np.hypot(h, params.gamma)
    with np.errstate(invalid="ignore", divide="ignore"):
        direction = np.where(E > 0, h / np.where(E > 0, E, 1.0), 0.0)
        if params.zero_temperature:
            amp = 1.0
        else:
            amp = np.tanh(E / params.temperature)
    return direction * amp


def _symmetric_rhs(params: ModelParams, w):
    """Symmetric (m = w) self-consistency; for antiferro the unknown is the
    local order parameter and the p-body field drops out."""
    if params.coupling == "antiferro":
        m = np.zeros_like(np.asarray(w, dtype=float))
    else:
        m = np.asarray(w, dtype=float)
    return saddle_rhs(params, m, w)


def _symmetric_config(params: ModelParams, w: float) -> SectorConfig:
    if params.coupling == "antiferro":
        return SectorConfig(((0.5, w), (0.5, -w)))
    return SectorConfig.symmetric(w)


def _symmetric_free_energy(params: ModelParams, w: float) -> float:
    return free_energy(params, _symmetric_config(params, w))


def _classify_1d(fvals) -> str:
    """Stability from a centered second difference (f(x-h), f(x), f(x+h))."""
    curv = fvals[0] - 2.0 * fvals[1] + fvals[2]
    scale = max(1.0, abs(fvals[1]))
    if curv > STABILITY_TOL * scale * 1e-4:
        return "local_min"
    if curv < -STABILITY_TOL * scale * 1e-4:
        return "local_max"
    return "saddle"


def solve_symmetric(params: ModelParams, settings: SolverSettings = SolverSettings()):
    """All fixed points of the symmetric saddle equation, with stability tags.

    For Z2-symmetric models (even p and q) only w >= 0 representatives are
    returned; nonzero roots carry multiplicity 2.
    """
    z2 = params.p % 2 == 0 and params.q % 2 == 0
    lo = 0.0 if z2 else -1.0
    n = settings.grid_points if not z2 else settings.grid_points // 2 + 1
    grid = np.linspace(lo, 1.0, n)
    g = grid - _symmetric_rhs(params, grid)

    roots = []
    exact = np.flatnonzero(g == 0.0)
    roots.extend(grid[exact])
    sign_change = np.flatnonzero((g[:-1] * g[1:]) < 0)
    for i in sign_change:
        a, b = grid[i], grid[i + 1]
        fa = g[i]
        # plain bisection: robust across the tanh step at T -> 0
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = mid - float(_symmetric_rhs(params, np.array(mid)))
            if fm == 0.0 or (b - a) < settings.fp_tolerance:
                break
            if (fa < 0) == (fm < 0):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))

    roots = sorted(roots)
    deduped = []
    for r in roots:
        if not deduped or abs(r - deduped[-1]) > DEDUP_TOL:
            deduped.append(r)

    solutions = []
    h = 1e-5
    for w in deduped:
        residual = abs(w - float(_symmetric_rhs(params, np.array(w))))
        fvals = [_symmetric_free_energy(params, w + d) for d in (-h, 0.0, h)]
        mult = 2 if (z2 and w > DEDUP_TOL) else 1
        solutions.append(SaddleSolution(
            config=_symmetric_config(params, w),
            residual=residual,
            stability=_classify_1d(fvals),
            free_energy=fvals[1],
            multiplicity=mult,
        ))
    if not solutions:
        raise RuntimeError("no fixed point found; w = 0 should always be one")
    return solutions


def _sector_free_energy_grid(params: ModelParams, fracs: np.ndarray, W: np.ndarray):
    return _free_energy_arrays(params, fracs, W)


def _sector_hessian(params: ModelParams, fracs: np.ndarray, w: np.ndarray, h: float = 1e-5):
    k = len(w)
    H = np.empty((k, k))
    f0 = float(_sector_free_energy_grid(params, fracs, w.reshape(k, 1))[0])

    def F(x):
        return float(_sector_free_energy_grid(params, fracs, x.reshape(k, 1))[0])

    for i in range(k):
        ei = np.zeros(k); ei[i] = h
        H[i, i] = (F(w + ei) - 2 * f0 + F(w - ei)) / h ** 2
        for j in range(i + 1, k):
            ej = np.zeros(k); ej[j] = h
            H[i, j] = H[j, i] = (F(w + ei + ej) - F(w + ei - ej)
                                 - F(w - ei + ej) + F(w - ei - ej)) / (4 * h ** 2)
    return H


def _classify_hessian(H: np.ndarray) -> str:
    eig = np.linalg.eigvalsh(H)
    if np.all(eig > -STABILITY_TOL):
        return "local_min"
    if np.all(eig < STABILITY_TOL):
        return "local_max"
    return "saddle"


def _sectored_seeds(k: int) -> np.ndarray:
    corners = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=k)))
    grid1 = np.linspace(-1.0, 1.0, 11)
    grid = np.array(list(itertools.product(grid1, repeat=k)))
    return np.vstack([corners, grid])


def solve_sectored(params: ModelParams, fractions, settings: SolverSettings = SolverSettings()):
    """Stable/attracting solutions of the coupled sectored saddle system.

    Damped simultaneous iteration from every sign-pattern corner and an
    11-point grid per dimension, then a Newton polish; duplicates are merged.
    Returns an empty list when no seed converges (no solutions at these
    parameters).
    """
    fracs = np.asarray(fractions, dtype=float)
    if not 2 <= len(fracs) <= 3:
        raise InputError(f"2 or 3 sectors supported, got {len(fracs)}")
    if abs(fracs.sum() - 1.0) > 1e-9:
        raise InputError(f"fractions must sum to 1, got {fracs.sum()!r}")
    k = len(fracs)
    W = _sectored_seeds(k).T.copy()          # shape (k, n_seeds)
    d = settings.damping
    alive = np.ones(W.shape[1], dtype=bool)
    for _ in range(settings.max_iterations):
        m = fracs @ W
        rhs = saddle_rhs(params, m[None, :], W)
        Wnew = (1 - d) * W + d * rhs
        delta = np.max(np.abs(Wnew - W), axis=0)
        W = Wnew
        alive = delta > 0.1 * settings.fp_tolerance
        if not alive.any():
            break

    candidates = []
    for col in W.T:
        m = float(fracs @ col)
        res = np.max(np.abs(col - saddle_rhs(params, np.full(k, m), col)))
        if res < 1e-6:
            candidates.append(col)
    if not candidates:
        log.debug("solve_sectored: no seed converged for params=%s fractions=%s",
                  params, fracs)
        return []

    unique = []
    for c in candidates:
        if not any(np.max(np.abs(c - u)) < DEDUP_TOL for u in unique):
            unique.append(c)

    solutions = []
    for w0 in unique:
        def g(x):
            m = float(fracs @ x)
            return x - saddle_rhs(params, np.full(k, m), x)
        sol = optimize.root(g, w0, method="hybr", tol=settings.fp_tolerance)
        w = sol.x if sol.success else w0
        res = float(np.max(np.abs(g(w))))
        if res > 1e-8:
            continue
        if any(np.max(np.abs(w - s.config.w)) < DEDUP_TOL for s in solutions):
            continue
        F = float(_sector_free_energy_grid(params, fracs, w.reshape(k, 1))[0])
        stab = _classify_hessian(_sector_hessian(params, fracs, w))
        solutions.append(SaddleSolution(
            config=SectorConfig(tuple(zip(fracs, w))),
            residual=res,
            stability=stab,
            free_energy=F,
        ))
    solutions.sort(key=lambda s: tuple(s.config.w))
    return solutions


_GRID_CAP = {1: None, 2: 201, 3: 41}


def global_minimum(params: ModelParams, settings: SolverSettings = SolverSettings(),
                   sectors: int = 1, fractions=None) -> SaddleSolution:
    """Exhaustive grid scan of the sector free energy, refined locally.

    Independent of the fixed-point machinery; used as the oracle that the
    saddle solvers are checked against.
    """
    if sectors not in (1, 2, 3):
        raise InputError(f"sectors must be 1, 2, or 3, got {sectors}")
    if fractions is None:
        fracs = np.full(sectors, 1.0 / sectors)
    else:
        fracs = np.asarray(fractions, dtype=float)
        if len(fracs) != sectors:
            raise InputError("fractions length must equal sectors")

    n = settings.grid_points
    cap = _GRID_CAP[sectors]
    if cap is not None:
        n = min(n, cap)
        if n % 2 == 0:
            n += 1
    axis = np.linspace(-1.0, 1.0, n)

    if sectors == 1:
        F = _sector_free_energy_grid(params, fracs, axis[None, :])
        i = int(np.argmin(F))
        lo = axis[max(0, i - 1)]
        hi = axis[min(n - 1, i + 1)]
        res = optimize.minimize_scalar(
            lambda w: float(_sector_free_energy_grid(params, fracs, np.array([[w]]))[0]),
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        w = np.array([res.x])
        Fmin = float(res.fun)
        if F[i] < Fmin:               # boundary minimum
            w, Fmin = np.array([axis[i]]), float(F[i])
    else:
        mesh = np.meshgrid(*([axis] * sectors), indexing="ij")
        W = np.stack([g.ravel() for g in mesh])
        F = _sector_free_energy_grid(params, fracs, W)
        i = int(np.argmin(F))
        w0 = W[:, i]
        res = optimize.minimize(
            lambda x: float(_sector_free_energy_grid(params, fracs, x.reshape(sectors, 1))[0]),
            w0, method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 5000})
        w = np.clip(res.x, -1.0, 1.0)
        Fmin = float(_sector_free_energy_grid(params, fracs, w.reshape(sectors, 1))[0])
        if F[i] < Fmin:
            w, Fmin = w0, float(F[i])

    m = float(fracs @ w)
    residual = float(np.max(np.abs(w - saddle_rhs(params, np.full(sectors, m), w))))
    return SaddleSolution(
        config=SectorConfig(tuple(zip(fracs, w))),
        residual=residual,
        stability="local_min",
        free_energy=Fmin,
    )
