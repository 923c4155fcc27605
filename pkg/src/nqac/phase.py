"""Phase-transition location and classification.

Critical lines for the quadratic model, Landau (Taylor) coefficients of the
free energy around m = 0, first-order degeneracy points (gamma_c1),
quadratic-instability points (gamma_c2), barrier metrics, and the penalty
strength at which the transition changes order (lambda_c).

All reported transition quantities are in scaled units: fields as
Gamma/C^(max(p,q)-1), penalties as lambda/C^(max(p,q)-2), free energies as
F/C^max(p,q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .model import (DomainError, InputError, ModelParams, _free_energy_arrays,
                    free_energy_curve, free_energy_hybrid_curve, normalized)

__all__ = [
    "TransitionReport",
    "TaylorCoefficients",
    "critical_line_p2",
    "locate_gamma_c2",
    "taylor_coefficients",
    "locate_gamma_c1",
    "degenerate_minima",
    "classify_transition",
    "barrier_metrics",
    "lambda_critical",
    "fm_temperature_ceiling",
    "hybrid_critical_line",
]

GAMMA_TOL = 1e-6          # bisection tolerance in scaled gamma
LAMBDA_TOL = 1e-4         # bisection tolerance in scaled lambda


@dataclass(frozen=True)
class TransitionReport:
    gamma_c1: float | None
    gamma_c2: float | None
    order: str                     # 'first' | 'second' | 'coexisting_first_and_second' | 'none'
    barrier_height: float | None = None
    barrier_width: float | None = None


@dataclass(frozen=True)
class TaylorCoefficients:
    c2: float
    c3: float
    c4: float
    c6: float
    method: str                    # 'analytic_T0' | 'numeric'


# ---------------------------------------------------------------------------
# p = q = 2 critical line
# ---------------------------------------------------------------------------

def _reduced_critical_field(tau: float) -> float:
    """Root x > 0 of x = 2 tanh(x/tau); the whole family collapses onto this
    single reduced equation (gamma -> a*gamma, beta -> beta/a, A -> a*A)."""
    if tau <= 0:
        return 2.0
    if tau >= 2.0:
        return math.nan
    return optimize.brentq(lambda x: x - 2.0 * math.tanh(x / tau),
                           1e-14, 2.0, xtol=1e-14)


def critical_line_p2(params: ModelParams, axis: str, values):
    """Critical line of the p=q=2 model as (Gamma/C, T/C) pairs.

    Solves Gamma = 2*A*C*tanh(beta*Gamma) with A = J + lam for ferro coupling
    and A = lam (local order) for antiferro.  ``axis`` selects which scaled
    coordinate the ``values`` sweep: 'gamma_of_T' (values are T/C) or
    'T_of_gamma' (values are Gamma/C).  Absent crossings are reported as nan.
    """
    if params.p != 2 or params.q != 2:
        raise InputError("critical_line_p2 requires p = q = 2")
    A = (params.J + params.lam) if params.coupling == "ferro" else params.lam
    if A <= 0:
        raise InputError("effective coupling must be positive")
    points = []
    for v in np.atleast_1d(np.asarray(values, dtype=float)):
        if axis == "gamma_of_T":
            x = _reduced_critical_field(v / A)
            points.append((A * x, float(v)))
        elif axis == "T_of_gamma":
            x = v / A
            if 0 < x < 2.0:
                tau = x / math.atanh(x / 2.0)
                points.append((float(v), A * tau))
            elif x == 0.0:
                points.append((0.0, 2.0 * A))
            else:
                points.append((float(v), math.nan))
        else:
            raise InputError(f"axis must be 'gamma_of_T' or 'T_of_gamma', got {axis!r}")
    return points


# ---------------------------------------------------------------------------
# gamma_c2: zero of the quadratic coefficient (q = 2 only)
# ---------------------------------------------------------------------------

def locate_gamma_c2(params: ModelParams) -> float | None:
    """Scaled field where the m^2 coefficient vanishes: Gamma = 2*C*lam*tanh(beta*Gamma).

    Defined only for q = 2 with lam > 0 (otherwise there is no quadratic term
    and None is returned); at T = 0 the root is exactly 2*C*lam.
    """
    if params.q != 2 or params.lam <= 0:
        return None
    C = params.nesting
    scale = C ** (max(params.p, params.q) - 1)
    g0 = 2.0 * params.lam * C
    if params.zero_temperature:
        return g0 / scale
    if g0 / params.temperature <= 1.0:
        return None                      # tanh slope too small: no ordered phase
    root = optimize.brentq(
        lambda g: g - g0 * math.tanh(g / params.temperature),
        1e-12 * g0, g0, xtol=1e-14 * g0)
    return root / scale


# ---------------------------------------------------------------------------
# Taylor (Landau) coefficients around m = 0
# ---------------------------------------------------------------------------

def _poly_mul(a, b, deg):
    return np.convolve(a, b)[:deg + 1]


def _analytic_T0_series(params: ModelParams, deg: int = 6) -> np.ndarray:
    """Exact T=0 Taylor coefficients of the normalized free energy, via
    truncated polynomial composition of sqrt(h^2 + Gamma^2)."""
    p, q, C = params.p, params.q, params.nesting
    mx = max(p, q)
    G = params.gamma / C ** (mx - 1)
    hpoly = np.zeros(deg + 1)
    if p - 1 <= deg:
        hpoly[p - 1] += params.sign * p * params.J * C ** (p - mx)
    if q - 1 <= deg:
        hpoly[q - 1] += q * params.lam * C ** (q - mx)
    u = _poly_mul(hpoly, hpoly, deg) / G ** 2
    # sqrt(1 + u) = 1 + u/2 - u^2/8 + u^3/16 (u starts at order >= 2)
    u2 = _poly_mul(u, u, deg)
    u3 = _poly_mul(u2, u, deg)
    root = np.zeros(deg + 1)
    root[0] = 1.0
    root += u / 2.0 - u2 / 8.0 + u3 / 16.0
    coeffs = -G * root
    if p <= deg:
        coeffs[p] += (p - 1) * params.sign * params.J * C ** (p - mx)
    if q <= deg:
        coeffs[q] += (q - 1) * params.lam * C ** (q - mx)
    return coeffs


def _fd_weights(offsets: np.ndarray, order: int) -> np.ndarray:
    """Finite-difference weights on arbitrary nodes (Fornberg's recursion)."""
    n = len(offsets)
    c = np.zeros((n, order + 1), dtype=np.longdouble)
    offsets = np.asarray(offsets, dtype=np.longdouble)
    c1, c4 = np.longdouble(1.0), offsets[0]
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, offsets[i]
        for j in range(i):
            c3 = offsets[i] - offsets[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


_STENCIL_HALF = 6                      # 13-point central stencils


def _numeric_derivatives(curve, h: float):
    """Derivatives 2..6 of ``curve`` at 0 by Richardson-extrapolated central
    differences on a 9-point stencil.

    The step is adaptive: each derivative is extrapolated from successive
    step halvings and the pair with the best mutual agreement wins, so both
    small-radius (truncation-limited) and large-field (roundoff-limited)
    regimes come out accurate.
    """
    offsets = np.arange(-_STENCIL_HALF, _STENCIL_HALF + 1, dtype=float)
    steps = [h * 0.5 ** k for k in range(5)]
    evals = [curve(offsets * s) for s in steps]
    evals = [f - f[_STENCIL_HALF] for f in evals]   # the stencils annihilate constants
    out = {}
    for d in range(2, 7):
        w = _fd_weights(offsets, d)
        D = [float(w @ f) / s ** d for f, s in zip(evals, steps)]
        a = 2 * (_STENCIL_HALF - (d - 1) // 2)   # leading error order of the stencil
        R = [(2 ** a * D[i + 1] - D[i]) / (2 ** a - 1) for i in range(len(D) - 1)]
        best, err = R[0], math.inf
        for i in range(len(R) - 1):
            e = abs(R[i + 1] - R[i])
            if e < err:
                best, err = R[i + 1], e
        out[d] = best
    return out


def taylor_coefficients(params: ModelParams, method: str = "auto",
                        step: float = 0.04) -> TaylorCoefficients:
    """Coefficients of m^2, m^3, m^4, m^6 in the normalized free energy at m=0.

    'analytic_T0' is exact at T = 0; 'numeric' differentiates free_energy_curve
    and is the authoritative path at T > 0.  'auto' picks analytic_T0 when
    available.
    """
    if params.gamma <= 0:
        raise DomainError("Taylor expansion undefined at gamma = 0 (singular point)")
    if method not in ("auto", "analytic_T0", "numeric"):
        raise InputError(f"unknown method {method!r}")
    if method == "auto":
        method = "analytic_T0" if params.zero_temperature else "numeric"
    if method == "analytic_T0":
        if not params.zero_temperature:
            raise InputError("analytic_T0 requires temperature = 0")
        c = _analytic_T0_series(params)
        return TaylorCoefficients(c2=float(c[2]), c3=float(c[3]),
                                  c4=float(c[4]), c6=float(c[6]),
                                  method="analytic_T0")

    def curve(m):
        # extended precision: the 6th-derivative stencil amplifies roundoff
        # by ~1/h^6, which float64 evaluation cannot support at 1e-6 accuracy
        m = np.asarray(m, dtype=np.longdouble)
        F = _free_energy_arrays(params, np.array([1.0]), m[None, ...])
        return normalized(params, F)

    d = _numeric_derivatives(curve, step)
    return TaylorCoefficients(
        c2=d[2] / 2.0, c3=d[3] / 6.0, c4=d[4] / 24.0, c6=d[6] / 720.0,
        method="numeric")


# ---------------------------------------------------------------------------
# First-order point gamma_c1 and classification
# ---------------------------------------------------------------------------

def _normalized_curve_fn(params: ModelParams, hybrid: bool):
    if params.coupling == "antiferro":
        # locally ordered phase: sectors (+n, -n) at zero net magnetization
        if hybrid:
            raise InputError("hybrid curve not defined for antiferro coupling")
        fracs = np.array([0.5, 0.5])

        def f(gamma, m):
            pg = params.with_(gamma=float(gamma))
            n = np.asarray(m, dtype=float)
            return normalized(pg, _free_energy_arrays(pg, fracs, np.stack([n, -n])))
        return f

    fe = free_energy_hybrid_curve if hybrid else free_energy_curve

    def f(gamma, m):
        pg = params.with_(gamma=float(gamma))
        return normalized(pg, fe(pg, np.asarray(m, dtype=float)))
    return f


def _minima_profile(curve, gamma, grid, refine=True, refine_tol=1e-11):
    """Local minima (m, f) of the free-energy curve on [0, 1].

    With refine=False the grid values are used as-is (cheap existence scans);
    otherwise each basin is polished to refine_tol for degeneracy detection.
    """
    f = curve(gamma, grid)
    n = len(grid)
    idx = []
    if f[0] < f[1]:
        idx.append(0)
    interior = np.flatnonzero((f[1:-1] < f[:-2]) & (f[1:-1] <= f[2:])) + 1
    idx.extend(interior.tolist())
    if f[-1] < f[-2]:
        idx.append(n - 1)
    minima = []
    for i in idx:
        lo = grid[max(0, i - 1)]
        hi = grid[min(n - 1, i + 1)]
        if not refine or lo == hi:
            minima.append((float(grid[i]), float(f[i])))
            continue
        res = optimize.minimize_scalar(lambda m: float(curve(gamma, [m])[0]),
                                       bounds=(lo, hi), method="bounded",
                                       options={"xatol": refine_tol})
        mval, fval = float(res.x), float(res.fun)
        if f[i] < fval:
            mval, fval = float(grid[i]), float(f[i])
        minima.append((mval, fval))
    minima.sort()
    merged = []
    for m, fv in minima:
        if merged and abs(m - merged[-1][0]) < 1e-6:
            if fv < merged[-1][1]:
                merged[-1] = (m, fv)
        else:
            merged.append((m, fv))
    return merged


JUMP_TOL = 0.005                       # minimizer jump that counts as first order


def _minimizer_location(curve, gamma, grid, refine=True):
    minima = _minima_profile(curve, gamma, grid, refine=refine)
    if not minima:
        return 0.0
    return min(minima, key=lambda t: t[1])[0]


def _first_order_point(curve, gammas, grid, refine=True):
    """Gamma of a persistent jump of the global minimizer, or None.

    A first-order transition is a discontinuity in the location of the
    global free-energy minimum: the jump magnitude survives bisection down
    to vanishing gamma intervals, whereas the steep-but-continuous motion
    near a second-order point dissolves below JUMP_TOL.  This needs no
    labeling of basins and so handles arbitrarily narrow coexistence
    windows and weakly first-order points alike.
    """
    locs = [_minimizer_location(curve, g, grid, refine=refine) for g in gammas]
    for i in range(len(gammas) - 1):
        loc_lo, loc_hi = locs[i], locs[i + 1]
        if loc_lo - loc_hi <= JUMP_TOL:
            continue
        lo, hi = float(gammas[i]), float(gammas[i + 1])
        while hi - lo > 1e-12 * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            ml = _minimizer_location(curve, mid, grid, refine=refine)
            if ml >= 0.5 * (loc_lo + loc_hi):
                lo, loc_lo = mid, ml
            else:
                hi, loc_hi = mid, ml
            if loc_lo - loc_hi <= JUMP_TOL:
                break
        if loc_lo - loc_hi > JUMP_TOL:
            return 0.5 * (lo + hi)
    return None


def _gamma_scan_grid(params: ModelParams, gamma_hi=None, n=48):
    C = params.nesting
    if gamma_hi is None:
        gamma_hi = 2.0 * (params.p * params.J * C ** (params.p - 1)
                          + max(params.q * params.lam, params.p * params.J)
                          * C ** (params.q - 1)
                          + abs(params.eta))
    return np.linspace(gamma_hi / n, gamma_hi, n)


def locate_gamma_c1(params: ModelParams, *, hybrid: bool = False,
                    gamma_hi: float | None = None, grid_points: int = 1201,
                    scan_points: int = 48) -> float | None:
    """Scaled field Gamma_c1/C^(max(p,q)-1) where the two lowest free-energy
    basins become degenerate, or None when the transition is not first order.

    Located as the persistent jump of the global minimizer; at the returned
    field the two basins are degenerate essentially exactly because the
    bisection interval collapses to ~1e-12.
    """
    curve = _normalized_curve_fn(params, hybrid)
    grid = np.linspace(0.0, 1.0, grid_points)
    gammas = _gamma_scan_grid(params, gamma_hi, scan_points)
    gamma_c1 = _first_order_point(curve, gammas, grid)
    if gamma_c1 is None:
        return None
    scale = params.nesting ** (max(params.p, params.q) - 1)
    return gamma_c1 / scale


def degenerate_minima(params: ModelParams, *, hybrid: bool = False,
                      grid_points: int = 1201):
    """Innermost and outermost local minima (m, normalized F) of the
    free-energy curve at the supplied gamma; None when fewer than two."""
    curve = _normalized_curve_fn(params, hybrid)
    grid = np.linspace(0.0, 1.0, grid_points)
    minima = _minima_profile(curve, params.gamma, grid)
    if len(minima) < 2:
        return None
    return minima[0], minima[-1]


def barrier_metrics(params: ModelParams, *, hybrid: bool = False,
                    grid_points: int = 1201):
    """Barrier height (normalized F) and width (m separation) between the two
    degenerate minima at the supplied gamma (expected to be at Gamma_c1)."""
    curve = _normalized_curve_fn(params, hybrid)
    grid = np.linspace(0.0, 1.0, grid_points)
    minima = _minima_profile(curve, params.gamma, grid)
    if len(minima) < 2:
        return 0.0, 0.0
    (m_in, f_in), (m_out, f_out) = minima[0], minima[-1]
    res = optimize.minimize_scalar(lambda m: -float(curve(params.gamma, [m])[0]),
                                   bounds=(m_in, m_out), method="bounded",
                                   options={"xatol": 1e-11})
    f_top = -float(res.fun)
    delta_f = f_top - 0.5 * (f_in + f_out)
    return max(delta_f, 0.0), m_out - m_in


def classify_transition(params: ModelParams, *, hybrid: bool = False,
                        grid_points: int = 1201,
                        with_barrier: bool = True) -> TransitionReport:
    """Order of the Gamma-driven transition for the given parameter family.

    Tags: 'first' (degeneracy point above any quadratic instability),
    'second' (quadratic instability only), 'coexisting_first_and_second'
    (degeneracy inside the ordered region), 'none'.
    """
    gc2 = locate_gamma_c2(params)
    gc1 = locate_gamma_c1(params, hybrid=hybrid, grid_points=grid_points)
    if gc1 is not None and (gc2 is None or gc1 >= gc2):
        order = "first"
    elif gc1 is not None and gc2 is not None:
        order = "coexisting_first_and_second"
    elif gc2 is not None:
        order = "second"
    else:
        order = "none"
    height = width = None
    if gc1 is not None and with_barrier:
        scale = params.nesting ** (max(params.p, params.q) - 1)
        height, width = barrier_metrics(params.with_(gamma=gc1 * scale),
                                        hybrid=hybrid, grid_points=grid_points)
    return TransitionReport(gamma_c1=gc1, gamma_c2=gc2, order=order,
                            barrier_height=height, barrier_width=width)


# ---------------------------------------------------------------------------
# lambda_c boundaries
# ---------------------------------------------------------------------------

def _has_first_order(params: ModelParams, *, hybrid: bool = False,
                     grid_points: int = 801, scan_points: int = 40) -> bool:
    """Cheap existence test for a first-order point.

    For the plain p=4, q=2 ferromagnetic family the transition is first order
    exactly when the quartic Landau coefficient is negative at the field where
    the quadratic one vanishes; this resolves the arbitrarily weak first-order
    slivers near the boundary that a grid scan cannot.  Other families fall
    back to an unrefined degeneracy scan.
    """
    # an eta = 0 penalty qubit decouples and only shifts the free energy by
    # an m-independent constant, so the plain-model criterion applies
    if (params.coupling == "ferro" and params.p == 4
            and params.q == 2 and params.lam > 0 and params.eta == 0):
        g2 = locate_gamma_c2(params)
        if g2 is None:
            return False                 # no ordered onset at this temperature
        scale = params.nesting ** (max(params.p, params.q) - 1)
        pg = params.with_(gamma=g2 * scale)
        method = "analytic_T0" if params.zero_temperature else "numeric"
        return taylor_coefficients(pg, method=method).c4 < 0.0
    curve = _normalized_curve_fn(params, hybrid)
    grid = np.linspace(0.0, 1.0, grid_points)
    gammas = _gamma_scan_grid(params, None, scan_points)
    return _first_order_point(curve, gammas, grid, refine=False) is not None


def lambda_critical(params: ModelParams, T: float, *, hybrid: bool = False,
                    lam_max: float = 8.0, scan_points: int = 33) -> float | None:
    """Scaled penalty lambda_c/C^(max(p,q)-2) above which the first-order
    transition disappears, at temperature T (absolute units).

    Scans a lambda grid for the first-order predicate, then bisects the upper
    true/false edge; returns None when no lambda in range shows a first-order
    transition (ordered phase absent at this temperature).
    """
    C = params.nesting
    lam_scale = C ** (max(params.p, params.q) - 2)
    lams = np.linspace(lam_max / scan_points, lam_max, scan_points)
    # a strong penalty-qubit bias can shrink the first-order window to a
    # sliver near lam = 0 that the linear grid steps straight over
    lams = np.unique(np.concatenate([lams,
                                     np.geomspace(1e-4, lam_max / scan_points, 8)]))
    if T > 0 and params.q == 2:
        # the first-order window hugs the ordered-onset edge lam = T/(2C) at
        # high temperature; seed just above it so the scan cannot miss it
        lam_low = T / (2.0 * C) / lam_scale
        seeds = lam_low * (1.0 + np.array([3e-5, 1e-4, 3e-4, 1e-3, 3e-3,
                                           0.01, 0.03, 0.1]))
        lams = np.unique(np.concatenate([lams, seeds[seeds <= lam_max]]))
    flags = [_has_first_order(params.with_(lam=float(l) * lam_scale,
                                           temperature=float(T)),
                              hybrid=hybrid) for l in lams]
    true_idx = [i for i, f in enumerate(flags) if f]
    if not true_idx:
        return None
    i = true_idx[-1]
    if i == len(lams) - 1:
        return float(lams[-1])           # boundary beyond scan range
    lo, hi = float(lams[i]), float(lams[i + 1])
    while hi - lo > LAMBDA_TOL:
        mid = 0.5 * (lo + hi)
        if _has_first_order(params.with_(lam=mid * lam_scale,
                                         temperature=float(T)), hybrid=hybrid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fm_temperature_ceiling(params: ModelParams, *, t_hi: float = 20.0,
                           t_tol: float = 0.05, lam_max: float = 8.0,
                           scan_points: int = 17) -> float:
    """Highest scaled temperature T/C^max(p,q) at which any penalty strength
    still yields a first-order ferromagnetic transition."""
    C = params.nesting
    T_scale = C ** max(params.p, params.q)

    def exists(t_scaled: float) -> bool:
        return lambda_critical(params, t_scaled * T_scale,
                               lam_max=lam_max, scan_points=scan_points) is not None

    lo, hi = 0.0, t_hi
    if exists(hi):
        return hi                        # ceiling beyond probe range
    while hi - lo > t_tol:
        mid = 0.5 * (lo + hi)
        if exists(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def hybrid_critical_line(params: ModelParams, eta_values, *,
                         lam_max: float = 8.0):
    """(eta/C^(p-1), lambda_c/C^(p-2)) pairs at T = 0 for the model with both
    a designated-qubit penalty eta and a nesting penalty lambda."""
    C = params.nesting
    eta_scale = C ** (params.p - 1)
    points = []
    for ev in np.atleast_1d(np.asarray(eta_values, dtype=float)):
        pe = params.with_(eta=float(ev) * eta_scale, temperature=0.0)
        lc = lambda_critical(pe, 0.0, hybrid=True, lam_max=lam_max)
        points.append((float(ev), math.nan if lc is None else lc))
    return points
