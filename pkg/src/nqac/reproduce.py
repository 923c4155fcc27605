"""Canned sweep recipes: one entry per figure of the reference data set.

Each recipe emits the CSV artifact(s) backing that figure with the relevant
parameter sets baked in, plus a manifest listing the landmark values the
curves are expected to show.  All recipes use C = 1, so scaled and absolute
parameters coincide; the scaling relations make any other C a relabeling.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .gap import instanton_overlap
from .metastability import (af_occupancy, af_zero_T_threshold, fm_occupancy,
                            trace_fm_region)
from .model import ModelParams, free_energy_curve, free_energy_hybrid_curve, normalized
from .phase import (classify_transition, critical_line_p2, degenerate_minima,
                    hybrid_critical_line, lambda_critical, locate_gamma_c1,
                    locate_gamma_c2)
from .saddle import solve_sectored, solve_symmetric

__all__ = ["FIGURES", "run_figure"]


def _fe_rows(params: ModelParams, m):
    curve = free_energy_hybrid_curve if params.eta != 0.0 else free_energy_curve
    f = normalized(params, curve(params, m))
    return [[float(x), float(y)] for x, y in zip(m, f)]


def _fig1(jobs):
    params = ModelParams(p=2, q=2, J=1.0, lam=1.5, temperature=0.02)
    rows = []
    for g in (4.0, 5.0, 5.5):
        for s in solve_symmetric(params.with_(gamma=g)):
            rows.append([g, s.config.w[0], s.stability, s.multiplicity])
    return [("fig1_fixed_points.csv", ["gamma_over_C", "w", "stability",
                                       "multiplicity"], rows)], \
        ["three fixed points at gamma/C = 4, one at 5.5; boundary near 5.0"]


def _fig2(jobs):
    params = ModelParams(p=4, q=4, J=1.0, lam=1.0, gamma=2.37, temperature=0.01)
    m = np.linspace(-1.0, 1.0, 801)
    return [("fig2_fe_scan.csv", ["m", "free_energy_normalized"],
             _fe_rows(params, m))], \
        ["two degenerate minima at gamma/C^3 = 2.37"]


_FIG3_SETS = ((0.01, 1.2), (0.1, 1.3), (0.6, 2.0), (3.3, 6.7))


def _fig3(jobs):
    arts = []
    m = np.linspace(0.0, 1.0, 801)
    for lam, g in _FIG3_SETS:
        params = ModelParams(p=4, q=2, J=1.0, lam=lam, gamma=g, temperature=0.01)
        arts.append((f"fig3_lam{lam:g}.csv", ["m", "free_energy_normalized"],
                     _fe_rows(params, m)))
    return arts, [f"degenerate minima at lambda/C^2={l:g}, gamma/C^3={g:g}"
                  for l, g in _FIG3_SETS]


def _classify_sweep(base: ModelParams, lam_values):
    rows = []
    for lam in lam_values:
        r = classify_transition(base.with_(lam=float(lam)))
        rows.append([float(lam),
                     math.nan if r.gamma_c1 is None else r.gamma_c1,
                     math.nan if r.gamma_c2 is None else r.gamma_c2,
                     r.order,
                     math.nan if r.barrier_height is None else r.barrier_height,
                     math.nan if r.barrier_width is None else r.barrier_width])
    return rows


_CLASSIFY_COLS = ["lambda_scaled", "gamma_c1_scaled", "gamma_c2_scaled",
                  "order", "barrier_height", "barrier_width"]


def _fig4(jobs):
    base = ModelParams(p=4, q=2, J=1.0, temperature=0.01)
    rows = _classify_sweep(base, np.linspace(0.2, 3.8, 19))
    return [("fig4_barrier_vs_lambda.csv", _CLASSIFY_COLS, rows)], \
        ["barrier height and width decrease with lambda and vanish at lambda/C^2 = 4"]


def _fig5(jobs):
    base = ModelParams(p=4, q=2, J=1.0)
    rows = []
    for T in np.linspace(0.0, 12.0, 9):
        lc = lambda_critical(base, float(T))
        rows.append([float(T), math.nan if lc is None else lc])
    return [("fig5_lambda_c_vs_T.csv", ["T_over_C4", "lambda_c_over_C2"], rows)], \
        ["lambda_c(0) = 4.00; nondecreasing; first-order region gone above T/C^4 ~ 12.5"]


def _fig6(jobs):
    base = ModelParams(p=3, q=2, J=1.0)
    rows = []
    for lam in np.linspace(0.1, 5.0, 50):
        p = base.with_(lam=float(lam))
        gc1, gc2 = locate_gamma_c1(p), locate_gamma_c2(p)
        rows.append([float(lam), gc1 - gc2])
    return [("fig6_gap_c1_c2.csv", ["lambda_over_C", "gamma_c1_minus_c2_over_C2"],
             rows)], ["difference strictly positive: first order inevitable for p=3"]


def _fig7(jobs):
    params = ModelParams(p=4, q=2, J=1.0, lam=4.0, gamma=8.0)
    m = np.linspace(0.0, 1.0, 801)
    return [("fig7_fe_scan.csv", ["m", "free_energy_normalized"],
             _fe_rows(params, m))], \
        ["marginal (quartic-flat) curve at lambda/C^2 = 4, gamma/C^3 = 8"]


def _fig8(jobs):
    arts = []
    for p in (3, 4, 5, 6):
        base = ModelParams(p=p, q=2, J=1.0)
        rows = _classify_sweep(base, np.linspace(0.25, 4.75, 16))
        arts.append((f"fig8_order_p{p}.csv", _CLASSIFY_COLS, rows))
    return arts, ["tag sequence first -> coexisting -> second as lambda grows"]


def _fig9(jobs):
    base = ModelParams(p=5, q=2, J=1.0)
    rows = _classify_sweep(base, np.linspace(1.9, 2.7, 17))
    return [("fig9_p5_crossing.csv", _CLASSIFY_COLS, rows)], \
        ["gamma_c1 and gamma_c2 cross at lambda/C^3 = 2.078; window closes at 2.50"]


def _fig10(jobs):
    base = ModelParams(p=4, q=2, J=1.0)
    rows = []
    for lam in np.linspace(0.2, 3.98, 20):
        p = base.with_(lam=float(lam))
        gc1 = locate_gamma_c1(p)
        if gc1 is None:
            rows.append([float(lam), math.nan, math.nan])
            continue
        pg = p.with_(gamma=gc1)
        pair = degenerate_minima(pg)
        ov = math.nan
        if pair is not None:
            ov = instanton_overlap(pg, pair[0][0], pair[1][0]).overlap
        rows.append([float(lam), gc1, ov])
    return [("fig10_instanton_overlap.csv",
             ["lambda_over_C2", "gamma_c1_over_C3", "overlap"], rows)], \
        ["overlap rises monotonically and reaches 1 at lambda/C^2 = 4"]


def _fig11(jobs):
    base = ModelParams(p=4, q=4, J=1.0, coupling="antiferro", temperature=0.03)
    rows = _classify_sweep(base, np.linspace(0.5, 2.0, 7))
    return [("fig11_af_barrier.csv", _CLASSIFY_COLS, rows)], \
        ["larger penalty gives a higher barrier for the locally ordered transition"]


def _fig12(jobs):
    base = ModelParams(p=4, q=2, J=1.0)
    pts = hybrid_critical_line(base, np.linspace(0.0, 2.0, 9))
    return [("fig12_hybrid_critline.csv", ["eta_over_C3", "lambda_c_over_C2"],
             [[e, l] for e, l in pts])], \
        ["lambda_c = 4 at eta = 0; monotone in eta"]


def _fig13(jobs):
    base = ModelParams(p=2, q=2, J=1.0, lam=1.0, temperature=0.03)
    rows = []
    for g in np.linspace(0.0, 1.6, 33):
        sols = solve_sectored(base.with_(gamma=float(g)), (0.52, 0.48))
        for s in sols:
            w1, w2 = s.config.w
            if w1 * w2 < 0 and s.stability == "local_min":
                rows.append([float(g), w1, w2])
    return [("fig13_mixed_branch.csv", ["gamma_over_C", "w1", "w2"], rows)], \
        ["mixed-sign branch persists up to gamma/C ~ 1.25 at k/N = 0.48"]


def _fig14(jobs):
    base = ModelParams(p=2, q=2, J=1.0, lam=0.9)
    ks = np.linspace(0.06, 0.49, 20)
    reg_g = trace_fm_region(base, ks, "gamma_over_C", 4.0)
    reg_t = trace_fm_region(base, ks, "T_over_C", 4.0)
    return [("fig14a_fm_region_gamma.csv", ["k_over_N", "gamma_over_C"],
             [list(p) for p in reg_g.boundary]),
            ("fig14b_fm_region_T.csv", ["k_over_N", "T_over_C"],
             [list(p) for p in reg_t.boundary])], \
        ["the gamma- and T-boundaries are nearly indistinguishable",
         "threshold k/N = 0.05 at T = Gamma = 0"]


def _fig15(jobs):
    params = ModelParams(p=2, q=2, J=1.0, lam=0.9, temperature=0.5)
    spec = fm_occupancy(params, N=100)
    rows = [[k, e, f] for k, (e, f) in
            enumerate(zip(spec.energies, spec.normalized_free_energies))]
    return [("fig15_fm_levels.csv", ["k", "energy", "free_energy_normalized"],
             rows)], ["excited-level free energies approach the ground one as C grows"]


def _fig16(jobs):
    rows = [[k, af_zero_T_threshold(1.0, k, 100)] for k in range(0, 40)]
    return [("fig16_af_thresholds.csv", ["k", "lambda_threshold"], rows)], \
        ["zero-T threshold lambda = 2kJ/N: higher levels need larger penalty"]


def _fig17(jobs):
    rows = []
    for beta in np.geomspace(0.01, 10.0, 25):
        spec = af_occupancy(1.0, 1.0, 2.0, float(beta), 100)
        rows.append([float(beta), spec.probabilities[0]])
    return [("fig17_af_ground_probability.csv", ["beta", "p_ground"], rows)], \
        ["ground-sector probability -> 1 as beta grows; depends on J, C via J*C^2 only"]


FIGURES = {f"fig{i}": fn for i, fn in enumerate(
    (_fig1, _fig2, _fig3, _fig4, _fig5, _fig6, _fig7, _fig8, _fig9, _fig10,
     _fig11, _fig12, _fig13, _fig14, _fig15, _fig16, _fig17), start=1)}


def run_figure(figure_id: str, outdir: str, jobs: int | None = None) -> list:
    """Write the CSV artifact(s) and manifest for one figure id; returns the
    list of file paths written."""
    os.makedirs(outdir, exist_ok=True)
    artifacts, landmarks = FIGURES[figure_id](jobs or 1)
    written = []
    for name, columns, rows in artifacts:
        path = os.path.join(outdir, name)
        with open(path, "w") as fh:
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v)
                                  for v in row) + "\n")
        written.append(path)
    manifest = os.path.join(outdir, f"{figure_id}_manifest.txt")
    with open(manifest, "w") as fh:
        fh.write(f"{figure_id}\n")
        for path in written:
            fh.write(f"file: {os.path.basename(path)}\n")
        for lm in landmarks:
            fh.write(f"landmark: {lm}\n")
    written.append(manifest)
    return written
