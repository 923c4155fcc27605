"""Command-line front end: parameter sweeps and figure-reproduction recipes.

Every command emits a deterministic table (CSV by default, JSON optional)
with a '#'-prefixed header block recording the fully resolved parameters,
tool version, and an ISO-8601 timestamp.  Scaled parameter flags
(``--lambda_over_C2`` etc.) mirror the natural axes of the model and are
mutually exclusive with their unscaled counterparts.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .gap import instanton_overlap, spinwave_spectrum
from .metastability import (af_occupancy, af_metastable_exists,
                            af_zero_T_threshold, fm_disappearance_point,
                            fm_occupancy)
from .model import (DomainError, InputError, ModelParams, free_energy_curve,
                    free_energy_hybrid_curve, normalized)
from .oracle import classical_spectrum, load_instance, quantum_gap
from .phase import (classify_transition, critical_line_p2, degenerate_minima,
                    hybrid_critical_line, lambda_critical, locate_gamma_c1,
                    locate_gamma_c2, barrier_metrics)
from .saddle import solve_symmetric

__all__ = ["main"]

_SCALED_BASES = {"lambda": "lam", "gamma": "gamma", "T": "temperature", "eta": "eta"}
_PLAIN_DEST = {"lambda": "lam", "gamma": "gamma", "T": "temperature", "eta": "eta"}
_MAX_EXP = 6

COMMANDS = ("fe-scan", "saddle", "critline", "classify", "lambdac", "barrier",
            "gap-instanton", "gap-spinwave", "meta-fm", "meta-af", "occupancy",
            "hybrid-critline", "exact-spectrum", "exact-gap", "reproduce")


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", type=int, default=None)
    sub.add_argument("--q", type=int, default=None)
    sub.add_argument("--J", type=float, default=None)
    sub.add_argument("--C", type=float, default=None)
    sub.add_argument("--coupling", choices=("ferro", "antiferro"), default=None)
    for base in _SCALED_BASES:
        sub.add_argument(f"--{base}", dest=f"plain_{base}", type=float, default=None)
        for n in range(1, _MAX_EXP + 1):
            sub.add_argument(f"--{base}_over_C{'' if n == 1 else n}",
                             dest=f"scaled_{base}_{n}", type=float, default=None)
    sub.add_argument("--sweep", nargs=4, action="append", default=None,
                     metavar=("PARAM", "START", "STOP", "STEPS"))
    sub.add_argument("--output", "-o", default=None)
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--jobs", type=int, default=None)
    sub.add_argument("--config", default=None)


def _load_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"config line not in 'key = value' form: {raw!r}")
            key, val = (t.strip() for t in line.split("=", 1))
            values[key] = val
    return values


def _flag_to_dest(key: str) -> str:
    if key.startswith(tuple(f"{b}_over_C" for b in _SCALED_BASES)):
        base, _, tail = key.partition("_over_C")
        return f"scaled_{base}_{tail or '1'}"
    if key in _SCALED_BASES:
        return f"plain_{key}"
    return key


def _apply_config(args: argparse.Namespace, cfg: dict) -> None:
    for key, val in cfg.items():
        dest = _flag_to_dest(key)
        if not hasattr(args, dest):
            raise InputError(f"unknown config key {key!r}")
        if getattr(args, dest) is None:
            cur_type = {"p": int, "q": int, "jobs": int, "N": int,
                        "coupling": str, "axis": str, "kind": str,
                        "form": str, "instance": str, "output": str}.get(dest, float)
            setattr(args, dest, cur_type(val))


def _resolve_params(args: argparse.Namespace):
    """ModelParams from plain/scaled flags; scaled and unscaled forms of the
    same parameter are mutually exclusive."""
    C = args.C if args.C is not None else 1.0
    resolved = {"p": args.p if args.p is not None else 2,
                "q": args.q if args.q is not None else 2,
                "J": args.J if args.J is not None else 1.0,
                "nesting": C,
                "coupling": args.coupling or "ferro"}
    for base, dest in _SCALED_BASES.items():
        plain = getattr(args, f"plain_{base}")
        scaled = [(n, getattr(args, f"scaled_{base}_{n}"))
                  for n in range(1, _MAX_EXP + 1)
                  if getattr(args, f"scaled_{base}_{n}") is not None]
        if plain is not None and scaled:
            raise InputError(f"--{base} conflicts with its scaled form; give one")
        if len(scaled) > 1:
            raise InputError(f"multiple scaled forms of --{base} given")
        if plain is not None:
            resolved[dest] = plain
        elif scaled:
            n, v = scaled[0]
            resolved[dest] = v * C ** n
        else:
            resolved[dest] = 0.0
    return ModelParams(**resolved)


def _sweeps(args: argparse.Namespace):
    out = []
    for name, start, stop, steps in (args.sweep or []):
        steps = int(steps)
        if steps < 1:
            raise InputError("sweep STEPS must be >= 1")
        out.append((name, np.linspace(float(start), float(stop), steps)))
    if len(out) > 2:
        raise InputError("at most two sweep ranges are supported")
    return out


def _with_swept(params: ModelParams, name: str, value: float) -> ModelParams:
    """Apply one swept parameter (plain or scaled name) onto params."""
    C = params.nesting
    if name in _PLAIN_DEST:
        return params.with_(**{_PLAIN_DEST[name]: float(value)})
    for base, dest in _SCALED_BASES.items():
        prefix = f"{base}_over_C"
        if name.startswith(prefix):
            n = int(name[len(prefix):] or "1")
            return params.with_(**{dest: float(value) * C ** n})
    if name == "J":
        return params.with_(J=float(value))
    raise InputError(f"unknown sweep parameter {name!r}; known: m, k_over_N, k, J, "
                     + ", ".join(sorted(_PLAIN_DEST))
                     + " and their _over_Cn scaled forms")


def _pmap(fn, values, jobs: int):
    if jobs <= 1:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, values))


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "nan"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit(args, header: dict, columns, rows) -> None:
    stream = open(args.output, "w") if args.output else sys.stdout
    try:
        if args.format == "json":
            doc = {"header": {k: (None if isinstance(v, float) and math.isnan(v)
                                  else v) for k, v in header.items()},
                   "columns": list(columns),
                   "rows": [[None if isinstance(v, float) and math.isnan(v)
                             else v for v in row] for row in rows]}
            json.dump(doc, stream, indent=1)
            stream.write("\n")
        else:
            for k, v in header.items():
                stream.write(f"# {k} = {_fmt(v)}\n")
            stream.write(",".join(columns) + "\n")
            for row in rows:
                stream.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if args.output:
            stream.close()


def _header(command: str, params: ModelParams | None, extra: dict | None = None) -> dict:
    h = {"command": command, "version": __version__,
         "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat()}
    if params is not None:
        h.update({"p": params.p, "q": params.q, "J": params.J,
                  "lambda": params.lam, "gamma": params.gamma,
                  "eta": params.eta, "T": params.temperature,
                  "C": params.nesting, "coupling": params.coupling})
    if extra:
        h.update(extra)
    return h


def read_table(path: str):
    """Parse a CSV artifact written by this tool back into
    (header dict, columns, rows of floats/strings)."""
    header, columns, rows = {}, None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                header[key.strip()] = val.strip()
            elif columns is None:
                columns = line.split(",")
            elif line:
                row = []
                for tok in line.split(","):
                    try:
                        row.append(float(tok))
                    except ValueError:
                        row.append(tok)
                rows.append(row)
    return header, columns or [], rows


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def _scale_pow(params: ModelParams, k: int) -> float:
    return params.nesting ** k


def _cmd_fe_scan(args, params):
    sweeps = _sweeps(args)
    if len(sweeps) != 1 or sweeps[0][0] != "m":
        raise InputError("fe-scan needs exactly --sweep m START STOP STEPS")
    m = sweeps[0][1]
    curve = free_energy_hybrid_curve if params.eta != 0.0 else free_energy_curve
    f = normalized(params, curve(params, m))
    return ["m", "free_energy_normalized"], [[float(x), float(y)]
                                             for x, y in zip(m, f)]


def _cmd_saddle(args, params):
    cols = ["w", "residual", "stability", "free_energy_normalized", "multiplicity"]
    rows = []
    for s in solve_symmetric(params):
        rows.append([s.config.w[0], s.residual, s.stability,
                     normalized(params, s.free_energy), s.multiplicity])
    return cols, rows


def _cmd_critline(args, params):
    sweeps = _sweeps(args)
    if len(sweeps) != 1 or sweeps[0][0] not in ("T_over_C", "gamma_over_C"):
        raise InputError("critline needs --sweep T_over_C ... or --sweep gamma_over_C ...")
    name, values = sweeps[0]
    axis = "gamma_of_T" if name == "T_over_C" else "T_of_gamma"
    pts = critical_line_p2(params, axis, values)
    if name == "T_over_C":
        return ["T_over_C", "gamma_c_over_C"], [[t, g] for g, t in pts]
    return ["gamma_over_C", "T_c_over_C"], [[g, t] for g, t in pts]


def _classify_row(params):
    r = classify_transition(params)
    return [r.gamma_c1 if r.gamma_c1 is not None else math.nan,
            r.gamma_c2 if r.gamma_c2 is not None else math.nan,
            r.order,
            r.barrier_height if r.barrier_height is not None else math.nan,
            r.barrier_width if r.barrier_width is not None else math.nan]


def _cmd_classify(args, params):
    cols_tail = ["gamma_c1_scaled", "gamma_c2_scaled", "order",
                 "barrier_height", "barrier_width"]
    sweeps = _sweeps(args)
    if not sweeps:
        return cols_tail, [_classify_row(params)]
    name, values = sweeps[0]
    rows = _pmap(lambda v: [float(v)] + _classify_row(_with_swept(params, name, v)),
                 values, args.jobs)
    return [name] + cols_tail, rows


def _cmd_lambdac(args, params):
    k = max(params.p, params.q) - 2
    lc = lambda_critical(params, params.temperature)
    return [f"lambda_c_over_C{k}"], [[lc if lc is not None else math.nan]]


def _cmd_barrier(args, params):
    scale = _scale_pow(params, max(params.p, params.q) - 1)
    if params.gamma == 0.0:
        gc1 = locate_gamma_c1(params)
        if gc1 is None:
            raise DomainError("no first-order point found")
        params = params.with_(gamma=gc1 * scale)
    height, width = barrier_metrics(params)
    return (["gamma_scaled", "barrier_height", "barrier_width"],
            [[params.gamma / scale, height, width]])


def _cmd_gap_instanton(args, params):
    sweeps = _sweeps(args)
    if len(sweeps) != 1:
        raise InputError("gap-instanton needs one --sweep over a lambda form")
    name, values = sweeps[0]
    scale = _scale_pow(params, max(params.p, params.q) - 1)

    def row(v):
        pl = _with_swept(params, name, v)
        gc1 = locate_gamma_c1(pl)
        if gc1 is None:
            return [float(v), math.nan, math.nan, math.nan, math.nan]
        pg = pl.with_(gamma=gc1 * scale)
        pair = degenerate_minima(pg)
        if pair is None:
            return [float(v), gc1, math.nan, math.nan, math.nan]
        (m0, _), (mc, _) = pair
        est = instanton_overlap(pg, m0, mc)
        return [float(v), gc1, m0, mc, est.overlap]

    rows = _pmap(row, values, args.jobs)
    return [name, "gamma_c1_scaled", "m_inner", "m_outer", "overlap"], rows


def _cmd_gap_spinwave(args, params):
    sweeps = _sweeps(args)
    if len(sweeps) != 1 or not sweeps[0][0].startswith("gamma"):
        raise InputError("gap-spinwave needs one --sweep over gamma")
    name, values = sweeps[0]
    rows = []
    for v in values:
        g = _with_swept(params, name, v).gamma
        s = spinwave_spectrum(params.J, params.nesting, params.lam, g)
        rows.append([float(v), s.theta, s.omega0, s.omega1, s.gap])
    return [name, "theta", "omega0", "omega1", "gap"], rows


def _cmd_meta_fm(args, params):
    sweeps = _sweeps(args)
    if len(sweeps) != 1 or sweeps[0][0] != "k_over_N":
        raise InputError("meta-fm needs --sweep k_over_N START STOP STEPS")
    values = sweeps[0][1]
    rows = _pmap(lambda v: [float(v),
                            fm_disappearance_point(params, float(v), args.axis, args.hi)],
                 values, args.jobs)
    return ["k_over_N", f"boundary_{args.axis}"], rows


def _cmd_meta_af(args, params):
    sweeps = _sweeps(args)
    if len(sweeps) != 1 or sweeps[0][0] != "k":
        raise InputError("meta-af needs --sweep k START STOP STEPS")
    rows = []
    for v in sweeps[0][1]:
        k = int(round(v))
        thr = af_zero_T_threshold(params.J, k, args.N)
        exists = af_metastable_exists(params, k, args.N)
        rows.append([k, thr, int(exists)])
    return ["k", "lambda_threshold", "exists"], rows


def _cmd_occupancy(args, params):
    if args.kind == "af":
        beta = math.inf if params.zero_temperature else 1.0 / params.temperature
        spec = af_occupancy(params.J, params.nesting, params.lam, beta, args.N)
        cols = ["level", "energy", "log_weight", "probability"]
        rows = [[i, e, lw, pr] for i, (e, lw, pr) in
                enumerate(zip(spec.energies, spec.log_weights, spec.probabilities))]
    else:
        spec = fm_occupancy(params, args.N)
        cols = ["level", "energy", "log_weight", "probability",
                "free_energy_normalized"]
        rows = [[i, e, lw, pr, fn] for i, (e, lw, pr, fn) in
                enumerate(zip(spec.energies, spec.log_weights, spec.probabilities,
                              spec.normalized_free_energies))]
    return cols, rows


def _cmd_hybrid_critline(args, params):
    sweeps = _sweeps(args)
    if len(sweeps) != 1 or not sweeps[0][0].startswith("eta"):
        raise InputError("hybrid-critline needs one --sweep over an eta form")
    name, values = sweeps[0]
    eta_scale = _scale_pow(params, params.p - 1)
    scaled = [_with_swept(params, name, v).eta / eta_scale for v in values]
    pts = hybrid_critical_line(params, scaled)
    k = max(params.p, params.q) - 2
    return ([f"eta_over_C{params.p - 1}", f"lambda_c_over_C{k}"],
            [[e, l] for e, l in pts])


def _cmd_exact_spectrum(args, params):
    inst = load_instance(args.instance)
    spec = classical_spectrum(inst, args.form,
                              params if args.form != "pairwise" else None)
    return ["energy", "degeneracy"], [[e, d] for e, d in
                                      zip(spec.energies, spec.degeneracies)]


def _cmd_exact_gap(args, params):
    inst = load_instance(args.instance)
    return ["gamma", "gap"], [[params.gamma, quantum_gap(inst, params.gamma)]]


_HANDLERS = {
    "fe-scan": _cmd_fe_scan,
    "saddle": _cmd_saddle,
    "critline": _cmd_critline,
    "classify": _cmd_classify,
    "lambdac": _cmd_lambdac,
    "barrier": _cmd_barrier,
    "gap-instanton": _cmd_gap_instanton,
    "gap-spinwave": _cmd_gap_spinwave,
    "meta-fm": _cmd_meta_fm,
    "meta-af": _cmd_meta_af,
    "occupancy": _cmd_occupancy,
    "hybrid-critline": _cmd_hybrid_critline,
    "exact-spectrum": _cmd_exact_spectrum,
    "exact-gap": _cmd_exact_gap,
}


# ---------------------------------------------------------------------------
# Figure reproduction recipes
# ---------------------------------------------------------------------------

def _reproduce(args) -> None:
    from .reproduce import FIGURES, run_figure
    fid = args.figure
    if fid not in FIGURES:
        raise InputError(f"unknown figure id {fid!r}; known: " + ", ".join(FIGURES))
    run_figure(fid, args.outdir, jobs=args.jobs)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nqac",
        description="Mean-field toolkit for nested-encoding p-spin models: "
                    "free-energy sweeps, phase transitions, gap estimates, "
                    "metastability maps, and exact small-size oracles.")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = subs.add_parser(name)
        if name == "reproduce":
            sub.add_argument("figure", help="fig1 .. fig17")
            sub.add_argument("--outdir", default=".")
            sub.add_argument("--jobs", type=int, default=None)
            sub.add_argument("--config", default=None)
            continue
        _add_common(sub)
        if name == "meta-fm":
            sub.add_argument("--axis", choices=("gamma_over_C", "T_over_C"),
                             default="gamma_over_C")
            sub.add_argument("--hi", type=float, default=4.0)
        if name in ("meta-af", "occupancy"):
            sub.add_argument("--N", type=int, default=100)
        if name == "occupancy":
            sub.add_argument("--kind", choices=("fm", "af"), default="fm")
        if name in ("exact-spectrum", "exact-gap"):
            sub.add_argument("--instance", required=True)
        if name == "exact-spectrum":
            sub.add_argument("--form", default="pairwise",
                             choices=("pairwise", "pspin_ferro", "pspin_antiferro"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(args, _load_config(args.config))
        if args.jobs is None:
            args.jobs = int(os.environ.get("NQAC_JOBS", "1"))
        if args.command == "reproduce":
            _reproduce(args)
            return 0
        params = _resolve_params(args)
        columns, rows = _HANDLERS[args.command](args, params)
        _emit(args, _header(args.command, params), columns, rows)
        return 0
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, RuntimeError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
