"""Command-line entry point ``azqhm``.

Exit status: 0 success, 1 usage error, 2 invalid scenario, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import (MachineState, evolve, markov_rates, p1_from_w, relax_markov,
                       steady_conditions, steady_state_w, stroke_grid)
from .response import NumericalError, markovian_response, profile_arrays, sinc_kernel
from .scenario import Scenario, ScenarioError, carnot, load_preset, load_scenario, nearest_index
from .spectra import UsageError, correlation_time, eval_spectral
from .thermo import (PerformanceRecord, Regime, quantum_speed_limit, sweep_modulation,
                     write_sweep_csv)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3

FIGURES = {"2": "fig2", "3": "fig3", "4": "fig4", "5a": "fig5a", "5b": "fig5b", "6": "fig6"}
BOOST_THRESHOLDS = {"3": ("boost_power", 2.0), "4": ("boost_power", 7.0),
                    "5a": ("boost_cooling", 2.0), "5b": ("boost_cooling", 9.0)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    return repr(float(x))


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) if isinstance(v, float)
                        else str(v) for v in r])


def _out_path(p) -> Path:
    path = Path(p)
    if path.parent and not path.parent.exists():
        raise UsageError(f"output directory {path.parent} does not exist")
    return path


# -- sweep -----------------------------------------------------------------

def run_sweep(sc: Scenario, azd=True, markov=True) -> list[PerformanceRecord]:
    return sweep_modulation(sc, sc.sweep.grid(), azd=azd, markov=markov)


def cmd_sweep(args) -> int:
    sc = load_scenario(args.config)
    out = _out_path(args.out)
    recs = run_sweep(sc, azd=not args.markov_only, markov=not args.azd_only)
    write_sweep_csv(out, recs)
    failed = [r for r in recs if r.error]
    for r in failed:
        print(f"delta_s = {r.delta_s:.6g}: {r.error}", file=sys.stderr)
    print(f"wrote {len(recs)} records to {out}")
    return EXIT_NUMERICAL if failed else EXIT_OK


# -- trace -----------------------------------------------------------------

def trace(sc: Scenario, delta_s=None, from_transient=False, p1_init=0.6, markov=False):
    hot, cold, m = sc.build(delta_s)
    cfg = sc.cycle
    p_ss = p1_from_w(steady_state_w(m, sc.beta_h, sc.beta_c))
    parts = []
    t0 = 0.0
    p = p_ss
    if from_transient:
        # pre-history under constant Markovian rates, then one frozen gap
        tau_b = max(correlation_time(hot), correlation_time(cold))
        gap = cfg.gap(tau_b)
        r = markov_rates(hot, cold, m)
        total = r.R0 + r.R1
        relax = 1.0 / (m.p1 * total) if total > 0 else 1.0
        pre = relax_markov(hot, cold, m, p1_init, 40.0 * relax)
        pre.t = pre.t - gap
        parts.append(pre)
        p = float(pre.p1[-1])
        t0 = 0.0
    traj = evolve(hot, cold, m, cfg, MachineState(p, t0), sc.quad, markov=markov)
    parts.append(traj)
    cols = [np.concatenate([getattr(x, k) for x in parts])
            for k in ("t", "p1", "R0", "R1", "stroke_id")]
    return cols, p_ss


def cmd_trace(args) -> int:
    sc = load_scenario(args.config)
    out = _out_path(args.out)
    cols, p_ss = trace(sc, args.delta_s, args.from_transient, args.p1_init, args.markov)
    rows = zip(*(c.tolist() for c in cols))
    _write_rows(out, ("t", "p1", "R0", "R1", "stroke_id"), rows)
    dev = float(np.max(np.abs(cols[1][cols[4] >= 0] - p_ss)))
    print(f"p1_ss = {p_ss:.6f}")
    print(f"max |p1 - p1_ss| over strokes = {dev:.3e}")
    return EXIT_OK


# -- response --------------------------------------------------------------

def cmd_response(args) -> int:
    sc = load_scenario(args.config)
    out = _out_path(args.out)
    hot, cold, m = sc.build(args.delta_s)
    tau_c = sc.cycle.tau_c(m)
    t = args.t if args.t is not None else tau_c
    if args.what == "overlap":
        nu = np.linspace(args.nu_min, args.nu_max if args.nu_max else 2 * m.omega0,
                         args.points)
        gh = eval_spectral(hot, nu)
        gc = eval_spectral(cold, nu)
        sh = sinc_kernel(nu, m.omega_hot, t)
        sc_ = sinc_kernel(nu, m.omega_cold, t)
        rows = zip(nu.tolist(), gh.tolist(), gc.tolist(), sh.tolist(), sc_.tolist())
        _write_rows(out, ("nu", "G_h", "G_c", "sinc_h", "sinc_c"), rows)
    else:
        ts = stroke_grid(m, sc.cycle)[0][::2][1:]
        ih = profile_arrays(hot, m.omega_hot, ts, sc.quad)[0]
        ic = profile_arrays(cold, m.omega_cold, ts, sc.quad)[0]
        mh = markovian_response(hot, m.omega_hot)
        mc = markovian_response(cold, m.omega_cold)
        rows = ((t_, t_ / m.tau_s, a, b, mh, mc) for t_, a, b in zip(ts.tolist(), ih.tolist(),
                                                                      ic.tolist()))
        _write_rows(out, ("t", "t_over_tau_s", "I_h", "I_c", "I_h_markov", "I_c_markov"), rows)
    print(f"wrote {args.what} table to {out}")
    return EXIT_OK


# -- regimes ---------------------------------------------------------------

def regime_report(sc: Scenario) -> list[str]:
    hot, cold, m = sc.build()
    qsl = quantum_speed_limit(sc.omega0, sc.T_h, sc.T_c)
    tau_b = max(correlation_time(hot), correlation_time(cold))
    tau_c = sc.cycle.tau_c(m)
    lines = [f"Delta_qsl = {qsl:.4f}",
             f"tau_qsl = {2 * math.pi / qsl:.4f}",
             f"tau_B = {tau_b:.4f}",
             f"tau_S = {m.tau_s:.4f}  (delta_s = {m.delta_s:g})",
             f"tau_C = {tau_c:.4f}  (n = {sc.cycle.n})",
             f"operation: heat engine for delta_s < {qsl:.4f}, "
             f"refrigerator for delta_s > {qsl:.4f}",
             f"at delta_s = {m.delta_s:g}: "
             + ("heat engine" if m.delta_s < qsl else "refrigerator" if m.delta_s > qsl
                else "idle (speed limit)")]
    shift = _detuning(hot)
    if tau_c > 10 * tau_b:
        mem = "Markovian (tau_C >> tau_B)"
    elif tau_c <= 0.01 * min(tau_b, 1.0 / shift if shift > 0 else math.inf):
        mem = "Zeno (tau_C << tau_B, 1/delta)"
    else:
        mem = "anti-Zeno (tau_C <~ tau_B)"
    lines.append(f"memory regime: {mem}")
    for msg in steady_conditions(hot, cold, m, sc.cycle):
        lines.append(f"warning: {msg}")
    return lines


def _detuning(f) -> float:
    model = f.model
    if hasattr(model, "peaks"):
        return max(abs(p.shift) for p in model.peaks)
    return model.delta


def cmd_regimes(args) -> int:
    sc = load_scenario(args.config)
    for line in regime_report(sc):
        print(line)
    return EXIT_OK


# -- reproduce -------------------------------------------------------------

def _check(name, value, op, threshold):
    if op == ">":
        ok = value > threshold
    elif op == "<":
        ok = value < threshold
    else:
        ok = bool(value)
    if isinstance(value, float) and math.isnan(value):
        ok = False
    return {"name": name, "value": value, "op": op, "threshold": threshold, "pass": bool(ok)}


def sign_change_bracket(grid, W):
    """Indices (i, i+1) where W goes from < 0 to > 0, or None."""
    for i in range(len(grid) - 1):
        if W[i] < 0 < W[i + 1]:
            return i, i + 1
    return None


def qsl_checks(sc: Scenario, recs) -> list[dict]:
    grid = [r.delta_s for r in recs]
    qsl = quantum_speed_limit(sc.omega0, sc.T_h, sc.T_c)
    out = []
    for label, attr in (("azd", "azd"), ("markov", "markov")):
        W = [getattr(r, attr).W for r in recs]
        br = sign_change_bracket(grid, W)
        ok = br is not None and grid[br[0]] <= qsl <= grid[br[1]]
        where = [grid[br[0]], grid[br[1]]] if br else None
        out.append({"name": f"W_sign_change_brackets_qsl_{label}", "value": where,
                    "op": "contains", "threshold": qsl, "pass": bool(ok)})
    return out


def efficiency_checks(sc: Scenario, recs) -> list[dict]:
    he = [r for r in recs if r.azd.regime is Regime.HEAT_ENGINE]
    qr = [r for r in recs if r.azd.regime is Regime.REFRIGERATOR]
    d_eta = max((abs(r.azd.eta - r.markov.eta) for r in he), default=math.nan)
    d_cop = max((abs(r.azd.cop - r.markov.cop) for r in qr), default=math.nan)
    qsl = quantum_speed_limit(sc.omega0, sc.T_h, sc.T_c)
    grid = [r.delta_s for r in recs]
    near = recs[nearest_index(grid, qsl)]
    eta_c = carnot(sc)
    rel = abs(near.azd.eta - eta_c) / eta_c
    carnot_bound = all(r.azd.eta <= eta_c + 1e-9 and r.markov.eta <= eta_c + 1e-9
                       for r in he if r.markov.regime is Regime.HEAT_ENGINE)
    return [_check("max_abs_eta_azd_minus_markov", d_eta, "<", 1e-2),
            _check("eta_near_qsl_rel_dev_from_carnot", rel, "<", 0.02),
            _check("max_abs_cop_azd_minus_markov", d_cop, "<", 1e-2),
            _check("carnot_bound", carnot_bound, "is", True)]


def boost_max(recs, which: str) -> float:
    if which == "boost_power":
        vals = [r.boost_power for r in recs if r.azd.regime is Regime.HEAT_ENGINE]
    else:
        vals = [r.boost_cooling for r in recs if r.azd.regime is Regime.REFRIGERATOR]
    vals = [v for v in vals if not math.isnan(v)]
    return max(vals) if vals else math.nan


def reproduce(figure: str, out_dir: Path) -> dict:
    name = FIGURES[figure]
    sc = load_preset(name)
    out_dir.mkdir(parents=True, exist_ok=True)
    checks = []
    if figure == "2":
        cols, p_ss = trace(sc)
        rows = zip(*(c.tolist() for c in cols))
        _write_rows(out_dir / "fig2_trace.csv", ("t", "p1", "R0", "R1", "stroke_id"), rows)
        dev = float(np.max(np.abs(cols[1] - p_ss)))
        checks.append(_check("max_abs_p1_minus_p1ss", dev, "<", 1e-3))
        checks.append({"name": "p1_ss", "value": p_ss, "op": "info", "threshold": None,
                       "pass": True})
    else:
        recs = run_sweep(sc)
        write_sweep_csv(out_dir / f"{name}_sweep.csv", recs)
        failed = [r for r in recs if r.error]
        checks.append(_check("failed_points", len(failed) == 0, "is", True))
        if figure in BOOST_THRESHOLDS:
            which, thr = BOOST_THRESHOLDS[figure]
            checks.append(_check(f"{which}_max", boost_max(recs, which), ">", thr))
        if figure in ("3", "5a", "6"):
            checks.extend(qsl_checks(sc, recs))
        if figure == "6":
            checks.extend(efficiency_checks(sc, recs))
    verdict = {"figure": figure, "preset": name, "checks": checks,
               "all_pass": all(c["pass"] for c in checks)}
    with open(out_dir / "checks.json", "w") as fh:
        json.dump(verdict, fh, indent=2, default=float)
        fh.write("\n")
    return verdict


def _describe(c: dict) -> str:
    v = c["value"]
    vs = f"{v:.6g}" if isinstance(v, float) else str(v)
    status = "PASS" if c["pass"] else "FAIL"
    if c["op"] in (">", "<"):
        return f"{c['name']} = {vs} ({c['op']} {c['threshold']:g}: {status})"
    if c["op"] == "contains":
        return f"{c['name']} = {vs} (contains {c['threshold']:.4f}: {status})"
    if c["op"] == "info":
        return f"{c['name']} = {vs}"
    return f"{c['name']} = {vs} ({status})"


def cmd_reproduce(args) -> int:
    verdict = reproduce(args.figure, Path(args.out))
    for c in verdict["checks"]:
        print(_describe(c))
    print(f"overall: {'PASS' if verdict['all_pass'] else 'FAIL'}")
    return EXIT_OK


# -- main ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="azqhm", description="Anti-Zeno quantum heat machine simulator")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="performance versus delta_s, AZD and Markovian")
    s.add_argument("--config", required=True, help="scenario JSON file or preset name")
    s.add_argument("--out", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--markov-only", action="store_true")
    g.add_argument("--azd-only", action="store_true")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("trace", help="population trajectory over the configured cycles")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--delta-s", type=float, default=None)
    s.add_argument("--from-transient", action="store_true",
                   help="start from p1 = --p1-init and relax under Markovian rates first")
    s.add_argument("--p1-init", type=float, default=0.6)
    s.add_argument("--markov", action="store_true", help="use I = pi G during strokes")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("response", help="sinc/spectrum overlap or I(t) profile tables")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--what", choices=("overlap", "profile"), required=True)
    s.add_argument("--delta-s", type=float, required=True)
    s.add_argument("--t", type=float, default=None, help="overlap time (default tau_C)")
    s.add_argument("--points", type=int, default=4001)
    s.add_argument("--nu-min", type=float, default=0.0)
    s.add_argument("--nu-max", type=float, default=None)
    s.set_defaults(func=cmd_response)

    s = sub.add_parser("regimes", help="time scales, speed limit and operating regime")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_regimes)

    s = sub.add_parser("reproduce", help="run a bundled figure preset and check it")
    s.add_argument("--figure", required=True, choices=tuple(FIGURES))
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "points", 2) < 2:
            raise UsageError("--points must be >= 2")
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except ScenarioError as exc:
        print(f"azqhm: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except UsageError as exc:
        print(f"azqhm: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"azqhm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
