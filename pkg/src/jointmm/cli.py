"""Command-line interface: load instances, run solvers, emit traces and reports.

Commands: solve, gave, glpe, linreg, budget, bench. Settings come from an
optional JSON run manifest (--config) with command-line flags taking
precedence. Traces are CSV with a frozen header; final states and reports
are JSON. Exit codes: 0 on success/stationarity, 2 when the iteration cap
was exhausted before the target, 1 on configuration or data errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import apps
from .errors import JointmmError
from .problem import compute_budget_constants, compute_constants, load_problem_manifest
from .solver import (
    SolverConfig,
    plan_budget,
    run_pgmsad,
    state_to_json,
    write_state_json,
    write_trace_csv,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CAP = 2


def _load_manifest(path):
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _setting(args, manifest, key, default=None):
    """Flag value if given, else manifest entry, else default."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    return manifest.get(key, default)


def _out_dir(args, manifest):
    out = _setting(args, manifest, "out", ".")
    os.makedirs(out, exist_ok=True)
    return out


def _write_outputs(out, trace, state, res, wall, write_trace=True):
    if write_trace:
        write_trace_csv(trace, os.path.join(out, "trace.csv"))
    write_state_json(state, res, wall, os.path.join(out, "state.json"))


def _solver_config(args, manifest, defaults):
    merged = dict(defaults)
    for key, field in [
        ("alpha_x", "alpha_x"),
        ("alpha_y", "alpha_y"),
        ("inner_n", "inner_steps"),
        ("outer_t", "outer_cap"),
        ("eps", "eps"),
        ("seed", "seed"),
    ]:
        val = _setting(args, manifest, key)
        if val is not None:
            merged[field] = val
    if _setting(args, manifest, "project_each_outer"):
        merged["project_each_outer"] = True
    trace_flag = _setting(args, manifest, "trace", True)
    merged["record_trace"] = bool(trace_flag)
    for key in ("x0", "y0", "lambda0"):
        if key in manifest:
            merged[key] = np.asarray(manifest[key], dtype=float)
    return SolverConfig(**merged)


def _run_builtin_gave(name, args, manifest, out):
    G = apps.builtin_gave(name)
    cfg = apps.builtin_gave_config(name)
    for key, attr in [
        ("alpha_x", "alpha_x"),
        ("alpha_y", "alpha_y"),
        ("alpha_z", "alpha_z"),
        ("inner_n", "inner_steps"),
        ("outer_t", "outer_cap"),
        ("eps", "eps"),
        ("penalty", "penalty"),
    ]:
        val = _setting(args, manifest, key)
        if val is not None:
            setattr(cfg, attr, val)
    start = time.perf_counter()
    result = apps.run_gave(G, cfg)
    wall = time.perf_counter() - start
    if _setting(args, manifest, "trace", True):
        write_trace_csv(result.trace, os.path.join(out, "trace.csv"))
    report = {
        "instance": name,
        "x": [float(v) for v in result.x],
        "app_error": result.error,
        "iterations": result.iterations,
        "converged": result.converged,
        "recovery_sign": result.recovery_sign,
        "wall_time_s": wall,
    }
    with open(os.path.join(out, "state.json"), "w", encoding="ascii") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(json.dumps({"instance": name, "app_error": result.error, "iterations": result.iterations}))
    return EXIT_OK if result.converged else EXIT_CAP


def _run_builtin_glpe(args, manifest, out):
    cone = _setting(args, manifest, "cone", "nonneg_orthant")
    G = apps.builtin_glpe(cone)
    cfg = apps.GlpeConfig()
    for key, attr in [
        ("alpha_x", "alpha"),
        ("inner_n", "inner_steps"),
        ("outer_t", "outer_cap"),
        ("eps", "eps"),
    ]:
        val = _setting(args, manifest, key)
        if val is not None:
            setattr(cfg, attr, val)
    cfg.record_trace = bool(_setting(args, manifest, "trace", True))
    start = time.perf_counter()
    result = apps.run_glpe(G, cfg)
    wall = time.perf_counter() - start
    if cfg.record_trace:
        write_trace_csv(result.trace, os.path.join(out, "trace.csv"))
    report = {
        "instance": f"glpe-paper/{cone}",
        "x": [float(v) for v in result.x],
        "x_cone": [float(v) for v in result.x_cone],
        "app_error": result.error,
        "iterations": result.iterations,
        "converged": result.converged,
        "wall_time_s": wall,
    }
    with open(os.path.join(out, "state.json"), "w", encoding="ascii") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(json.dumps({"instance": report["instance"], "app_error": result.error, "iterations": result.iterations}))
    return EXIT_OK if result.converged else EXIT_CAP


def cmd_solve(args):
    manifest = _load_manifest(args.config)
    out = _out_dir(args, manifest)
    builtin = _setting(args, manifest, "builtin")
    if builtin is not None:
        if builtin in apps.GAVE_BUILTINS:
            return _run_builtin_gave(builtin, args, manifest, out)
        if builtin == "glpe-paper":
            return _run_builtin_glpe(args, manifest, out)
        raise JointmmError(f"unknown builtin {builtin!r}; choose from {apps.BUILTIN_NAMES}")
    problem_path = _setting(args, manifest, "problem")
    if problem_path is None:
        raise JointmmError("solve needs --builtin or a problem manifest path")
    P = load_problem_manifest(problem_path)
    config = _solver_config(
        args,
        manifest,
        {"alpha_x": 0.1, "alpha_y": 0.1, "inner_steps": 5, "outer_cap": 1000, "eps": 1e-8},
    )
    start = time.perf_counter()
    result = run_pgmsad(P, config)
    wall = time.perf_counter() - start
    _write_outputs(out, result.trace, result.state, result.residuals, wall, config.record_trace)
    print(json.dumps(state_to_json(result.state, result.residuals, wall)["residuals"]))
    return EXIT_OK if result.converged else EXIT_CAP


def cmd_gave(args):
    manifest = _load_manifest(args.config)
    out = _out_dir(args, manifest)
    builtin = _setting(args, manifest, "builtin", "gave-a")
    return _run_builtin_gave(builtin, args, manifest, out)


def cmd_glpe(args):
    manifest = _load_manifest(args.config)
    out = _out_dir(args, manifest)
    return _run_builtin_glpe(args, manifest, out)


def cmd_linreg(args):
    manifest = _load_manifest(args.config)
    out = _out_dir(args, manifest)
    n = int(_setting(args, manifest, "n", 10))
    m = int(_setting(args, manifest, "m", n))
    p = int(_setting(args, manifest, "p", max(1, n // 5)))
    seed = int(_setting(args, manifest, "seed", 0))
    inst, P = apps.make_linreg(n, m, p, seed)
    config = _solver_config(
        args,
        manifest,
        {
            "alpha_x": 0.3,
            "alpha_y": 1.0,
            "inner_steps": 3,
            "outer_cap": 200000,
            "eps": 1e-8,
            "seed": seed,
        },
    )
    start = time.perf_counter()
    result = apps.run_linreg(P, config)
    wall = time.perf_counter() - start
    _write_outputs(out, result.trace, result.state, result.residuals, wall, config.record_trace)
    print(
        json.dumps(
            {
                "n": n,
                "m": m,
                "p": p,
                "iterations": result.state.t,
                "res_x": result.residuals.res_x,
                "res_y": result.residuals.res_y,
                "res_feas": result.residuals.res_feas,
            }
        )
    )
    return EXIT_OK if result.converged else EXIT_CAP


def cmd_budget(args):
    manifest = _load_manifest(args.config)
    problem_path = _setting(args, manifest, "problem")
    if problem_path is None and _setting(args, manifest, "n") is None:
        raise JointmmError("budget needs a problem manifest or regression sizes (--n)")
    if problem_path is not None:
        P = load_problem_manifest(problem_path)
    else:
        n = int(_setting(args, manifest, "n", 10))
        m = int(_setting(args, manifest, "m", n))
        p = int(_setting(args, manifest, "p", max(1, n // 5)))
        _, P = apps.make_linreg(n, m, p, int(_setting(args, manifest, "seed", 0)))
    if P.mu <= 0:
        print("relaxed mode (mu = 0): no smoothness constant, no budget", file=sys.stderr)
        return EXIT_ERROR
    C = compute_constants(P)
    alpha_x = _setting(args, manifest, "alpha_x")
    alpha_y = _setting(args, manifest, "alpha_y")
    if alpha_x is None:
        alpha_x = 0.9 / C.L_theta
    if alpha_y is None:
        alpha_y = 0.9 / C.L_h if C.L_h > 0 else 1.0
    B = compute_budget_constants(P, C, alpha_x, alpha_y)
    B = B.with_bounds(
        beta1=_setting(args, manifest, "beta1"),
        omega1=_setting(args, manifest, "omega1"),
        theta_gap=_setting(args, manifest, "theta_gap"),
    )
    eps = float(_setting(args, manifest, "eps", 1e-2))
    N, T = plan_budget(C, B, alpha_x, alpha_y, P.mu, eps)
    print(
        json.dumps(
            {
                "constants": {
                    "norm_K": C.norm_K,
                    "norm_A": C.norm_A,
                    "norm_B": C.norm_B,
                    "L_g": C.L_g,
                    "L_h": C.L_h,
                    "gamma": C.gamma,
                    "L_theta": C.L_theta,
                },
                "budget_constants": {
                    "chi0": B.chi0,
                    "chi1": B.chi1,
                    "omega_x": B.omega_x,
                    "omega_y": B.omega_y,
                    "gamma1": B.gamma1,
                    "gamma2": B.gamma2,
                    "beta1": B.beta1,
                    "omega1": B.omega1,
                    "theta_gap": B.theta_gap,
                },
                "alpha_x": alpha_x,
                "alpha_y": alpha_y,
                "eps": eps,
                "N": N,
                "T": T,
            },
            indent=2,
        )
    )
    return EXIT_OK


BENCH_HEADER = "name,n,m,q,N,T_used,wall_time_s,res_x,res_y,res_feas,app_error,status"


def _bench_one(spec):
    name = spec.get("name", spec.get("kind", "run"))
    kind = spec.get("kind")
    start = time.perf_counter()
    try:
        if kind == "gave":
            G = apps.builtin_gave(spec["builtin"])
            cfg = apps.builtin_gave_config(spec["builtin"])
            for key in ("alpha_x", "alpha_y", "alpha_z", "penalty", "eps"):
                if key in spec:
                    setattr(cfg, key, spec[key])
            if "inner_n" in spec:
                cfg.inner_steps = spec["inner_n"]
            if "outer_t" in spec:
                cfg.outer_cap = spec["outer_t"]
            r = apps.run_gave(G, cfg)
            wall = time.perf_counter() - start
            last = r.trace[-1] if r.trace else None
            return (
                name,
                G.cols,
                G.rows,
                G.cols,
                cfg.inner_steps,
                r.iterations,
                wall,
                last.res_x if last else "",
                last.res_y if last else "",
                last.res_feas if last else "",
                r.error,
                "ok" if r.converged else "cap",
            )
        if kind == "glpe":
            G = apps.builtin_glpe(spec.get("cone", "nonneg_orthant"))
            cfg = apps.GlpeConfig(
                alpha=spec.get("alpha"),
                inner_steps=spec.get("inner_n", 5),
                outer_cap=spec.get("outer_t", 500000),
                eps=spec.get("eps", 1e-13),
            )
            r = apps.run_glpe(G, cfg)
            wall = time.perf_counter() - start
            return (
                name,
                G.A.shape[1],
                G.A.shape[0],
                G.A.shape[1],
                cfg.inner_steps,
                r.iterations,
                wall,
                "",
                "",
                r.error,
                r.error,
                "ok" if r.converged else "cap",
            )
        if kind == "linreg":
            n = spec["n"]
            m = spec.get("m", n)
            p = spec.get("p", max(1, n // 5))
            inst, P = apps.make_linreg(n, m, p, spec.get("seed", 0))
            cfg = SolverConfig(
                alpha_x=spec.get("alpha_x", 0.3),
                alpha_y=spec.get("alpha_y", 1.0),
                inner_steps=spec.get("inner_n", 3),
                outer_cap=spec.get("outer_t", 200000),
                eps=spec.get("eps", 1e-8),
                seed=spec.get("seed", 0),
            )
            r = apps.run_linreg(P, cfg)
            wall = time.perf_counter() - start
            res = r.residuals
            return (
                name,
                n,
                m,
                p,
                cfg.inner_steps,
                r.state.t,
                wall,
                res.res_x,
                res.res_y,
                res.res_feas,
                "",
                "ok" if r.converged else "cap",
            )
        raise JointmmError(f"unknown bench run kind {kind!r}")
    except Exception as exc:  # noqa: BLE001 - a failed run is a row, not a crash
        wall = time.perf_counter() - start
        return (name, "", "", "", "", "", wall, "", "", "", "", f"failed: {exc}")


def cmd_bench(args):
    manifest = _load_manifest(args.config)
    runs = manifest.get("runs", [])
    out = _out_dir(args, manifest)
    workers = int(os.environ.get("JOINTMM_THREADS", "1"))
    if workers > 1 and len(runs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_one, runs))
    else:
        rows = [_bench_one(spec) for spec in runs]
    path = os.path.join(out, manifest.get("report", "bench.csv"))
    with open(path, "w", encoding="ascii") as fh:
        fh.write(BENCH_HEADER + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    print(path)
    failed = any(str(row[-1]).startswith("failed") for row in rows)
    return EXIT_CAP if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jointmm",
        description="solvers for minimax problems with joint linear constraints",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in [
        ("solve", cmd_solve),
        ("gave", cmd_gave),
        ("glpe", cmd_glpe),
        ("linreg", cmd_linreg),
        ("budget", cmd_budget),
        ("bench", cmd_bench),
    ]:
        p = sub.add_parser(name)
        p.set_defaults(func=fn)
        p.add_argument("--config", help="run manifest (JSON)")
        p.add_argument("--builtin", help="built-in instance name")
        p.add_argument("--problem", help="problem manifest path")
        p.add_argument("--out", help="output directory")
        p.add_argument("--eps", type=float)
        p.add_argument("--alpha-x", dest="alpha_x", type=float)
        p.add_argument("--alpha-y", dest="alpha_y", type=float)
        p.add_argument("--alpha-z", dest="alpha_z", type=float)
        p.add_argument("--inner-n", dest="inner_n", type=int)
        p.add_argument("--outer-t", dest="outer_t", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--penalty", type=float)
        p.add_argument("--cone", choices=["nonneg_orthant", "second_order", "l1_norm"])
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--beta1", type=float)
        p.add_argument("--omega1", type=float)
        p.add_argument("--theta-gap", dest="theta_gap", type=float)
        p.add_argument(
            "--project-each-outer",
            dest="project_each_outer",
            action="store_true",
            default=None,
        )
        trace_group = p.add_mutually_exclusive_group()
        trace_group.add_argument("--trace", dest="trace", action="store_true", default=None)
        trace_group.add_argument("--no-trace", dest="trace", action="store_false")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except JointmmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
