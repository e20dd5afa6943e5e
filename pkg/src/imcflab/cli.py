"""Command line entry points.

Subcommands:

* ``flow``         run one scenario config, write CSV + JSON, exit per contract
* ``sweep``        run every *.cfg in a directory (optionally in parallel)
* ``static-check`` metric/potential diagnostics only, no flow
* ``oracle``       print the closed-form Schwarzschild sphere reference chain

Exit codes: 0 all verdicts pass, 1 unexpected error, 2 parse/validation
error, 3 solver failure (or halt/area-law trouble), 4 monotonicity
violation, 5 deficit violation, 6 strict-mode warning escalation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .errors import ConfigError, LabError, SolverFailureError
from .metrics import (adm_mass_flux, harmonicity_residual, horizon_radius,
                      static_residual, unit_sphere_area)
from .quantities import limit_target
from .scenario import (emit_outputs, exit_code_for, load_config, run_scenario,
                       summary_dict)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_MONOTONICITY = 4
EXIT_DEFICIT = 5
EXIT_STRICT = 6


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imcflab",
        description="Inverse mean curvature flow laboratory for static "
                    "asymptotically flat manifolds")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", type=Path, default=None,
                       help="directory for CSV/JSON outputs (default: config dir)")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; flows are deterministic and ignore it")
        p.add_argument("--strict", action="store_true",
                       help="treat warnings (halts, staticity mismatches) as errors")

    p_flow = sub.add_parser("flow", help="run one scenario")
    p_flow.add_argument("--config", type=Path, required=True)
    common(p_flow)

    p_sweep = sub.add_parser("sweep", help="run a directory of scenarios")
    p_sweep.add_argument("--config", type=Path, required=True,
                         help="directory containing *.cfg scenario files")
    p_sweep.add_argument("--jobs", type=int, default=1)
    common(p_sweep)

    p_static = sub.add_parser("static-check",
                              help="staticity and mass diagnostics only")
    p_static.add_argument("--config", type=Path, required=True)
    common(p_static)

    p_oracle = sub.add_parser("oracle",
                              help="closed-form reference values for a "
                                   "Schwarzschild coordinate sphere")
    p_oracle.add_argument("--n", type=int, default=3)
    p_oracle.add_argument("--m", type=float, default=1.0)
    p_oracle.add_argument("--r", type=float, default=4.0)
    return parser


def _cmd_flow(args) -> int:
    cfg = load_config(args.config, out_dir=args.out)
    report = run_scenario(cfg)
    csv_path, json_path = emit_outputs(report, cfg.csv_path, cfg.json_path)
    code = exit_code_for(report, strict=args.strict)
    v = report.verdicts
    print(f"[{report.scenario_id}] status={report.status} "
          f"monotone={v['monotone']} worst_increase={v['worst_increase']:.3e} "
          f"deficit0={v['deficit_initial']:.3e} "
          f"area_residual={v['area_law_residual']:.3e}")
    for w in report.warnings:
        print(f"[{report.scenario_id}] warning: {w}")
    print(f"[{report.scenario_id}] wrote {csv_path} and {json_path} "
          f"(exit {code})")
    return code


def _run_one(job) -> tuple[str, int, dict]:
    """Sweep worker: run one config, write outputs, return its summary."""
    config_path, out_dir, strict = job
    cfg = load_config(Path(config_path),
                      out_dir=None if out_dir is None else Path(out_dir))
    report = run_scenario(cfg)
    emit_outputs(report, cfg.csv_path, cfg.json_path)
    return report.scenario_id, exit_code_for(report, strict=strict), summary_dict(report)


def _cmd_sweep(args) -> int:
    cfg_dir = Path(args.config)
    if not cfg_dir.is_dir():
        raise ConfigError(f"sweep expects a directory of configs, got {cfg_dir}")
    paths = sorted(cfg_dir.glob("*.cfg"))
    if not paths:
        raise ConfigError(f"no *.cfg files in {cfg_dir}")
    jobs = [(str(p), None if args.out is None else str(args.out), args.strict)
            for p in paths]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    summaries = [s for (_i, _c, s) in results]
    codes = {i: c for (i, c, _s) in results}
    aggregate = {
        "scenarios": summaries,
        "exit_codes": codes,
        "passed": sum(1 for c in codes.values() if c == 0),
        "failed": sum(1 for c in codes.values() if c != 0),
    }
    out_base = Path(args.out) if args.out is not None else cfg_dir
    out_base.mkdir(parents=True, exist_ok=True)
    agg_path = out_base / "sweep_summary.json"
    agg_path.write_text(json.dumps(aggregate, indent=2, sort_keys=True) + "\n")
    for i in sorted(codes):
        print(f"[{i}] exit {codes[i]}")
    print(f"sweep: {aggregate['passed']} passed, {aggregate['failed']} failed; "
          f"summary in {agg_path}")
    failing = [codes[i] for i in sorted(codes) if codes[i] != 0]
    return failing[0] if failing else 0


def _cmd_static_check(args) -> int:
    cfg = load_config(args.config, out_dir=args.out)
    spec = cfg.manifold
    lo = 1.1 * spec.r_min if spec.r_min > 0 else spec.r_max * 1e-4
    grid = np.geomspace(max(lo, 1e-6), spec.r_max, 200)
    s_rr, s_tt = static_residual(spec, cfg.weight, grid)
    harm = harmonicity_residual(spec, cfg.weight, grid)
    rh = horizon_radius(spec)
    out = {
        "id": cfg.scenario_id,
        "static_residual_max": float(np.max(np.abs(np.stack([s_rr, s_tt])))),
        "harmonic_residual_max": float(np.max(np.abs(harm))),
        "static_tol": cfg.static_tol,
        "mass_flux_at_r_max": float(adm_mass_flux(spec, cfg.reference_potential,
                                                  spec.r_max)),
        "horizon_radius": rh,
        "potential_kind": cfg.potential_kind,
    }
    out["is_static"] = bool(out["static_residual_max"] < cfg.static_tol
                            and out["harmonic_residual_max"] < cfg.static_tol)
    print(json.dumps(out, indent=2, sort_keys=True))
    if args.strict and cfg.potential_kind != "profile-weight" and not out["is_static"]:
        return EXIT_STRICT
    return EXIT_OK


def _cmd_oracle(args) -> int:
    n, m, r = args.n, args.m, args.r
    if not (3 <= n <= 7):
        raise ConfigError(f"oracle needs 3 <= n <= 7, got {n}")
    rh = (2.0 * m) ** (1.0 / (n - 2)) if m > 0 else None
    if rh is not None and r <= rh:
        raise ConfigError(f"oracle radius {r:g} is inside the horizon r_h = {rh:g}")
    om = unit_sphere_area(n - 1)
    v = 1.0 - 2.0 * m * r ** (2 - n)
    out = {
        "n": n, "m": m, "r": r,
        "horizon_radius": rh,
        "V": v,
        "f": math.sqrt(v),
        "H": (n - 1) * math.sqrt(v) / r,
        "area": om * r ** (n - 1),
        "int_fH": (n - 1) * om * (r ** (n - 2) - 2.0 * m),
        "Q": limit_target(n),         # constant on Schwarzschild spheres
        "limit_target": limit_target(n),
        "minkowski_deficit": 0.0,     # equality case, exact
        "hawking_mass": m if n == 3 else None,
        "flow_radius_factor": math.exp(1.0 / (n - 1)),  # growth per unit flow time
        "unit_sphere_area": om,
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "flow":
            return _cmd_flow(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "static-check":
            return _cmd_static_check(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SolverFailureError as exc:
        print(f"solver failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_SOLVER
    except LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
