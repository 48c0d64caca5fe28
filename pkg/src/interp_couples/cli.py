"""Command line entry point: ``interp-couples <command> --config cfg.json``.

Exit codes: 0 all checks passed, 1 at least one bound violation, 2 configuration
or usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .complex_interp import theta_norm
from .kfunc import k_profile
from .maps import MapSpec, MapSyntaxError, parse_number
from .real_interp import KCache, real_norm, real_norm_inf
from .report import Record, Report, emit, render, summarize
from .sampling import ball_samples
from .spaces import SpaceSpec, family_weights, interpolated_space, make_couple, norm
from .taylor import coefficient_bound_check
from .verify import ExperimentConfig, corollary_check, proof_walkthrough, theorem1_check

COMMANDS = ("norms", "kprofile", "verify-theorem", "verify-corollary", "taylor", "proof-walkthrough")
DEFAULT_FORMAT = {
    "norms": "csv",
    "kprofile": "csv",
    "taylor": "csv",
    "verify-theorem": "json",
    "verify-corollary": "json",
    "proof-walkthrough": "json",
}
_KNOWN_FIELDS = {"couple_X", "couple_Y", "map", "r", "thetas", "q", "n_samples", "seed", "tolerance",
                 "vectors", "t_grid", "n_max", "description"}


class ConfigError(ValueError):
    pass


def _space(spec, p, N_default, where):
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: expected an object with 'weights' or 'family'")
    try:
        if "weights" in spec:
            return SpaceSpec(p, spec["weights"])
        fam = spec.get("family")
        if fam is None:
            raise ConfigError(f"{where}: needs 'weights' or 'family'")
        N = int(spec.get("N", N_default or 0))
        return SpaceSpec(p, family_weights(fam, N, p, s=float(spec.get("s", 0.0)), a=float(spec.get("a", 0.0)),
                                           scale=float(spec.get("scale", 1.0))))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _couple(spec, where):
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: expected an object")
    for key in ("p", "X0", "X1"):
        if key not in spec:
            raise ConfigError(f"{where}.{key} is required")
    p = spec["p"]
    N = spec.get("N")
    X0 = _space(spec["X0"], p, N, f"{where}.X0")
    X1 = _space(spec["X1"], p, N, f"{where}.X1")
    try:
        return make_couple(X0, X1, spec.get("c"))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _vector(v, N, where):
    try:
        vals = [parse_number(e) if isinstance(e, str) else complex(e) for e in v]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    if len(vals) != N:
        raise ConfigError(f"{where}: vector has length {len(vals)}, couples have N={N}")
    return np.array(vals, dtype=complex)


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _KNOWN_FIELDS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    for key in ("couple_X", "map", "r", "thetas"):
        if key not in data:
            raise ConfigError(f"{key} is required")
    cx = _couple(data["couple_X"], "couple_X")
    cy = _couple(data["couple_Y"], "couple_Y") if "couple_Y" in data else cx
    try:
        mapspec = MapSpec.from_text(str(data["map"]))
    except MapSyntaxError as exc:
        raise ConfigError(f"map: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"map: {exc}") from exc
    try:
        r = float(data["r"])
    except (TypeError, ValueError):
        raise ConfigError("r must be a number") from None
    if not (r > 0 and math.isfinite(r)):
        raise ConfigError("r must be positive")
    thetas = data["thetas"]
    if not isinstance(thetas, list) or not thetas:
        raise ConfigError("thetas must be a nonempty list")
    vectors = None
    if "vectors" in data:
        vectors = [_vector(v, cx.N, f"vectors[{i}]") for i, v in enumerate(data["vectors"])]
    try:
        return ExperimentConfig(
            couple_X=cx, couple_Y=cy, map=mapspec, r=r,
            thetas=[float(t) for t in thetas],
            n_samples=int(data.get("n_samples", 1000)),
            seed=int(data.get("seed", 42)),
            tolerance=float(data.get("tolerance", 1e-9)),
            q=float(data.get("q", 2.0)),
            vectors=vectors,
            t_grid=[float(t) for t in data["t_grid"]] if "t_grid" in data else None,
            n_max=int(data["n_max"]) if "n_max" in data else None,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON experiment config."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from exc
    return config_from_dict(data)


def _default_vectors(cfg: ExperimentConfig, count: int):
    if cfg.vectors:
        return cfg.vectors
    pts, _ = ball_samples(cfg.couple_X.X0, cfg.r, count, cfg.seed, extremes=False)
    return list(pts)


def _cmd_norms(cfg, args):
    X = cfg.couple_X
    rows = []
    for i, x in enumerate(_default_vectors(cfg, min(cfg.n_samples, 16))):
        cache = KCache(X, x)
        for th in cfg.thetas:
            rows.append({
                "index": i,
                "theta": th,
                "norm_X0": norm(X.X0, x),
                "norm_X1": norm(X.X1, x),
                "real_theta_q": real_norm(X, x, th, cfg.q, cache=cache),
                "real_theta_inf": real_norm_inf(X, x, th, cache=cache),
                "complex_theta": theta_norm(X, x, th),
            })
    return Report("norms", rows, {}, {"q": cfg.q}), 0


def _cmd_kprofile(cfg, args):
    X = cfg.couple_X
    x = _default_vectors(cfg, 1)[0]
    grid = cfg.t_grid if cfg.t_grid is not None else list(np.logspace(-3, 3, 61))
    n0, n1 = norm(X.X0, x), norm(X.X1, x)
    rows = []
    for t, K in k_profile(X, x, grid):
        m = min(n0, t * n1)
        rows.append({"t": t, "K": K, "K_over_min_bound": K / m if m > 0 else 0.0})
    return Report("kprofile", rows, {}, {}), 0


def _exit_for(report):
    return 0 if report.summary.get("failed", 0) == 0 else 1


def _cmd_theorem(cfg, args):
    rep = theorem1_check(cfg, threads=args.threads)
    return rep, _exit_for(rep)


def _cmd_corollary(cfg, args):
    rep = corollary_check(cfg, threads=args.threads)
    return rep, _exit_for(rep)


def _cmd_taylor(cfg, args):
    n_max = cfg.n_max if cfg.n_max is not None else cfg.map.degree + 1
    rep = coefficient_bound_check(cfg.map.expr, cfg.couple_X, cfg.couple_Y, cfg.r, n_max,
                                  min(cfg.n_samples, 1000), cfg.seed, cfg.thetas,
                                  M0=cfg.force_M0, tolerance=cfg.tolerance)
    return rep, _exit_for(rep)


def _cmd_walkthrough(cfg, args):
    records: list[Record] = []
    meta = {"points": []}
    for k, th in enumerate(cfg.thetas):
        if cfg.vectors:
            xs = cfg.vectors
        else:
            Xt = interpolated_space(cfg.couple_X, th)
            pts, _ = ball_samples(Xt, 0.9 * cfg.couple_X.c**-th * cfg.r, 1, cfg.seed + k, extremes=False)
            xs = [pts[0]]
        for x in xs:
            rep = proof_walkthrough(cfg, x, th)
            records.extend(rep.records)
            meta["points"].append(rep.meta)
            meta["M0"], meta["M1"] = rep.summary["M0"], rep.summary["M1"]
    rep = Report("proof_walkthrough", records, summarize(records), meta)
    return rep, _exit_for(rep)


_HANDLERS = {
    "norms": _cmd_norms,
    "kprofile": _cmd_kprofile,
    "verify-theorem": _cmd_theorem,
    "verify-corollary": _cmd_corollary,
    "taylor": _cmd_taylor,
    "proof-walkthrough": _cmd_walkthrough,
}


def _theta_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid theta list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="interp-couples",
                                 description="Interpolation norms and nonlinear interpolation checks "
                                             "on weighted sequence-space couples.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON experiment config")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--theta", type=_theta_list, help="comma separated theta values")
    ap.add_argument("--out", help="report path (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--threads", type=int, default=1, help="worker threads for sample loops")
    ap.add_argument("--force-M0", dest="force_M0", type=float, help=argparse.SUPPRESS)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.samples is not None:
            cfg.n_samples = args.samples
        if args.theta is not None:
            cfg.thetas = args.theta
        if args.force_M0 is not None:
            cfg.force_M0 = args.force_M0
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        cfg.__post_init__()
        report, code = _HANDLERS[args.command](cfg, args)
    except (ConfigError, ValueError) as exc:
        print(f"interp-couples: error: {exc}", file=sys.stderr)
        return 2
    fmt = args.format or DEFAULT_FORMAT[args.command]
    if args.out:
        try:
            emit(report, fmt, args.out)
        except OSError as exc:
            print(f"interp-couples: error: {exc}", file=sys.stderr)
            return 2
        stream = sys.stdout
    else:
        sys.stdout.write(render(report, fmt))
        stream = sys.stderr
    s = report.summary
    if s:
        print(f"{args.command}: {s['passed']}/{s['count']} checks passed, worst margin {s['worst_margin']:.6g}",
              file=stream)
    else:
        print(f"{args.command}: {len(report.records)} rows", file=stream)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
