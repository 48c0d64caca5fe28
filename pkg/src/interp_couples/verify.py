"""Numerical harness for the interpolation inequalities on diagonal couples.

Every check samples points, evaluates both sides of an inequality and records
the relative margin; violations are collected in the report rather than raised.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .complex_interp import certificate, sample_strip, strip_grid, three_line_check
from .maps import Conv, Const, Diag, MapExpr, MapSpec, Scale, Sum, Var, certified_bound, dimension, eval_map
from .report import Record, Report, summarize
from .sampling import ball_samples, gaussian_directions, scale_to, SHRINK
from .spaces import CoupleSpec, as_vector, embedding_norm, interpolated_space, norm
from .taylor import is_homogeneous

__all__ = [
    "ExperimentConfig",
    "interpolated_bound",
    "certified_constants",
    "linear_check",
    "theorem1_check",
    "corollary_check",
    "sharpness_probe",
    "proof_walkthrough",
    "ball_inclusion_check",
]

_CHUNK = 2048


@dataclass
class ExperimentConfig:
    couple_X: CoupleSpec
    couple_Y: CoupleSpec
    map: MapSpec
    r: float
    thetas: list[float]
    n_samples: int = 1000
    seed: int = 42
    tolerance: float = 1e-9
    q: float = 2.0
    force_M0: float | None = None
    vectors: list | None = None
    t_grid: list | None = None
    n_max: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError("r must be positive")
        if not self.thetas:
            raise ValueError("thetas must be nonempty")
        for th in self.thetas:
            if not 0 < th < 1:
                raise ValueError(f"thetas must lie in the open interval (0, 1); got {th}")
        if self.n_samples < 1:
            raise ValueError("n_samples must be a positive integer")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.couple_X.N != self.couple_Y.N:
            raise ValueError("couple_X and couple_Y must share N")
        d = dimension(self.map.expr)
        if d is not None and d != self.couple_X.N:
            raise ValueError(f"map vectors have length {d} but the couples have N={self.couple_X.N}")
        if self.map.degree < 0:
            raise ValueError("map degree must be nonnegative")

    @property
    def N(self) -> int:
        return self.couple_X.N

    @property
    def c(self) -> float:
        return self.couple_X.c


def interpolated_bound(M0: float, M1: float, theta: float) -> float:
    """M0^(1-theta) M1^theta, continuously extended by 0 when either constant vanishes."""
    if M0 == 0 or M1 == 0:
        return 0.0
    return M0 ** (1 - theta) * M1**theta


def certified_constants(config: ExperimentConfig) -> tuple[float, float]:
    """(M0, M1): certified sups over B(r, X0) into Y0 and over B(r/c, X1) into Y1."""
    X, Y = config.couple_X, config.couple_Y
    M0 = certified_bound(config.map.expr, Y.X0, config.r, source=X.X0)
    M1 = certified_bound(config.map.expr, Y.X1, config.r / X.c, source=X.X1)
    if config.force_M0 is not None:
        M0 = float(config.force_M0)
    return M0, M1


def _diagonal_of(expr: MapExpr, N: int) -> np.ndarray:
    if isinstance(expr, Var):
        return np.ones(N, dtype=complex)
    if isinstance(expr, Diag):
        return np.asarray(expr.values, dtype=complex) * _diagonal_of(expr.arg, N)
    if isinstance(expr, Scale):
        return expr.factor * _diagonal_of(expr.arg, N)
    if isinstance(expr, Sum):
        return _diagonal_of(expr.left, N) + _diagonal_of(expr.right, N)
    if isinstance(expr, (Const, Conv)):
        raise ValueError("linear_check needs a diagonal linear map (built from x, diag, scale, sum)")
    raise TypeError(f"not a map expression: {expr!r}")


def _theta_points(config: ExperimentConfig, theta: float, radius: float, lo: int, hi: int):
    Xt = interpolated_space(config.couple_X, theta)
    N = config.N
    dirs, us = gaussian_directions(config.seed, N, range(lo, hi))
    radii = us ** (1.0 / (2 * N)) * radius * SHRINK
    return Xt, scale_to(Xt, dirs, radii)


def _sampled_check(config: ExperimentConfig, label: str, value_bound, radius_of, threads: int = 1,
                   extremes: bool = True) -> list[Record]:
    """Shared sample loop.

    ``value_bound(theta, Xt, Yt, pts)`` returns arrays (value, bound, norm_x).
    Tasks are (theta, chunk) pairs; records are concatenated in task order so
    the result does not depend on ``threads``.
    """
    n = config.n_samples
    tasks = [(th, lo, min(lo + _CHUNK, n)) for th in config.thetas for lo in range(0, n, _CHUNK)]

    def run(task):
        th, lo, hi = task
        radius = radius_of(th)
        Xt, pts = _theta_points(config, th, radius, lo, hi)
        kinds = ["random"] * (hi - lo)
        idx = list(range(lo, hi))
        if extremes and hi == n:
            extra, extra_kinds = ball_samples(Xt, radius, 0, config.seed, corners=8)
            pts = np.vstack([pts, extra])
            kinds += extra_kinds
            idx += list(range(n, n + len(extra_kinds)))
        Yt = interpolated_space(config.couple_Y, th)
        value, bound, nx = value_bound(th, Xt, Yt, pts)
        return [Record.compare(kinds[j], value[j], bound[j], config.tolerance, theta=th, index=idx[j],
                               norm_x=nx[j]) for j in range(len(idx))]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, tasks))
    else:
        parts = [run(t) for t in tasks]
    return [rec for part in parts for rec in part]


def _meta(config: ExperimentConfig) -> dict:
    return {
        "map": config.map.source,
        "r": config.r,
        "c": config.c,
        "N": config.N,
        "p": config.couple_X.p,
        "thetas": list(config.thetas),
        "n_samples": config.n_samples,
        "tolerance": config.tolerance,
    }


def theorem1_check(config: ExperimentConfig, threads: int = 1) -> Report:
    """Samples x in B(c^-theta r, X_theta) and checks ||Phi(x)||_Ytheta <= M0^(1-theta) M1^theta."""
    M0, M1 = certified_constants(config)
    expr = config.map.expr

    def value_bound(th, Xt, Yt, pts):
        value = np.atleast_1d(norm(Yt, eval_map(expr, pts)))
        bound = np.full(value.shape, interpolated_bound(M0, M1, th))
        return value, bound, np.atleast_1d(norm(Xt, pts))

    records = _sampled_check(config, "theorem1", value_bound, lambda th: config.c**-th * config.r, threads)
    summary = summarize(records)
    summary.update({"M0": M0, "M1": M1, "seed": config.seed, "forced_M0": config.force_M0 is not None})
    return Report("theorem1", records, summary, _meta(config))


def linear_check(config: ExperimentConfig, threads: int = 1) -> Report:
    """||Tx||_Ytheta <= M0^(1-theta) M1^theta ||x||_Xtheta with exact diagonal operator norms."""
    X, Y = config.couple_X, config.couple_Y
    d = np.abs(_diagonal_of(config.map.expr, config.N))
    M0 = float(np.max(d * np.exp(Y.X0.log_amplitudes - X.X0.log_amplitudes)))
    M1 = float(np.max(d * np.exp(Y.X1.log_amplitudes - X.X1.log_amplitudes)))
    if config.force_M0 is not None:
        M0 = float(config.force_M0)
    expr = config.map.expr

    def value_bound(th, Xt, Yt, pts):
        nx = np.atleast_1d(norm(Xt, pts))
        value = np.atleast_1d(norm(Yt, eval_map(expr, pts)))
        return value, interpolated_bound(M0, M1, th) * nx, nx

    records = _sampled_check(config, "linear", value_bound, lambda th: 1.0, threads)
    summary = summarize(records)
    summary.update({"M0": M0, "M1": M1, "seed": config.seed})
    return Report("linear", records, summary, _meta(config))


def corollary_check(config: ExperimentConfig, n: int | None = None, threads: int = 1) -> Report:
    """||Phi(x)||_Ytheta <= M0^(1-theta) M1^theta ||x||_Xtheta^n for maps homogeneous of degree n.

    M0 and M1 are certified constants of ||Phi(x)|| <= M ||x||^n, i.e. the
    certified sup over the unit ball.
    """
    expr = config.map.expr
    n = config.map.degree if n is None else int(n)
    if not is_homogeneous(expr, config.N, n, seed=config.seed):
        raise ValueError(f"map {config.map.source!r} is not homogeneous of degree {n}")
    X, Y = config.couple_X, config.couple_Y
    M0 = certified_bound(expr, Y.X0, 1.0, source=X.X0)
    M1 = certified_bound(expr, Y.X1, 1.0, source=X.X1)
    if config.force_M0 is not None:
        M0 = float(config.force_M0)

    def value_bound(th, Xt, Yt, pts):
        nx = np.atleast_1d(norm(Xt, pts))
        value = np.atleast_1d(norm(Yt, eval_map(expr, pts)))
        return value, interpolated_bound(M0, M1, th) * nx**n, nx

    records = _sampled_check(config, "corollary", value_bound, lambda th: config.c**-th * config.r, threads)
    summary = summarize(records)
    basis = [abs(r.margin) for r in records if r.label == "basis" and math.isfinite(r.margin)]
    summary.update({"M0": M0, "M1": M1, "n": n, "seed": config.seed,
                    "tightest_basis_margin": min(basis) if basis else None})
    return Report("corollary", records, summary, _meta(config))


def sharpness_probe(config: ExperimentConfig, theta: float, shells=(0.9995, 0.9999, 1 - 1e-9)) -> float:
    """Largest ratio ||Phi(x)||_Ytheta / (M0^(1-theta) M1^theta) over points just inside the X_theta sphere."""
    M0, M1 = certified_constants(config)
    Xt = interpolated_space(config.couple_X, theta)
    Yt = interpolated_space(config.couple_Y, theta)
    radius = config.c**-theta * config.r
    dirs, _ = gaussian_directions(config.seed, config.N, range(min(config.n_samples, 256)))
    pts = np.vstack([scale_to(Xt, dirs, radius * s) for s in shells])
    bound = interpolated_bound(M0, M1, theta)
    values = np.atleast_1d(norm(Yt, eval_map(config.map.expr, pts)))
    return float(np.max(values) / bound)


def proof_walkthrough(config: ExperimentConfig, x, theta: float, T_max: float = 10.0,
                      grid_n: int = 201, re_n: int = 21) -> Report:
    """Replays the proof of the ball bound for one point x on a strip grid.

    f is the extremal certificate through x (so ||f||_H = ||x||_Xtheta),
    g(z) = c^(theta - z) f(z) and F(z) = M0^(z-1) M1^(-z) Phi(g(z)).
    """
    X, Y = config.couple_X, config.couple_Y
    x = as_vector(x, config.N)
    c, r, tol = X.c, config.r, config.tolerance
    Xt = interpolated_space(X, theta)
    Yt = interpolated_space(Y, theta)
    xt = norm(Xt, x)
    if not xt < c**-theta * r:
        raise ValueError(f"x is not in the ball B(c^-theta r, X_theta): ||x||_Xtheta = {xt!r} "
                         f">= c^-theta r = {c**-theta * r!r}")
    M0, M1 = certified_constants(config)
    expr = config.map.expr
    f = certificate(X, x, theta)

    def g(z):
        return c ** (theta - z) * f(z)

    res, ts = strip_grid(T_max, grid_n, re_n)
    rec: list[Record] = []

    def add(label, value, bound, t=None, index=None):
        rec.append(Record.compare(label, value, bound, tol, theta=theta if t is None else t, index=index))

    for i, t in enumerate(ts):
        f0, f1 = f(complex(0, t)), f(complex(1, t))
        g0, g1 = g(complex(0, t)), g(complex(1, t))
        add("f_line0_X0", norm(X.X0, f0), c**-theta * r, index=i)
        add("f_line1_X1", norm(X.X1, f1), c**-theta * r, index=i)
        add("first_identity", norm(X.X0, g0), c**theta * norm(X.X0, f0), index=i)
        add("first", norm(X.X0, g0), r, index=i)
        add("second_identity", norm(X.X0, g1), c**theta * norm(X.X1, f1), index=i)
        add("second", norm(X.X0, g1), r, index=i)
        add("third", norm(X.X1, g1), r / c, index=i)

    samples = sample_strip(g, T_max, grid_n, re_n)
    for j, (z, v) in enumerate(samples.interior + [(complex(0, t), v) for t, v in samples.boundary0]
                               + [(complex(1, t), v) for t, v in samples.boundary1]):
        add("r_ball", norm(X.X0, v), r, index=j)
    three = three_line_check(samples, X.X0, tolerance=tol)
    for r3 in three.records:
        r3.label = "three_line_g"
        r3.theta = theta
    rec.extend(three.records)

    phi_x = eval_map(expr, x)
    bound = interpolated_bound(M0, M1, theta)
    meta = {"theta": theta, "x_norm_theta": xt, "T_max": T_max, "grid": [re_n, grid_n]}
    if M0 > 0 and M1 > 0:
        def F(z):
            return M0 ** (z - 1) * M1 ** (-z) * eval_map(expr, g(z))

        Fs = sample_strip(F, T_max, grid_n, re_n)
        for i, (t, v) in enumerate(Fs.boundary0):
            add("F_line0_Y0", norm(Y.X0, v), 1.0, index=i)
        for i, (t, v) in enumerate(Fs.boundary1):
            add("F_line1_Y1", norm(Y.X1, v), 1.0, index=i)
        H = max(max(norm(Y.X0, v) for _, v in Fs.boundary0), max(norm(Y.X1, v) for _, v in Fs.boundary1))
        F_theta = F(complex(theta, 0))
        # F(theta) = M0^(theta-1) M1^-theta Phi(x), checked in both directions
        lhs = norm(Yt, phi_x)
        rhs = bound * norm(Yt, F_theta)
        add("F_theta_identity", lhs, rhs)
        add("F_theta_identity_rev", rhs, lhs)
        add("conclusion", lhs, bound * H)
        add("F_h_norm", H, 1.0)
        meta["F_h_norm"] = float(H)
    else:
        meta["F_h_norm"] = None
        meta["note"] = "M0 or M1 vanishes: F is undefined and the bound reduces to Phi(x) = 0"
    add("estimate", norm(Yt, phi_x), bound)
    summary = summarize(rec)
    summary.update({"M0": M0, "M1": M1})
    return Report("proof_walkthrough", rec, summary, meta)


def ball_inclusion_check(couple: CoupleSpec, r: float, theta: float, samples: int, seed: int,
                         tolerance: float = 1e-12) -> Report:
    """B(r/c, X1) in B(c^-theta r, X_theta) in B(r, X0) on points sampled around each ball."""
    c = couple.c
    Xt = interpolated_space(couple, theta)
    groups = []
    for space, radius in ((couple.X1, r / c), (Xt, c**-theta * r), (couple.X0, r)):
        # sample slightly beyond the radius too, so premises are sometimes false
        pts, _ = ball_samples(space, 1.05 * radius, samples, seed, corners=4)
        groups.append(pts)
    pts = np.vstack(groups)
    n0 = np.atleast_1d(norm(couple.X0, pts))
    n1 = np.atleast_1d(norm(couple.X1, pts))
    nt = np.atleast_1d(norm(Xt, pts))
    records = []
    for i in range(len(pts)):
        if n1[i] < r / c:
            records.append(Record.compare("X1_ball_in_Xtheta_ball", nt[i], c**-theta * r, tolerance,
                                          theta=theta, index=i))
        if nt[i] < c**-theta * r:
            records.append(Record.compare("Xtheta_ball_in_X0_ball", n0[i], r, tolerance, theta=theta, index=i))
    summary = summarize(records)
    summary.update({"c": c, "seed": seed})
    return Report("ball_inclusion", records, summary, {"r": r, "theta": theta})
