"""Homogeneous Taylor components of polynomial maps via the Cauchy contour integral.

    Phi_n(h) = (1 / 2 pi i) \\oint_{|z| = rho} Phi(z h) / z^(n+1) dz

The m-point trapezoidal rule on the circle is exact for polynomials as long as
no other degree aliases onto n, i.e. m > max(degree, n).
"""

from __future__ import annotations

import math

import numpy as np

from .maps import MapExpr, degree, eval_map
from .report import Record, Report, summarize
from .sampling import ball_samples
from .spaces import CoupleSpec, as_vector, interpolated_space, norm

__all__ = [
    "default_points",
    "taylor_coefficient",
    "taylor_coefficients",
    "taylor_reassemble",
    "is_homogeneous",
    "coefficient_bound_check",
]

_EPS = np.finfo(float).eps


def default_points(deg: int, n: int = 0) -> int:
    """Smallest power of two exceeding max(degree, n)."""
    need = max(deg, n) + 1
    return 1 << (need - 1).bit_length()


def _default_rho(h: np.ndarray) -> float:
    top = float(np.max(np.abs(h))) if h.size else 0.0
    return 1.0 / top if top > 0 else 1.0


def _check_points(deg: int, n: int, m: int):
    if m <= max(deg, n):
        raise ValueError(f"m={m} contour points alias degree-{deg} terms onto n={n}; need m > {max(deg, n)}")


def taylor_coefficient(expr: MapExpr, h, n: int, rho: float | None = None, m: int | None = None) -> np.ndarray:
    """Phi_n(h) = (1 / (m rho^n)) sum_j Phi(rho w^j h) w^(-jn), w = exp(2 pi i / m)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    h = as_vector(h)
    deg = degree(expr)
    m = default_points(deg, n) if m is None else int(m)
    _check_points(deg, n, m)
    rho = _default_rho(h) if rho is None else float(rho)
    if rho <= 0:
        raise ValueError("rho must be positive")
    total = np.zeros(h.shape, dtype=complex)
    for j in range(m):
        w = np.exp(2j * math.pi * j / m)
        total += eval_map(expr, rho * w * h) * w ** (-n)
    return total / (m * rho**n)


def taylor_coefficients(expr: MapExpr, h, n_max: int, rho: float | None = None,
                        m: int | None = None, return_samples: bool = False):
    """All Phi_0..Phi_{n_max} from one set of contour samples (FFT over the nodes)."""
    h = as_vector(h)
    deg = degree(expr)
    m = default_points(deg, n_max) if m is None else int(m)
    _check_points(deg, n_max, m)
    rho = _default_rho(h) if rho is None else float(rho)
    nodes = rho * np.exp(2j * math.pi * np.arange(m) / m)
    vals = eval_map(expr, nodes[:, None] * h[None, :])
    coeffs = np.fft.fft(vals, axis=0) / m
    coeffs = coeffs[: n_max + 1] / rho ** np.arange(n_max + 1)[:, None]
    if return_samples:
        return coeffs, vals, rho
    return coeffs


def taylor_reassemble(expr: MapExpr, h, n_max: int, **kwargs) -> np.ndarray:
    if n_max < degree(expr):
        raise ValueError("n_max must be at least the degree of the map")
    return np.sum(taylor_coefficients(expr, h, n_max, **kwargs), axis=0)


def is_homogeneous(expr: MapExpr, N: int, n: int, seed: int = 0, trials: int = 3, atol: float = 1e-12) -> bool:
    """True when every Taylor component except the n-th vanishes on random probes."""
    deg = degree(expr)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        h = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        h /= np.max(np.abs(h))
        coeffs = taylor_coefficients(expr, h, max(deg, n))
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        for k, ck in enumerate(coeffs):
            if k != n and np.max(np.abs(ck)) > atol * scale:
                return False
    return True


def coefficient_bound_check(expr: MapExpr, couple_X: CoupleSpec, couple_Y: CoupleSpec, r: float,
                            n_max: int, samples: int, seed: int, thetas=(0.5,), *,
                            M0: float | None = None, M1: float | None = None,
                            tolerance: float = 1e-9, tail: bool = True, points=None) -> Report:
    """Cauchy estimates for the homogeneous components on sampled h.

    Checks, for each sampled h and n <= n_max,

    * ||Phi_n(h)||_Y0 <= M0 / r^n ||h||_X0^n
    * ||Phi_n(h)||_Y1 <= M1 / (r/c)^n ||h||_X1^n
    * ||Phi_n(h)||_Ytheta <= M0^(1-theta) M1^theta (||h||_Xtheta / (c^-theta r))^n

    and, with ``tail``, the geometric bound on the series remainder after each n0.
    Left-hand sides within a roundoff floor of the contour sum are treated as zero.
    ``points`` replaces the sampled h by explicit vectors (checked at every theta).
    """
    from .maps import certified_bound

    c = couple_X.c
    if M0 is None:
        M0 = certified_bound(expr, couple_Y.X0, r, source=couple_X.X0)
    if M1 is None:
        M1 = certified_bound(expr, couple_Y.X1, r / c, source=couple_X.X1)
    records: list[Record] = []
    deg = degree(expr)
    for theta in thetas:
        Xt = interpolated_space(couple_X, theta)
        Yt = interpolated_space(couple_Y, theta)
        Mt = M0 ** (1 - theta) * M1**theta if M0 > 0 and M1 > 0 else 0.0
        radius = c**-theta * r
        if points is None:
            pts, _ = ball_samples(Xt, radius, samples, seed, extremes=False)
        else:
            pts = np.atleast_2d(as_vector(points, couple_X.N))
        for i, h in enumerate(pts):
            h0, h1, ht = norm(couple_X.X0, h), norm(couple_X.X1, h), norm(Xt, h)
            rho = 0.5 * r / h0 if h0 > 0 else 1.0
            coeffs, vals, rho = taylor_coefficients(expr, h, max(n_max, deg), rho=rho, return_samples=True)
            # components above the degree of a polynomial map vanish identically
            coeffs[deg + 1:] = 0.0
            floors = {sp: 64 * _EPS * float(np.max(np.atleast_1d(norm(sp, vals))))
                      for sp in (couple_Y.X0, couple_Y.X1, Yt)}
            for n in range(n_max + 1):
                cn = coeffs[n]
                scale = rho**-n
                checks = (
                    ("coef_Y0", couple_Y.X0, M0 / r**n * h0**n),
                    ("coef_Y1", couple_Y.X1, M1 / (r / c) ** n * h1**n),
                    ("coef_Ytheta", Yt, Mt * (ht / radius) ** n),
                )
                for label, sp, bnd in checks:
                    lhs = norm(sp, cn)
                    if lhs <= floors[sp] * scale and lhs > bnd:
                        lhs = 0.0
                    records.append(Record.compare(f"{label}[n={n}]", lhs, bnd, tolerance,
                                                  theta=theta, index=i, norm_x=ht))
            if tail and ht > 0:
                zeta = ht / radius
                full = eval_map(expr, h)
                partial = np.zeros_like(full)
                for n0 in range(deg + 1):
                    partial = partial + coeffs[n0]
                    deficit = norm(Yt, full - partial)
                    bnd = Mt * zeta ** (n0 + 1) / (1 - zeta)
                    floor = 64 * _EPS * (norm(Yt, full) + float(np.sum(np.atleast_1d(norm(Yt, coeffs[: deg + 1])))))
                    if deficit <= floor and deficit > bnd:
                        deficit = 0.0
                    records.append(Record.compare(f"tail[n0={n0}]", deficit, bnd, tolerance,
                                                  theta=theta, index=i, norm_x=ht))
    summary = summarize(records)
    summary.update({"M0": M0, "M1": M1, "seed": seed})
    return Report("taylor_bounds", records, summary, {"n_max": n_max, "thetas": list(thetas), "r": r})
