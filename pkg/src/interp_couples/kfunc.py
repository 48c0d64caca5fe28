"""Peetre K-functional K(t, x) = inf { ||x0||_X0 + t ||x1||_X1 : x = x0 + x1 }.

For diagonal couples an optimal split has the form ``x1 = s * x`` with real
multipliers ``s_k`` in [0, 1]; the solvers below search only that family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit, log_expit

from .spaces import CoupleSpec, as_vector, norm

__all__ = [
    "KDecomposition",
    "k_functional",
    "k_value",
    "k_oracle_grid",
    "grid_error_bound",
    "k_profile",
]

_BISECT_XTOL = 1e-12
_BISECT_MAXITER = 200
_MAX_LOG_BRACKET = 1400.0


@dataclass(frozen=True)
class KDecomposition:
    x0: np.ndarray
    x1: np.ndarray
    value: float
    t: float

    def recompute(self, couple: CoupleSpec) -> float:
        return norm(couple.X0, self.x0) + self.t * norm(couple.X1, self.x1)


def _amplitudes(couple: CoupleSpec, x: np.ndarray):
    mod = np.abs(x)
    return couple.X0.amplitudes * mod, couple.X1.amplitudes * mod


def _split(x: np.ndarray, s: np.ndarray, t: float, couple: CoupleSpec) -> KDecomposition:
    x1 = s * x
    x0 = (1.0 - s) * x
    value = norm(couple.X0, x0) + t * norm(couple.X1, x1)
    return KDecomposition(x0, x1, float(value), float(t))


def _solve_l1(couple, x, t):
    # decoupled: each coordinate goes wholly to the cheaper side
    s = np.where(t * couple.X1.amplitudes < couple.X0.amplitudes, 1.0, 0.0)
    return _split(x, s, t, couple)


def _solve_l2(couple, x, t):
    # everything in logs so steep weights neither overflow nor underflow
    live = np.abs(x) > 0
    lx = np.log(np.abs(x[live]))
    la0 = couple.X0.log_amplitudes[live] + lx
    la1 = couple.X1.log_amplitudes[live] + lx
    # log of w1_k / w0_k
    log_ratio = 2.0 * (la1 - la0)
    log_t = math.log(t)

    def log_l2(v):
        top = float(v.max())
        return top + 0.5 * math.log(float(np.sum(np.exp(2.0 * (v - top)))))

    log_n0, log_n1 = log_l2(la0), log_l2(la1)
    # s = 0 optimal iff t >= ||a0 / sqrt(ratio)|| / ||a0||  (subgradient test at x1 = 0)
    if log_l2(la0 - 0.5 * log_ratio) - log_t - log_n0 <= 0.0:
        return _split(x, np.zeros(x.shape), t, couple)
    # s = 1 optimal iff ||a1|| / ||a1 sqrt(ratio)|| >= t
    if log_n1 - log_t - log_l2(la1 + 0.5 * log_ratio) >= 0.0:
        return _split(x, np.ones(x.shape), t, couple)

    def z_of(u):
        # s_k = lam / (lam + t * ratio_k) is a logistic in log space
        return u - log_t - log_ratio

    def phi(u):
        z = z_of(u)
        return log_l2(la1 + log_expit(z)) - log_l2(la0 + log_expit(-z)) - u

    centre = log_n1 - log_n0
    half = 2.0
    lo, hi = centre - half, centre + half
    f_lo, f_hi = phi(lo), phi(hi)
    while not (f_lo > 0 > f_hi):
        half *= 2.0
        if half > _MAX_LOG_BRACKET:
            return _projected_gradient(couple, x, t)
        if f_lo <= 0:
            lo = centre - half
            f_lo = phi(lo)
        if f_hi >= 0:
            hi = centre + half
            f_hi = phi(hi)
    u = brentq(phi, lo, hi, xtol=_BISECT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=_BISECT_MAXITER)
    s = np.zeros(x.shape)
    s[live] = expit(z_of(u))
    return _split(x, s, t, couple)


def _projected_gradient(couple, x, t, tol=1e-10, maxiter=20000):
    """Fallback for degenerate brackets: projected gradient on s over the unit box."""
    a0, a1 = _amplitudes(couple, x)
    s = np.full(x.shape, 0.5)

    def objective(s):
        return np.linalg.norm(a0 * (1 - s)) + t * np.linalg.norm(a1 * s)

    def gradient(s):
        A = np.linalg.norm(a0 * (1 - s))
        B = np.linalg.norm(a1 * s)
        g = np.zeros_like(s)
        if A > 0:
            g -= a0**2 * (1 - s) / A
        if B > 0:
            g += t * a1**2 * s / B
        return g

    # curvature scale of the quadratic parts, used as the initial inverse step
    L = max(float(np.max(a0**2)) / max(np.linalg.norm(a0 * 0.5), 1e-300),
            t * float(np.max(a1**2)) / max(np.linalg.norm(a1 * 0.5), 1e-300))
    f = objective(s)
    for _ in range(maxiter):
        g = gradient(s)
        step = 1.0 / L
        while True:
            s_new = np.clip(s - step * g, 0.0, 1.0)
            f_new = objective(s_new)
            if f_new <= f - 1e-4 * np.dot(g, s - s_new) or step < 1e-30:
                break
            step *= 0.5
        pg = np.linalg.norm(s_new - s) * L
        s, f = s_new, f_new
        if pg < tol:
            break
    best = min((_split(x, s, t, couple), _split(x, np.zeros(x.shape), t, couple),
                _split(x, np.ones(x.shape), t, couple)), key=lambda d: d.value)
    return best


def _solve_linf(couple, x, t):
    a = np.abs(x)
    live = a > 0
    u0 = couple.X0.amplitudes[live]
    u1 = couple.X1.amplitudes[live]
    al = a[live]

    # split value v = alpha + t beta; coordinate k is coverable iff
    # a_k <= alpha / u0_k + beta / u1_k with alpha = v - t beta
    coef = 1.0 / u1 - t / u0
    pos = coef > 0
    neg = coef < 0
    zero = ~(pos | neg)
    inv0_pos, inv0_neg, inv0_zero = 1.0 / u0[pos], 1.0 / u0[neg], 1.0 / u0[zero]
    a_pos, a_neg, a_zero = al[pos], al[neg], al[zero]
    c_pos, c_neg = coef[pos], coef[neg]

    def beta_interval(v):
        lo, hi = 0.0, v / t
        if a_zero.size and np.any(a_zero - v * inv0_zero > 0):
            return None
        if a_pos.size:
            lo = max(lo, float(np.max((a_pos - v * inv0_pos) / c_pos)))
        if a_neg.size:
            hi = min(hi, float(np.min((a_neg - v * inv0_neg) / c_neg)))
        return (lo, hi) if lo <= hi else None

    # each coordinate alone forces K >= min(u0_k, t u1_k) a_k; sending every
    # coordinate to its cheaper side costs at most twice the largest of these
    lo_v = float(np.max(np.minimum(u0, t * u1) * al))
    cheap = np.where(t * couple.X1.amplitudes < couple.X0.amplitudes, 1.0, 0.0)
    hi_v = min(norm(couple.X0, x), t * norm(couple.X1, x), _split(x, cheap, t, couple).value)
    lo_v = min(lo_v, hi_v)
    for _ in range(_BISECT_MAXITER):
        mid = 0.5 * (lo_v + hi_v)
        if beta_interval(mid) is None:
            lo_v = mid
        else:
            hi_v = mid
        if hi_v - lo_v <= 1e-15 * hi_v:
            break
    interval = beta_interval(hi_v)
    if interval is None:
        # only the unverified initial upper end can get here (roundoff at a
        # degenerate interval); it is the value of one of these splits
        return min((_split(x, np.zeros(x.shape), t, couple), _split(x, np.ones(x.shape), t, couple),
                    _split(x, cheap, t, couple)), key=lambda d: d.value)
    beta = interval[0]
    alpha = max(hi_v - t * beta, 0.0)
    s = np.zeros(x.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        s_lo = np.clip(1.0 - alpha / (u0 * al), 0.0, 1.0)
        s_hi = np.clip(beta / (u1 * al), 0.0, 1.0)
    s[live] = np.minimum(s_lo, s_hi)
    return _split(x, s, t, couple)


def k_functional(couple: CoupleSpec, x, t: float) -> KDecomposition:
    """Optimal decomposition x = x0 + x1 for the K-functional at parameter t.

    Parameters
    ----------
    couple : CoupleSpec
    x : array_like
        Complex vector of length ``couple.N``.
    t : float
        Nonnegative parameter.

    Returns
    -------
    KDecomposition
        ``value`` is ``||x0||_X0 + t ||x1||_X1`` recomputed from the split.
    """
    t = float(t)
    if not t >= 0:
        raise ValueError("t must be nonnegative")
    x = as_vector(x, couple.N)
    if x.ndim != 1:
        raise ValueError("k_functional expects a single vector")
    if t == 0.0:
        return KDecomposition(np.zeros_like(x), x.copy(), 0.0, 0.0)
    if not np.any(x):
        return KDecomposition(np.zeros_like(x), np.zeros_like(x), 0.0, t)
    if couple.p == 1.0:
        return _solve_l1(couple, x, t)
    if couple.p == 2.0:
        return _solve_l2(couple, x, t)
    return _solve_linf(couple, x, t)


def k_value(couple: CoupleSpec, x, t: float) -> float:
    return k_functional(couple, x, t).value


def _hull(points: np.ndarray) -> np.ndarray:
    """Convex hull vertices in counter-clockwise order (monotone chain)."""
    pts = np.unique(points, axis=0)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for q in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    for q in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    return np.array(lower[:-1] + upper[:-1])


def _minkowski(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Minkowski sum of two convex polygons given as counter-clockwise vertex lists."""

    def rooted(V):
        i = np.lexsort((V[:, 0], V[:, 1]))[0]
        V = np.roll(V, -i, axis=0)
        edges = np.roll(V, -1, axis=0) - V
        return V[0], edges

    p0, ep = rooted(P)
    q0, eq = rooted(Q)
    edges = np.vstack([ep, eq])
    ang = np.mod(np.arctan2(edges[:, 1], edges[:, 0]), 2 * np.pi)
    edges = edges[np.argsort(ang, kind="stable")]
    verts = (p0 + q0) + np.vstack([np.zeros((1, 2)), np.cumsum(edges, axis=0)[:-1]])
    return _hull(verts)


def k_oracle_grid(couple: CoupleSpec, x, t: float, resolution: int) -> float:
    """Exhaustive minimum over the multiplier grid s in {0, 1/R, ..., 1}^N.

    Finite p: the objective is a concave function of the two accumulated sums
    (sum of |part|^p over coordinates), so its minimum over the grid is attained
    at a vertex of the convex hull of all achievable sum pairs.  That hull is
    the Minkowski sum of the per-coordinate hulls.  p = inf: for each achievable
    cap on the X1 part every coordinate independently takes the largest
    admissible multiplier, so enumerating the caps is exhaustive.
    """
    x = as_vector(x, couple.N)
    if couple.N > 4:
        raise ValueError("k_oracle_grid is limited to N <= 4")
    if resolution < 1:
        raise ValueError("resolution must be a positive integer")
    if t < 0:
        raise ValueError("t must be nonnegative")
    p = couple.p
    if not math.isinf(p) and (couple.X0.steep or couple.X1.steep):
        # the accumulated sums would mix magnitudes beyond double precision
        raise ValueError("k_oracle_grid needs moderate weights for finite p")
    grid = np.linspace(0.0, 1.0, resolution + 1)
    a0, a1 = _amplitudes(couple, x)
    if math.isinf(p):
        caps = np.unique(np.concatenate([a1[k] * grid for k in range(couple.N)]))
        P0 = np.zeros(caps.size)
        for k in range(couple.N):
            vals = a1[k] * grid
            # largest grid index j with a1_k * grid_j <= cap
            j = np.searchsorted(vals, caps, side="right") - 1
            P0 = np.maximum(P0, a0[k] * (1.0 - grid[j]))
        return float(np.min(P0 + t * caps))
    poly = np.zeros((1, 2))
    for k in range(couple.N):
        pts = np.column_stack([(a0[k] * (1.0 - grid)) ** p, (a1[k] * grid) ** p])
        poly = _minkowski(poly, _hull(pts)) if len(poly) > 1 else poly[0] + _hull(pts)
    poly = np.maximum(poly, 0.0)
    vals = poly[:, 0] ** (1.0 / p) + t * poly[:, 1] ** (1.0 / p)
    return float(vals.min())


def grid_error_bound(couple: CoupleSpec, x, t: float, resolution: int) -> float:
    """Rounding the optimal multipliers to the grid moves each part by at most 1/(2R)."""
    return (norm(couple.X0, x) + t * norm(couple.X1, x)) / (2.0 * resolution)


def k_profile(couple: CoupleSpec, x, t_grid) -> list[tuple[float, float]]:
    return [(float(t), k_value(couple, x, t)) for t in t_grid]
