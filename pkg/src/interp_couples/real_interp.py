"""Real-method (K-method) interpolation norms.

After the substitution t = e^u the q-norm becomes

    ||x||_{theta,q}^q = integral over R of (e^{-theta u} K(e^u, x))^q du,

and the bound K(t, x) <= min(||x||_X0, t ||x||_X1) gives exponential tails on both
sides, which fixes the truncation window.  The window is integrated by adaptive
Simpson on fixed panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kfunc import k_value
from .spaces import CoupleSpec, as_vector, embedding_norm, norm

__all__ = ["RealNormResult", "real_norm", "real_norm_with_error", "real_norm_inf", "KCache"]

TAIL_FRACTION = 1e-12
SIMPSON_RTOL = 1e-8
_PANELS = 32
_MAX_DEPTH = 40


class KCache:
    """Memoizes K(e^u, x) per node so theta/q sweeps reuse the same solves."""

    def __init__(self, couple: CoupleSpec, x):
        self.couple = couple
        self.x = as_vector(x, couple.N)
        self._values: dict[float, float] = {}

    def __call__(self, u: float) -> float:
        v = self._values.get(u)
        if v is None:
            v = k_value(self.couple, self.x, math.exp(u))
            self._values[u] = v
        return v

    def __len__(self):
        return len(self._values)


@dataclass
class RealNormResult:
    value: float
    error: float
    window: tuple[float, float]
    nodes: int = field(default=0)


def _pairwise_sum(values: list[float]) -> float:
    n = len(values)
    if n == 0:
        return 0.0
    if n <= 8:
        total = 0.0
        for v in values:
            total += v
        return total
    mid = n // 2
    return _pairwise_sum(values[:mid]) + _pairwise_sum(values[mid:])


def _adaptive_simpson(f, a, b, rtol, scale):
    """Returns (integral, error estimate).  ``scale`` is a magnitude for the absolute target."""
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    pieces: list[float] = []
    errors: list[float] = []

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        delta = left + right - whole
        if depth >= _MAX_DEPTH or abs(delta) <= 15 * tol:
            pieces.append(left + right + delta / 15.0)
            errors.append(abs(delta) / 15.0)
            return
        rec(a, m, fa, flm, fm, left, tol / 2, depth + 1)
        rec(m, b, fm, frm, fb, right, tol / 2, depth + 1)

    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    rec(a, b, fa, fm, fb, whole, rtol * scale, 0)
    return _pairwise_sum(pieces), _pairwise_sum(errors)


def _check_theta(theta):
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1); got {theta}")


def real_norm_with_error(couple: CoupleSpec, x, theta: float, q: float, *,
                         rtol: float = SIMPSON_RTOL, cache: KCache | None = None) -> RealNormResult:
    _check_theta(theta)
    if not (1 <= q < math.inf):
        raise ValueError(f"q must lie in [1, inf); got {q}")
    x = as_vector(x, couple.N)
    n0, n1 = norm(couple.X0, x), norm(couple.X1, x)
    if n0 == 0:
        return RealNormResult(0.0, 0.0, (0.0, 0.0))
    K = cache if cache is not None else KCache(couple, x)

    def integrand(u):
        return (math.exp(-theta * u) * K(u)) ** q

    # closed-form majorant of the whole integral, used to size the tails and the panel tolerance
    centre = math.log(n0 / n1)
    majorant = (n0 ** (1 - theta) * n1 ** theta) ** q * (1 / (theta * q) + 1 / ((1 - theta) * q))
    # a cheap lower estimate: the integrand at the crossover node times a unit width
    lower = max(integrand(centre), 1e-300)
    target = TAIL_FRACTION * min(lower, majorant)
    # upper tail: n0^q e^{-theta q U} / (theta q) < target
    hi = math.log(n0 ** q / (theta * q * target)) / (theta * q)
    lo = -math.log(n1 ** q / ((1 - theta) * q * target)) / ((1 - theta) * q)
    hi, lo = max(hi, centre + 1.0), min(lo, centre - 1.0)
    edges = np.linspace(lo, hi, _PANELS + 1)
    # make the crossover a panel edge so the kink of K there is not straddled
    edges = np.unique(np.concatenate([edges, [centre]]))
    vals, errs = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _adaptive_simpson(integrand, float(a), float(b), rtol, lower * (b - a) / (hi - lo))
        vals.append(v)
        errs.append(e)
    integral = _pairwise_sum(vals)
    tail = n0 ** q * math.exp(-theta * q * hi) / (theta * q) + n1 ** q * math.exp((1 - theta) * q * lo) / ((1 - theta) * q)
    err = _pairwise_sum(errs) + tail
    value = integral ** (1.0 / q)
    # propagate through the q-th root
    err_value = value * (err / integral) / q if integral > 0 else err ** (1.0 / q)
    return RealNormResult(value, err_value, (lo, hi), len(K))


def real_norm(couple: CoupleSpec, x, theta: float, q: float, **kwargs) -> float:
    """K-method norm ||x||_{theta,q} = (int_0^inf (t^-theta K(t,x))^q dt/t)^(1/q)."""
    return real_norm_with_error(couple, x, theta, q, **kwargs).value


def real_norm_inf(couple: CoupleSpec, x, theta: float, *, grid_n: int = 801,
                  rtol: float = 1e-8, cache: KCache | None = None) -> float:
    """sup_t t^-theta K(t, x), searched over the provable bracket [1/c', c].

    Outside the bracket K is linear (t ||x||_X1 below, ||x||_X0 above), so
    t^-theta K is monotone there and the supremum lies inside.
    """
    _check_theta(theta)
    x = as_vector(x, couple.N)
    if not np.any(x):
        return 0.0
    K = cache if cache is not None else KCache(couple, x)
    c = embedding_norm(couple.X1, couple.X0)
    c_rev = embedding_norm(couple.X0, couple.X1)
    lo, hi = -math.log(c_rev), math.log(c)
    if hi - lo < 1e-12:
        return math.exp(-theta * lo) * K(lo)

    def g(u):
        return math.exp(-theta * u) * K(u)

    us = np.linspace(lo, hi, grid_n)
    vals = np.array([g(float(u)) for u in us])
    i = int(np.argmax(vals))
    a = float(us[max(i - 1, 0)])
    b = float(us[min(i + 1, grid_n - 1)])
    best = float(vals[i])
    # golden-section refinement inside the best cell pair
    invphi = (math.sqrt(5) - 1) / 2
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    g1, g2 = g(c1), g(c2)
    for _ in range(200):
        if abs(b - a) <= rtol * max(1.0, abs(a)):
            break
        if g1 > g2:
            b, c2, g2 = c2, c1, g1
            c1 = b - invphi * (b - a)
            g1 = g(c1)
        else:
            a, c1, g1 = c1, c2, g2
            c2 = a + invphi * (b - a)
            g2 = g(c2)
    return max(best, g1, g2)
