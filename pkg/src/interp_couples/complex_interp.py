"""Complex interpolation norms on diagonal couples, strip functions and the three-line check.

The norm of [X0, X1]_theta is taken in closed form (geometric mean of the weights).
It is validated from above by evaluating the extremal strip function

    f(z)_k = x_k * (amp0_k / amp1_k)^(z - theta)

whose boundary moduli do not depend on Im z, so its H-norm equals the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .report import Record, Report, summarize
from .spaces import CoupleSpec, SpaceSpec, as_vector, interpolated_space, norm

__all__ = [
    "StripFunctionSamples",
    "theta_norm",
    "certificate",
    "certificate_norm",
    "h_norm",
    "sample_strip",
    "strip_grid",
    "lemma1_check",
    "three_line_check",
]

T_MAX = 10.0
GRID_N = 201
RE_N = 21


def theta_norm(couple: CoupleSpec, x, theta: float):
    """||x||_{X_theta}; batched over leading axes of ``x``."""
    return norm(interpolated_space(couple, theta), x)


def certificate(couple: CoupleSpec, x, theta: float) -> Callable[[complex], np.ndarray]:
    """Extremal strip function through x at theta."""
    x = as_vector(x, couple.N)
    log_ratio = couple.X0.log_amplitudes - couple.X1.log_amplitudes

    def f(z):
        return x * np.exp((complex(z) - theta) * log_ratio)

    return f


@dataclass
class StripFunctionSamples:
    """Samples of a strip function on Re z = 0, Re z = 1 and optionally inside."""

    boundary0: list[tuple[float, np.ndarray]]
    boundary1: list[tuple[float, np.ndarray]]
    interior: list[tuple[complex, np.ndarray]] = field(default_factory=list)

    def __post_init__(self):
        if not self.boundary0 or not self.boundary1:
            raise ValueError("boundary sample sets must be nonempty")
        sizes = {v.shape[-1] for _, v in self.boundary0 + self.boundary1 + self.interior}
        if len(sizes) != 1:
            raise ValueError("all sampled vectors must share N")
        for pts in (self.boundary0, self.boundary1):
            ts = np.array(sorted(t for t, _ in pts))
            if not np.allclose(ts, -ts[::-1], atol=1e-12):
                raise ValueError("boundary grids must be symmetric around t = 0")


def strip_grid(T_max: float = T_MAX, grid_n: int = GRID_N, re_n: int = RE_N):
    """Uniform (Re z, Im z) grid; the first and last rows are the boundary lines."""
    return np.linspace(0.0, 1.0, re_n), np.linspace(-T_max, T_max, grid_n)


def sample_strip(f: Callable[[complex], np.ndarray], T_max: float = T_MAX, grid_n: int = GRID_N,
                 re_n: int = RE_N) -> StripFunctionSamples:
    res, ts = strip_grid(T_max, grid_n, re_n)
    b0 = [(float(t), np.asarray(f(complex(0.0, t)))) for t in ts]
    b1 = [(float(t), np.asarray(f(complex(1.0, t)))) for t in ts]
    interior = [(complex(a, t), np.asarray(f(complex(a, t)))) for a in res[1:-1] for t in ts]
    return StripFunctionSamples(b0, b1, interior)


def h_norm(samples: StripFunctionSamples, couple_or_spaces) -> float:
    """Grid value of max{sup ||f(it)||_X0, sup ||f(1+it)||_X1}."""
    X0, X1 = _pair(couple_or_spaces)
    s0 = max(norm(X0, v) for _, v in samples.boundary0)
    s1 = max(norm(X1, v) for _, v in samples.boundary1)
    return float(max(s0, s1))


def _pair(couple_or_spaces):
    if isinstance(couple_or_spaces, CoupleSpec):
        return couple_or_spaces.X0, couple_or_spaces.X1
    return couple_or_spaces


def certificate_norm(couple: CoupleSpec, x, theta: float, T_max: float = T_MAX,
                     grid_n: int = GRID_N) -> float:
    """H-norm of the extremal certificate through x, evaluated on boundary grids.

    Upper-bounds ||x||_{X_theta}; equals it for diagonal couples.
    """
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1); got {theta}")
    f = certificate(couple, x, theta)
    ts = np.linspace(-T_max, T_max, grid_n)
    b0 = np.array([f(complex(0.0, t)) for t in ts])
    b1 = np.array([f(complex(1.0, t)) for t in ts])
    return float(max(np.max(norm(couple.X0, b0)), np.max(norm(couple.X1, b1))))


def lemma1_check(couple: CoupleSpec, xs, theta: float, r: float | None = None,
                 tolerance: float = 1e-12) -> Report:
    """Embedding inequalities ||x||_0 <= c^theta ||x||_theta <= c ||x||_1, plus ball inclusions.

    ``xs`` may be a single vector or a batch (rows).  Violations are recorded,
    never raised.
    """
    xs = np.atleast_2d(as_vector(xs, couple.N))
    c = couple.c
    n0 = np.atleast_1d(norm(couple.X0, xs))
    n1 = np.atleast_1d(norm(couple.X1, xs))
    nt = np.atleast_1d(theta_norm(couple, xs, theta))
    records = []
    for i in range(xs.shape[0]):
        records.append(Record.compare("embedding_i", n0[i], c**theta * nt[i], tolerance, theta=theta, index=i))
        records.append(Record.compare("embedding_ii", nt[i], c ** (1 - theta) * n1[i], tolerance,
                                      theta=theta, index=i))
        if r is not None:
            # membership implications: inside the smaller ball => inside the next one
            if n1[i] < r / c:
                records.append(Record.compare("ball_X1_in_Xtheta", nt[i], c**-theta * r, tolerance,
                                              theta=theta, index=i))
            if nt[i] < c**-theta * r:
                records.append(Record.compare("ball_Xtheta_in_X0", n0[i], r, tolerance, theta=theta, index=i))
    return Report("lemma1", records, summarize(records), {"c": c, "theta": theta, "r": r})


def three_line_check(samples: StripFunctionSamples, space: SpaceSpec | Sequence[SpaceSpec],
                     tolerance: float = 1e-9) -> Report:
    """Interior sup of ||f(z)|| against the larger boundary sup.

    ``space`` is the norm used on every line; a pair (X0, X1) applies X0 on
    Re z = 0 and X1 on Re z = 1 with the interior measured in X0.
    """
    if not samples.interior:
        raise ValueError("three_line_check needs interior samples")
    if isinstance(space, SpaceSpec):
        X_left = X_right = X_in = space
    else:
        X_left, X_right = space
        X_in = X_left
    b = max(max(norm(X_left, v) for _, v in samples.boundary0),
            max(norm(X_right, v) for _, v in samples.boundary1))
    records = [
        Record.compare("three_line", norm(X_in, v), b, tolerance, index=i, theta=float(z.real))
        for i, (z, v) in enumerate(samples.interior)
    ]
    meta = {"boundary_sup": float(b), "window_only": True}
    return Report("three_line", records, summarize(records), meta)
