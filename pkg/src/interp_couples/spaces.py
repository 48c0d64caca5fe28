"""Finite-dimensional weighted sequence spaces and regular couples built from them.

A weighted space carries an exponent ``p`` in {1, 2, inf} and a positive weight
vector ``w``.  Its norm is ``(sum_k w_k |x_k|^p)^(1/p)`` for finite ``p`` and
``max_k w_k |x_k|`` for ``p = inf``.  Everything else (embedding constants,
interpolated weights, extremal strip functions) is expressed through the
*amplitude* ``w_k^(1/p)`` (``w_k`` itself when ``p = inf``), which turns each
norm into a plain unweighted norm of ``amplitude * |x|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpaceSpec",
    "CoupleSpec",
    "as_vector",
    "norm",
    "embedding_norm",
    "embedding_constant",
    "make_couple",
    "j_functional",
    "intersection_norm",
    "sum_norm",
    "interpolated_space",
    "family_weights",
]

ALLOWED_P = (1.0, 2.0, math.inf)
# above this max/min weight ratio norms are accumulated in the log domain
LOG_DOMAIN_RATIO = 1e8


def _check_p(p) -> float:
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in ("inf", "infinity") else float(p)
    p = float(p)
    if p not in ALLOWED_P:
        raise ValueError(f"exponent p must be one of 1, 2, inf; got {p}")
    return p


def amplitude_exponent(p: float) -> float:
    """Power applied to the weights to obtain amplitudes: 1/p, or 1 for p = inf."""
    return 1.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class SpaceSpec:
    """Weighted l^p space of dimension N = len(weights)."""

    p: float
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = _check_p(self.p)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.size < 1:
            raise ValueError("a space needs at least one weight")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be finite and strictly positive")
        w.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "weights", w)

    @property
    def N(self) -> int:
        return int(self.weights.size)

    @property
    def log_weights(self) -> np.ndarray:
        return np.log(self.weights)

    @property
    def log_amplitudes(self) -> np.ndarray:
        return amplitude_exponent(self.p) * np.log(self.weights)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.exp(self.log_amplitudes) if self.steep else self.weights ** amplitude_exponent(self.p)

    @property
    def steep(self) -> bool:
        lw = self.log_weights
        return float(lw.max() - lw.min()) > math.log(LOG_DOMAIN_RATIO)

    def __eq__(self, other):
        if not isinstance(other, SpaceSpec):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.p, self.weights.tobytes()))

    def __repr__(self):
        return f"SpaceSpec(p={self.p:g}, N={self.N})"


@dataclass(frozen=True)
class CoupleSpec:
    """Regular couple (X0, X1) with ||x||_X0 <= c ||x||_X1."""

    X0: SpaceSpec
    X1: SpaceSpec
    c: float

    def __post_init__(self):
        if self.X0.p != self.X1.p:
            raise ValueError("couple spaces must share the exponent p")
        if self.X0.N != self.X1.N:
            raise ValueError("couple spaces must share the dimension N")
        c = float(self.c)
        if not (c > 0 and math.isfinite(c)):
            raise ValueError("embedding constant must be positive and finite")
        least = embedding_norm(self.X1, self.X0)
        if c < least * (1 - 1e-12):
            raise ValueError(f"c={c} is below the least valid embedding constant {least}")
        object.__setattr__(self, "c", c)

    @property
    def p(self) -> float:
        return self.X0.p

    @property
    def N(self) -> int:
        return self.X0.N


def make_couple(X0: SpaceSpec, X1: SpaceSpec, c: float | None = None) -> CoupleSpec:
    """Build a couple, computing the least embedding constant when ``c`` is omitted."""
    if c is None:
        c = embedding_norm(X1, X0)
    return CoupleSpec(X0, X1, c)


def as_vector(x, N: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=complex)
    if v.ndim == 0:
        v = v.reshape(1)
    if N is not None and v.shape[-1] != N:
        raise ValueError(f"dimension mismatch: vector has length {v.shape[-1]}, space has N={N}")
    return v


def norm(space: SpaceSpec, x) -> np.ndarray | float:
    """Weighted l^p norm of ``x``; batched over leading axes of ``x``.

    >>> norm(SpaceSpec(1, [2, 3]), [1, -1])
    5.0
    """
    v = as_vector(x, space.N)
    mod = np.abs(v)
    p = space.p
    if not space.steep:
        a = space.weights ** amplitude_exponent(p) * mod
        if p == 1.0:
            out = a.sum(axis=-1)
        elif p == 2.0:
            # hypot-style scaling keeps tiny/huge entries from under/overflowing
            scale = a.max(axis=-1, keepdims=True)
            safe = np.where(scale > 0, scale, 1.0)
            out = np.squeeze(safe, -1) * np.sqrt(((a / safe) ** 2).sum(axis=-1))
        else:
            out = a.max(axis=-1)
    else:
        with np.errstate(divide="ignore"):
            la = space.log_amplitudes + np.log(mod)
        top = la.max(axis=-1, keepdims=True)
        finite = np.isfinite(top)
        top_safe = np.where(finite, top, 0.0)
        if math.isinf(p):
            out = np.exp(np.squeeze(top, -1))
        else:
            s = np.exp(p * (la - top_safe)).sum(axis=-1)
            out = np.where(np.squeeze(finite, -1), np.exp(np.squeeze(top_safe, -1)) * s ** (1.0 / p), 0.0)
    if np.ndim(out) == 0:
        return float(out)
    return out


def embedding_norm(source: SpaceSpec, target: SpaceSpec) -> float:
    """Norm of the identity map source -> target: max_k amp_target_k / amp_source_k."""
    if source.p != target.p or source.N != target.N:
        raise ValueError("spaces must share p and N")
    return float(np.exp(np.max(target.log_amplitudes - source.log_amplitudes)))


def embedding_constant(X0: SpaceSpec, X1: SpaceSpec) -> float:
    """Least c with ||x||_X0 <= c ||x||_X1, attained on a basis vector."""
    return embedding_norm(X1, X0)


def j_functional(couple: CoupleSpec, x, t: float) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return max(norm(couple.X0, x), t * norm(couple.X1, x))


def intersection_norm(couple: CoupleSpec, x) -> float:
    return j_functional(couple, x, 1.0)


def sum_norm(couple: CoupleSpec, x) -> float:
    from .kfunc import k_functional

    return k_functional(couple, x, 1.0).value


def interpolated_space(couple: CoupleSpec, theta: float) -> SpaceSpec:
    """Complex interpolation space [X0, X1]_theta, with weights w0^(1-theta) * w1^theta."""
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in the open interval (0, 1); got {theta}")
    logw = (1 - theta) * couple.X0.log_weights + theta * couple.X1.log_weights
    return SpaceSpec(couple.p, np.exp(logw))


def family_weights(family: str, N: int, p: float, *, s: float = 0.0, a: float = 0.0,
                   scale: float = 1.0) -> np.ndarray:
    """Named weight families: ``poly`` gives (1+k)^(p s), ``exp`` gives e^(p a k).

    For p = inf the exponent factor p is replaced by 1, matching the amplitude
    convention of ``max_k w_k |x_k|``.
    """
    p = _check_p(p)
    if N < 1:
        raise ValueError("N must be a positive integer")
    k = np.arange(N, dtype=float)
    pf = 1.0 if math.isinf(p) else p
    if family == "poly":
        logw = pf * s * np.log1p(k)
    elif family == "exp":
        logw = pf * a * k
    else:
        raise ValueError(f"unknown weight family {family!r}")
    with np.errstate(over="ignore"):
        w = scale * np.exp(logw)
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ValueError(f"weight family {family!r} overflows double precision at N={N}")
    return w
