"""Polynomial analytic maps on sequence spaces: a small expression language.

Grammar (whitespace-insensitive)::

    expr    := 'x'
             | 'const' '[' numbers ']'
             | 'scale' '(' number ',' expr ')'
             | 'sum' '(' expr ',' expr ')'
             | 'conv' '(' expr ',' expr ')'
             | 'diag' '[' numbers ']' '(' expr ')'
    numbers := number (',' number)*
    number  := real | real 'i' | real ('+'|'-') real 'i'

Convolution is truncated to the first N coefficients.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .sampling import SHRINK, gaussian_directions, scale_to
from .spaces import SpaceSpec, as_vector, embedding_norm, norm

__all__ = [
    "Var", "Const", "Scale", "Sum", "Conv", "Diag", "MapExpr", "MapSpec", "MapSyntaxError",
    "parse_map", "parse_number", "format_map", "degree", "dimension", "eval_map", "truncated_conv",
    "algebra_constant", "certified_bound", "sample_sup",
]


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    values: tuple


@dataclass(frozen=True)
class Scale:
    factor: complex
    arg: "MapExpr"


@dataclass(frozen=True)
class Sum:
    left: "MapExpr"
    right: "MapExpr"


@dataclass(frozen=True)
class Conv:
    left: "MapExpr"
    right: "MapExpr"


@dataclass(frozen=True)
class Diag:
    values: tuple
    arg: "MapExpr"


MapExpr = Union[Var, Const, Scale, Sum, Conv, Diag]


class MapSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_NUMBER = re.compile(rf"\s*({_REAL})(?:\s*(i)|\s*([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*i)?")
_WORD = re.compile(r"\s*([a-z]+)")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        pos = self.pos if pos is None else pos
        raise MapSyntaxError(msg, len(self.text[:pos].encode("utf-8")))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch):
        self.skip()
        if self.text.startswith(ch, self.pos):
            self.pos += len(ch)
        else:
            self.error(f"expected {ch!r}")

    def number(self) -> complex:
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.skip()
            self.error("expected a number")
        self.pos = m.end()
        real = float(m.group(1))
        if m.group(2):
            return complex(0.0, real)
        if m.group(3):
            imag = float(m.group(4))
            return complex(real, -imag if m.group(3) == "-" else imag)
        return complex(real, 0.0)

    def numbers(self) -> tuple:
        self.expect("[")
        vals = [self.number()]
        self.skip()
        while self.text.startswith(",", self.pos):
            self.pos += 1
            vals.append(self.number())
            self.skip()
        self.expect("]")
        return tuple(vals)

    def expr(self) -> MapExpr:
        m = _WORD.match(self.text, self.pos)
        if not m:
            self.skip()
            self.error("expected an expression")
        start = m.start(1)
        word = m.group(1)
        self.pos = m.end()
        if word == "x":
            return Var()
        if word == "const":
            return Const(self.numbers())
        if word == "scale":
            self.expect("(")
            a = self.number()
            self.expect(",")
            e = self.expr()
            self.expect(")")
            return Scale(a, e)
        if word in ("sum", "conv"):
            self.expect("(")
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(")")
            return (Sum if word == "sum" else Conv)(left, right)
        if word == "diag":
            d = self.numbers()
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return Diag(d, e)
        self.error(f"unknown operator {word!r}", start)


def parse_number(text: str) -> complex:
    """Parse one number of the map grammar, e.g. ``"1.5"``, ``"-2i"``, ``"1+2i"``."""
    p = _Parser(text)
    z = p.number()
    p.skip()
    if p.pos != len(text):
        p.error("unexpected trailing input")
    return z


def parse_map(text: str) -> MapExpr:
    """Parse map source text into an expression tree.

    >>> parse_map("conv(x, x)")
    Conv(left=Var(), right=Var())
    """
    p = _Parser(text)
    expr = p.expr()
    p.skip()
    if p.pos != len(text):
        p.error("unexpected trailing input")
    dimension(expr)
    return expr


def _fmt_number(z: complex) -> str:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("map coefficients must be finite")
    if z.imag == 0:
        return repr(z.real)
    if z.real == 0:
        return repr(z.imag) + "i"
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def format_map(expr: MapExpr) -> str:
    """Canonical source text; ``parse_map(format_map(e)) == e``."""
    if isinstance(expr, Var):
        return "x"
    if isinstance(expr, Const):
        return "const[" + ", ".join(map(_fmt_number, expr.values)) + "]"
    if isinstance(expr, Scale):
        return f"scale({_fmt_number(expr.factor)}, {format_map(expr.arg)})"
    if isinstance(expr, Sum):
        return f"sum({format_map(expr.left)}, {format_map(expr.right)})"
    if isinstance(expr, Conv):
        return f"conv({format_map(expr.left)}, {format_map(expr.right)})"
    if isinstance(expr, Diag):
        return "diag[" + ", ".join(map(_fmt_number, expr.values)) + f"]({format_map(expr.arg)})"
    raise TypeError(f"not a map expression: {expr!r}")


def degree(expr: MapExpr) -> int:
    if isinstance(expr, Var):
        return 1
    if isinstance(expr, Const):
        return 0
    if isinstance(expr, (Scale, Diag)):
        return degree(expr.arg)
    if isinstance(expr, Sum):
        return max(degree(expr.left), degree(expr.right))
    if isinstance(expr, Conv):
        return degree(expr.left) + degree(expr.right)
    raise TypeError(f"not a map expression: {expr!r}")


def dimension(expr: MapExpr) -> int | None:
    """Common length of embedded vectors, or None when the map embeds none."""
    if isinstance(expr, Var):
        return None
    if isinstance(expr, Const):
        return len(expr.values)
    subs = [expr.arg] if isinstance(expr, (Scale, Diag)) else [expr.left, expr.right]
    dims = {d for d in map(dimension, subs) if d is not None}
    if isinstance(expr, Diag):
        dims.add(len(expr.values))
    if len(dims) > 1:
        raise ValueError(f"dimension mismatch among embedded vectors: {sorted(dims)}")
    return dims.pop() if dims else None


@dataclass(frozen=True)
class MapSpec:
    expr: MapExpr
    source: str
    degree: int

    @classmethod
    def from_text(cls, text: str) -> "MapSpec":
        e = parse_map(text)
        return cls(e, text, degree(e))


def truncated_conv(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """(u*v)_k = sum_{i+j=k} u_i v_j for k < N; batched over leading axes."""
    u, v = np.broadcast_arrays(u, v)
    N = u.shape[-1]
    out = np.zeros(u.shape, dtype=np.result_type(u, v, complex))
    for i in range(N):
        out[..., i:] += u[..., i:i + 1] * v[..., : N - i]
    return out


def eval_map(expr: MapExpr, x) -> np.ndarray:
    """Value of the map at x (rows of a 2-D array are evaluated independently)."""
    x = as_vector(x)
    d = dimension(expr)
    if d is not None and x.shape[-1] != d:
        raise ValueError(f"dimension mismatch: map has N={d}, input has length {x.shape[-1]}")
    return _eval(expr, x)


def _eval(expr, x):
    if isinstance(expr, Var):
        return x
    if isinstance(expr, Const):
        return np.broadcast_to(np.asarray(expr.values, dtype=complex), x.shape)
    if isinstance(expr, Scale):
        return expr.factor * _eval(expr.arg, x)
    if isinstance(expr, Sum):
        return _eval(expr.left, x) + _eval(expr.right, x)
    if isinstance(expr, Conv):
        return truncated_conv(_eval(expr.left, x), _eval(expr.right, x))
    if isinstance(expr, Diag):
        return np.asarray(expr.values, dtype=complex) * _eval(expr.arg, x)
    raise TypeError(f"not a map expression: {expr!r}")


def algebra_constant(space: SpaceSpec) -> float:
    """Constant C with ||u*v|| <= C ||u|| ||v|| for truncated convolution.

    C = max_{i+j<N} amp_{i+j} / (amp_i amp_j) times N^(1 - 1/p) (times N for
    p = inf).  For p = 1 the first factor is the sharp constant (attained on
    basis vectors), and equals 1 for submultiplicative weights with w_0 = 1.
    """
    N = space.N
    la = space.log_amplitudes
    i, j = np.triu_indices(N)
    ok = i + j < N
    i, j = i[ok], j[ok]
    log_ratio = float(np.max(la[i + j] - la[i] - la[j]))
    growth = float(N) if math.isinf(space.p) else float(N) ** max(0.0, 1.0 - 1.0 / space.p)
    C = math.exp(log_ratio) * growth
    if not (math.isfinite(C) and C > 0):
        raise ValueError("no finite algebra constant for this space")
    return C


def certified_bound(expr: MapExpr, space: SpaceSpec, r: float, source: SpaceSpec | None = None) -> float:
    """Sound upper bound for sup ||Phi(x)||_space over ||x||_source <= r.

    ``source`` defaults to ``space``; the identity leaf then contributes r
    times the norm of the embedding source -> space.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    src = space if source is None else source
    d = dimension(expr)
    if d is not None and d != space.N:
        raise ValueError(f"dimension mismatch: map has N={d}, space has N={space.N}")
    cache: dict[str, float] = {}

    def conv_const():
        if "C" not in cache:
            cache["C"] = algebra_constant(space)
        return cache["C"]

    def bound(e):
        if isinstance(e, Var):
            return r * (1.0 if src is space else embedding_norm(src, space))
        if isinstance(e, Const):
            return norm(space, np.asarray(e.values, dtype=complex))
        if isinstance(e, Scale):
            return abs(e.factor) * bound(e.arg)
        if isinstance(e, Sum):
            return bound(e.left) + bound(e.right)
        if isinstance(e, Conv):
            return conv_const() * bound(e.left) * bound(e.right)
        if isinstance(e, Diag):
            return float(np.max(np.abs(np.asarray(e.values, dtype=complex)))) * bound(e.arg)
        raise TypeError(f"not a map expression: {e!r}")

    return float(bound(expr))


def sample_sup(expr: MapExpr, space: SpaceSpec, r: float, n_samples: int, seed: int,
               source: SpaceSpec | None = None) -> float:
    """Monte Carlo lower estimate of sup ||Phi(x)|| on the sphere of radius r (1 - 1e-9).

    Includes every scaled basis vector besides the random directions.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    src = space if source is None else source
    radius = r * SHRINK
    dirs, _ = gaussian_directions(seed, src.N, range(n_samples))
    pts = np.vstack([scale_to(src, dirs, radius), scale_to(src, np.eye(src.N, dtype=complex), radius)])
    vals = np.atleast_1d(norm(space, eval_map(expr, pts)))
    return float(np.max(vals))
