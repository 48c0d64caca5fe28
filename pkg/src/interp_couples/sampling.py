"""Counter-based random streams and sample point families.

Sample ``i`` of a run with seed ``s`` always comes from the Philox stream keyed by
``(s, i)``, so any partition of the sample loop reproduces the same points.
"""

from __future__ import annotations

import numpy as np

from .spaces import SpaceSpec, norm

_MASK64 = (1 << 64) - 1
SHRINK = 1.0 - 1e-9


def sample_rng(seed: int, index: int) -> np.random.Generator:
    key = (int(seed) & _MASK64) | ((int(index) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def gaussian_directions(seed: int, N: int, indices) -> tuple[np.ndarray, np.ndarray]:
    """Complex Gaussian directions and uniform radial variates, one per index."""
    dirs = np.empty((len(indices), N), dtype=complex)
    us = np.empty(len(indices))
    for row, i in enumerate(indices):
        g = sample_rng(seed, i)
        z = g.standard_normal(2 * N)
        dirs[row] = z[:N] + 1j * z[N:]
        us[row] = g.random()
    return dirs, us


def scale_to(space: SpaceSpec, x: np.ndarray, radius) -> np.ndarray:
    n = np.atleast_1d(norm(space, x))
    return x * (np.asarray(radius, dtype=float).reshape(-1, 1) / n.reshape(-1, 1))


def basis_points(space: SpaceSpec, radius: float) -> np.ndarray:
    return scale_to(space, np.eye(space.N, dtype=complex), radius)


def corner_points(space: SpaceSpec, radius: float, seed: int, count: int) -> np.ndarray:
    """Sign-pattern points x_k = +-1/amp_k, scaled to the radius (extreme for p = inf)."""
    rng = np.random.Generator(np.random.Philox(key=(int(seed) & _MASK64) | (1 << 127)))
    signs = rng.choice([-1.0, 1.0], size=(count, space.N))
    signs[0] = 1.0
    return scale_to(space, signs / space.amplitudes, radius).astype(complex)


def ball_samples(space: SpaceSpec, radius: float, n_samples: int, seed: int, *,
                 start: int = 0, extremes: bool = True, corners: int = 8):
    """Points strictly inside the ball of given radius.

    Random points use a uniform direction (normalized complex Gaussian) and the
    radial law u^(1/(2N)); extreme points (scaled basis vectors and sign corners)
    sit at radius * (1 - 1e-9).  Returns ``(points, kinds)``.
    """
    N = space.N
    dirs, us = gaussian_directions(seed, N, range(start, start + n_samples))
    radii = us ** (1.0 / (2 * N)) * radius * SHRINK
    pts = scale_to(space, dirs, radii) if n_samples else np.empty((0, N), dtype=complex)
    kinds = ["random"] * n_samples
    if extremes:
        extra = [basis_points(space, radius * SHRINK)]
        kinds += ["basis"] * N
        if corners:
            extra.append(corner_points(space, radius * SHRINK, seed, corners))
            kinds += ["corner"] * corners
        pts = np.vstack([pts] + extra)
    return pts, kinds
