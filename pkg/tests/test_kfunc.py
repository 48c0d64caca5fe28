import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from interp_couples.kfunc import grid_error_bound, k_functional, k_oracle_grid, k_profile, k_value
from interp_couples.spaces import SpaceSpec, make_couple, norm

from conftest import P_VALUES, random_couple, random_vector


def brute_force_grid(couple, x, t, R):
    """Plain enumeration of every multiplier vector on the grid (tiny N and R only)."""
    grid = np.linspace(0, 1, R + 1)
    best = math.inf
    for s in itertools.product(grid, repeat=couple.N):
        s = np.array(s)
        best = min(best, norm(couple.X0, (1 - s) * x) + t * norm(couple.X1, s * x))
    return best


def scalar_couple():
    return make_couple(SpaceSpec(1, [1.0]), SpaceSpec(1, [1.0]))


# --- examples ----------------------------------------------------------------

def test_zero_vector():
    X = make_couple(SpaceSpec(2, [1, 2]), SpaceSpec(2, [3, 4]))
    d = k_functional(X, [0, 0], 1.7)
    assert d.value == 0.0
    assert not np.any(d.x0) and not np.any(d.x1)


@pytest.mark.parametrize("t", [0.0, 0.25, 0.5, 1.0, 2.0, 10.0])
def test_scalar_min_one_t(t):
    X = scalar_couple()
    grid = np.linspace(0, 1, 100001)
    oracle = float(np.min(np.abs(1 - grid) + t * grid))
    assert k_value(X, [1.0], t) == pytest.approx(min(1.0, t), abs=1e-15)
    assert oracle == pytest.approx(min(1.0, t), abs=1e-12)


def test_two_dim_l2_against_grid_oracle():
    X = make_couple(SpaceSpec(2, [1, 1]), SpaceSpec(2, [4, 1]))
    x = [1, 1]
    R = 2000
    oracle = k_oracle_grid(X, x, 1.0, R)
    k = k_value(X, x, 1.0)
    assert k <= oracle + 1e-12
    assert abs(k - oracle) <= 1e-6
    s = np.linspace(0, 1, R + 1)
    s0, s1 = np.meshgrid(s, s)
    direct = np.sqrt((1 - s0) ** 2 + (1 - s1) ** 2) + np.sqrt(4 * s0**2 + s1**2)
    assert oracle == pytest.approx(float(direct.min()), abs=1e-14)


def test_profile():
    X = scalar_couple()
    assert [v for _, v in k_profile(X, [1.0], [0.5, 1.0, 2.0])] == pytest.approx([0.5, 1.0, 1.0])


def test_errors():
    X = scalar_couple()
    with pytest.raises(ValueError):
        k_functional(X, [1.0], -1.0)
    with pytest.raises(ValueError):
        k_oracle_grid(X, [1.0], -1.0, 10)
    big = make_couple(SpaceSpec(1, [1] * 5), SpaceSpec(1, [1] * 5))
    with pytest.raises(ValueError):
        k_oracle_grid(big, [1] * 5, 1.0, 10)


def test_t_zero_puts_everything_in_x1():
    X = make_couple(SpaceSpec(2, [1, 1]), SpaceSpec(2, [4, 1]))
    d = k_functional(X, [1, 2j], 0.0)
    assert d.value == 0.0
    assert np.array_equal(d.x1, np.array([1, 2j]))


# --- grid oracle ---------------------------------------------------------------

@pytest.mark.parametrize("p", P_VALUES)
def test_oracle_matches_brute_force(rng, p):
    for _ in range(10):
        N = int(rng.integers(1, 3))
        X = random_couple(rng, N, p, spread=1.5)
        x = random_vector(rng, N)
        t = float(np.exp(rng.uniform(-2, 2)))
        assert k_oracle_grid(X, x, t, 24) == pytest.approx(brute_force_grid(X, x, t, 24), rel=1e-12)


def test_oracle_exact_for_l1_closed_form(rng):
    for _ in range(20):
        N = int(rng.integers(1, 5))
        X = random_couple(rng, N, 1)
        x = random_vector(rng, N)
        t = float(np.exp(rng.uniform(-2, 2)))
        closed = float(np.sum(np.minimum(X.X0.weights, t * X.X1.weights) * np.abs(x)))
        for R in (1, 2, 7):
            assert k_oracle_grid(X, x, t, R) == pytest.approx(closed, rel=1e-13)


def test_scalar_oracle_refinement():
    X = make_couple(SpaceSpec(2, [1.0]), SpaceSpec(2, [1.0]))
    for t in (0.3, 1.0, 3.0):
        errs = [abs(k_oracle_grid(X, [1.0], t, R) - min(1.0, t)) for R in (2, 8, 32, 128)]
        assert errs[-1] <= 1e-12


@pytest.mark.parametrize("p", P_VALUES)
def test_oracle_nonincreasing_under_doubling(rng, p):
    for _ in range(5):
        N = int(rng.integers(1, 4))
        X = random_couple(rng, N, p)
        x = random_vector(rng, N)
        t = float(np.exp(rng.uniform(-2, 2)))
        vals = [k_oracle_grid(X, x, t, R) for R in (5, 10, 20, 40, 80)]
        assert all(b <= a * (1 + 1e-13) for a, b in zip(vals, vals[1:]))


# --- solver properties ---------------------------------------------------------

def oracle_agreement(rng, p, count):
    worst = 0.0
    for _ in range(count):
        N = int(rng.integers(1, 4))
        X = random_couple(rng, N, p)
        x = random_vector(rng, N)
        t = float(np.exp(rng.uniform(-3, 3)))
        k = k_value(X, x, t)
        o = k_oracle_grid(X, x, t, 2000)
        eb = grid_error_bound(X, x, t, 2000)
        assert k <= o * (1 + 1e-12) + 1e-15
        assert o - k <= eb + 1e-6
        worst = max(worst, (o - k) / eb)
    return worst


@pytest.mark.parametrize("p", P_VALUES)
def test_solver_against_oracle(rng, p):
    oracle_agreement(rng, p, 25)


@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from(P_VALUES), N=st.integers(1, 12))
def test_decomposition_is_feasible_and_self_consistent(seed, p, N):
    rng = np.random.default_rng(seed)
    X = random_couple(rng, N, p)
    x = random_vector(rng, N)
    t = float(np.exp(rng.uniform(-4, 4)))
    d = k_functional(X, x, t)
    assert np.allclose(d.x0 + d.x1, x, rtol=0, atol=1e-12 * np.max(np.abs(x)))
    assert d.recompute(X) == pytest.approx(d.value, rel=1e-12)
    # never worse than the trivial splits
    assert d.value <= min(norm(X.X0, x), t * norm(X.X1, x)) * (1 + 1e-12)


@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from(P_VALUES))
def test_concave_nondecreasing_on_log_grid(seed, p):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(1, 10))
    X = random_couple(rng, N, p)
    x = random_vector(rng, N)
    ts = np.logspace(-4, 4, 41)
    ks = np.array([k_value(X, x, t) for t in ts])
    scale = ks.max()
    assert np.all(np.diff(ks) >= -1e-12 * scale)
    # concavity: chords lie below the graph on consecutive triples
    for i in range(1, len(ts) - 1):
        lam = (ts[i + 1] - ts[i]) / (ts[i + 1] - ts[i - 1])
        chord = lam * ks[i - 1] + (1 - lam) * ks[i + 1]
        assert ks[i] >= chord - 1e-10 * scale


@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from(P_VALUES),
       mod=st.floats(1e-3, 1e3), arg=st.floats(0, 2 * math.pi))
def test_homogeneous_under_complex_scaling(seed, p, mod, arg):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(1, 8))
    X = random_couple(rng, N, p)
    x = random_vector(rng, N)
    t = float(np.exp(rng.uniform(-3, 3)))
    lam = mod * complex(math.cos(arg), math.sin(arg))
    assert k_value(X, lam * x, t) == pytest.approx(mod * k_value(X, x, t), rel=1e-12)


def steep_couple(p):
    return make_couple(SpaceSpec(p, [1e-120, 1.0, 1e120]), SpaceSpec(p, [1e120, 1.0, 1e-120]))


def brute_force_batched(couple, x, t, R):
    g = np.linspace(0, 1, R + 1)
    s = np.stack(np.meshgrid(*([g] * couple.N), indexing="ij"), -1).reshape(-1, couple.N)
    return float(np.min(norm(couple.X0, (1 - s) * x) + t * norm(couple.X1, s * x)))


@pytest.mark.parametrize("p", P_VALUES)
@pytest.mark.parametrize("t", [1e-100, 1e-70, 1e-50, 1.0, 1e100])
def test_steep_weights_against_brute_force(p, t):
    X = steep_couple(p)
    x = np.array([1e60, 1.0, 1e-60])
    d = k_functional(X, x, t)
    assert math.isfinite(d.value)
    assert d.recompute(X) == pytest.approx(d.value, rel=1e-10)
    R = 40
    o = brute_force_batched(X, x, t, R)
    assert d.value <= o * (1 + 1e-12)
    assert o - d.value <= grid_error_bound(X, x, t, R) + 1e-12 * o
    if math.isinf(p):
        assert k_oracle_grid(X, x, t, 2000) == pytest.approx(d.value, rel=1e-6)


@pytest.mark.parametrize("p", [1, 2])
def test_oracle_refuses_steep_weights_for_finite_p(p):
    with pytest.raises(ValueError):
        k_oracle_grid(steep_couple(p), [1.0, 1.0, 1.0], 1.0, 10)
