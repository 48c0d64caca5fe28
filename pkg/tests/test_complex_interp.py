import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from interp_couples.complex_interp import (
    StripFunctionSamples,
    certificate,
    certificate_norm,
    h_norm,
    lemma1_check,
    sample_strip,
    theta_norm,
    three_line_check,
)
from interp_couples.spaces import SpaceSpec, interpolated_space, make_couple, norm

from conftest import P_VALUES, random_couple, random_vector


def test_identity_couple():
    sp = SpaceSpec(2, [1.0, 2.0, 3.0])
    X = make_couple(sp, sp)
    x = np.array([1.0, 1j, -1.0])
    assert theta_norm(X, x, 0.4) == pytest.approx(norm(sp, x), rel=1e-15)
    f = certificate(X, x, 0.4)
    for z in (0.3j, 1 - 2j, 0.5):
        assert np.allclose(f(z), x, rtol=1e-15)
    assert certificate_norm(X, x, 0.4) == pytest.approx(norm(sp, x), rel=1e-15)


def test_scalar_geometric_mean():
    X = make_couple(SpaceSpec(2, [4.0]), SpaceSpec(2, [1.0]))
    assert theta_norm(X, [1.0], 0.5) == pytest.approx(math.sqrt(2), rel=1e-15)
    # |f(it)| = 2^(-1/2) measured with weight 4, |f(1+it)| = 2^(1/2) with weight 1
    assert certificate_norm(X, [1.0], 0.5) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_batched_theta_norm(rng):
    X = random_couple(rng, 5, 2)
    xs = np.array([random_vector(rng, 5) for _ in range(4)])
    out = theta_norm(X, xs, 0.3)
    assert out.shape == (4,)
    assert out[2] == pytest.approx(theta_norm(X, xs[2], 0.3), rel=1e-15)


@pytest.mark.parametrize("p", P_VALUES)
def test_certificate_norm_equals_theta_norm(rng, p):
    for _ in range(35):
        N = int(rng.integers(1, 33))
        X = random_couple(rng, N, p)
        x = random_vector(rng, N)
        theta = float(rng.uniform(0.01, 0.99))
        assert certificate_norm(X, x, theta) == pytest.approx(theta_norm(X, x, theta), rel=1e-12)


def test_lemma_proof_function_is_a_valid_certificate(rng):
    for p in P_VALUES:
        for _ in range(20):
            N = int(rng.integers(1, 10))
            X = random_couple(rng, N, p)
            x = random_vector(rng, N)
            theta = float(rng.uniform(0.05, 0.95))
            c = X.c
            samples = sample_strip(lambda z: c ** (z - theta) * x, grid_n=41, re_n=3)
            H = h_norm(samples, X)
            closed = max(c**-theta * norm(X.X0, x), c ** (1 - theta) * norm(X.X1, x))
            assert H == pytest.approx(closed, rel=1e-12)
            assert H >= theta_norm(X, x, theta) * (1 - 1e-12)


@given(seed=st.integers(0, 2**32 - 1), p=st.sampled_from(P_VALUES),
       a=st.floats(0.02, 0.98), b=st.floats(0.02, 0.98), lam=st.floats(0, 1))
def test_log_convex_in_theta(seed, p, a, b, lam):
    rng = np.random.default_rng(seed)
    X = random_couple(rng, 6, p)
    x = random_vector(rng, 6)
    mid = (1 - lam) * a + lam * b
    lhs = math.log(theta_norm(X, x, mid))
    rhs = (1 - lam) * math.log(theta_norm(X, x, a)) + lam * math.log(theta_norm(X, x, b))
    assert lhs <= rhs + 1e-12 * max(1.0, abs(rhs))


@pytest.mark.parametrize("p", P_VALUES)
def test_endpoint_limits(rng, p):
    X = random_couple(rng, 8, p)
    x = random_vector(rng, 8)
    n0, n1 = norm(X.X0, x), norm(X.X1, x)
    log_spread = float(np.max(np.abs(X.X0.log_amplitudes - X.X1.log_amplitudes)))
    for eps in (1e-3, 1e-6):
        # each amplitude moves by a factor of at most e^(eps * spread)
        tol = math.expm1(eps * log_spread) + 1e-15
        assert theta_norm(X, x, eps) == pytest.approx(n0, rel=tol)
        assert theta_norm(X, x, 1 - eps) == pytest.approx(n1, rel=tol)
    errs = [abs(theta_norm(X, x, e) - n0) for e in (1e-2, 1e-4, 1e-6)]
    assert errs[0] >= errs[1] >= errs[2]


# --- embedding and ball-inclusion checks -----------------------------------------------------------

def test_lemma1_identity_couple_all_equal():
    sp = SpaceSpec(1, [1.0, 2.0])
    X = make_couple(sp, sp)
    x = np.array([1.0, -1j])
    rep = lemma1_check(X, x, 0.5, r=10.0)
    assert rep.ok
    assert all(r.margin == pytest.approx(0.0, abs=1e-15) for r in rep.records if r.label.startswith("embedding"))


def test_lemma1_example_c4(rng):
    X = make_couple(SpaceSpec(1, [4.0, 1.0]), SpaceSpec(1, [1.0, 1.0]))
    assert X.c == 4.0
    xs = np.array([random_vector(rng, 2) for _ in range(1000)])
    rep = lemma1_check(X, xs, 0.5)
    assert rep.ok and rep.summary["count"] == 2000
    n0, n1, nt = norm(X.X0, xs), norm(X.X1, xs), theta_norm(X, xs, 0.5)
    assert np.all(n0 <= 2 * nt * (1 + 1e-12))
    assert np.all(nt <= 2 * n1 * (1 + 1e-12))


@pytest.mark.parametrize("p", P_VALUES)
def test_lemma1_tight_on_extremal_basis_vector(rng, p):
    X = random_couple(rng, 6, p)
    k = int(np.argmax(X.X0.log_amplitudes - X.X1.log_amplitudes))
    e = np.eye(6)[k]
    rep = lemma1_check(X, e, 0.37)
    emb = {r.label: r for r in rep.records}
    assert emb["embedding_i"].margin == pytest.approx(0.0, abs=1e-12)
    assert emb["embedding_ii"].margin == pytest.approx(0.0, abs=1e-12)


def test_lemma1_records_violations_instead_of_raising():
    # a c below the least valid constant can only be smuggled in by bypassing validation
    X = make_couple(SpaceSpec(1, [4.0, 1.0]), SpaceSpec(1, [1.0, 1.0]))
    object.__setattr__(X, "c", 1.0)
    rep = lemma1_check(X, [1.0, 0.0], 0.5)
    assert not rep.ok
    assert rep.summary["worst_margin"] < 0


# --- three-line check ---------------------------------------------------------

def test_strip_samples_validation():
    v = np.ones(2)
    with pytest.raises(ValueError):
        StripFunctionSamples([], [(0.0, v)])
    with pytest.raises(ValueError):
        StripFunctionSamples([(0.0, v)], [(0.0, np.ones(3))])
    with pytest.raises(ValueError):
        StripFunctionSamples([(0.0, v), (1.0, v)], [(0.0, v), (1.0, v)])


def test_three_line_constant_function():
    sp = SpaceSpec(2, [1.0, 1.0])
    x = np.array([1.0, 2.0])
    rep = three_line_check(sample_strip(lambda z: x, grid_n=21, re_n=5), sp)
    assert rep.ok
    assert rep.summary["worst_margin"] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("c", [1.0, 2.0, 50.0])
def test_three_line_exponential(c):
    sp = SpaceSpec(1, [1.0, 3.0])
    x = np.array([1.0, -1j])
    theta = 0.3
    s = sample_strip(lambda z: c ** (theta - z) * x, grid_n=41, re_n=11)
    rep = three_line_check(s, sp)
    assert rep.ok and rep.summary["worst_margin"] >= 0
    # |c^(theta - z)| = c^(theta - Re z)
    for z, v in s.interior:
        assert norm(sp, v) == pytest.approx(c ** (theta - z.real) * norm(sp, x), rel=1e-12)


@pytest.mark.parametrize("p", P_VALUES)
def test_three_line_on_diagonal_exponentials(rng, p):
    # z -> A^z x with a positive diagonal A: each coordinate is log-linear in Re z
    X = random_couple(rng, 5, p)
    x = random_vector(rng, 5)
    A = np.exp(rng.uniform(-2, 2, 5))
    s = sample_strip(lambda z: A**z * x, grid_n=31, re_n=9)
    assert three_line_check(s, X.X0).ok
    # the certificate of a diagonal couple with the pair of boundary norms
    s = sample_strip(certificate(X, x, 0.5), grid_n=31, re_n=9)
    assert three_line_check(s, (X.X0, X.X1)).summary["count"] == 7 * 31


def test_proof_g_stays_in_r_ball(rng):
    X = make_couple(SpaceSpec(1, [4.0, 1.0]), SpaceSpec(1, [1.0, 1.0]))
    r, theta = 1.0, 0.5
    Xt = interpolated_space(X, theta)
    x = random_vector(rng, 2)
    x *= 0.9 * X.c**-theta * r / norm(Xt, x)
    f = certificate(X, x, theta)
    s = sample_strip(lambda z: X.c ** (theta - z) * f(z), grid_n=201, re_n=21)
    for _, v in s.boundary0 + s.boundary1 + [(0, v) for _, v in s.interior]:
        assert norm(X.X0, v) < r
