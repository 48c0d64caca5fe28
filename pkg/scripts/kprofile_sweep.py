#!/usr/bin/env python3
"""Tabulate K(t, x) and the real/complex interpolation norms of one vector across theta.

    python3 scripts/kprofile_sweep.py --p 2 --N 8 --seed 0
"""

import argparse
import math

import numpy as np

from interp_couples import SpaceSpec, k_profile, make_couple, norm, real_norm, real_norm_inf, theta_norm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=2.0, help="use inf for the sup norm")
    ap.add_argument("--N", type=int, default=8)
    ap.add_argument("--spread", type=float, default=3.0, help="log-weights drawn from [-spread, spread]")
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    p = math.inf if math.isinf(args.p) else args.p
    X = make_couple(SpaceSpec(p, np.exp(rng.uniform(-args.spread, args.spread, args.N))),
                    SpaceSpec(p, np.exp(rng.uniform(-args.spread, args.spread, args.N))))
    x = rng.standard_normal(args.N) + 1j * rng.standard_normal(args.N)
    n0, n1 = norm(X.X0, x), norm(X.X1, x)
    print(f"p={p}  N={args.N}  c={X.c:.6g}  |x|_0={n0:.6g}  |x|_1={n1:.6g}\n")

    print(f"{'t':>10} {'K(t,x)':>14} {'K/min(|x|_0,t|x|_1)':>20}")
    for t, K in k_profile(X, x, np.logspace(-3, 3, 13)):
        print(f"{t:>10.4g} {K:>14.8g} {K / min(n0, t * n1):>20.6f}")

    print(f"\n{'theta':>6} {'real q=' + str(args.q):>14} {'real inf':>14} {'complex':>14} {'geo mean':>14}")
    for th in (0.1, 0.25, 0.5, 0.75, 0.9):
        print(f"{th:>6} {real_norm(X, x, th, args.q):>14.8g} {real_norm_inf(X, x, th):>14.8g} "
              f"{theta_norm(X, x, th):>14.8g} {n0 ** (1 - th) * n1 ** th:>14.8g}")


if __name__ == "__main__":
    main()
