"""Certify a batch of seeded random polynomial saddles and report the radii.

    python scripts/random_scan.py --seed 2024 --count 25 --order 30
"""
import argparse
import time
from dataclasses import dataclass

from saddlecert.certificate import build_certificate
from saddlecert.corpus import random_corpus
from saddlecert.solver import invariance_residual, solve_stable, solve_unstable


@dataclass
class Scan:
    seed: int = 2024
    count: int = 10
    order: int = 30
    max_dim: int = 3
    max_degree: int = 4


def worst_residual(vf, n1):
    worst = 0.0
    for solve in (solve_stable, solve_unstable):
        p = solve(vf, n1)
        for r in invariance_residual(vf, p):
            worst = max(worst, r.max_abs_coeff())
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Scan()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=default, dest=name)
    scan = Scan(**vars(ap.parse_args()))

    corpus = random_corpus(scan.seed, scan.count, max_dim=scan.max_dim, max_degree=scan.max_degree)
    print(f"{'#':>3} {'ds':>2} {'du':>2} {'deg':>3} {'N':>3} {'Omega':>8} {'r_theta':>10} {'M':>9} {'resid':>9} {'chain':>5} {'s':>6}")
    for i, vf in enumerate(corpus):
        t0 = time.perf_counter()
        c = build_certificate(vf, scan.order)
        m = c.majorants
        chain = all(m.delta[k] >= m.gamma_upper[k] for k in range(2, c.n1 + 1))
        res = worst_residual(vf, min(scan.order, 20))
        print(f"{i:3d} {vf.ds:2d} {vf.du:2d} {vf.degree:3d} {c.N:3d} {float(c.omega):8.4f} "
              f"{c.r_theta:10.3e} {c.M:9.3f} {res:9.1e} {str(chain):>5} {time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
