"""Certify the planar saddle -0.4x + x^2 + y^2, 1.5y - x^3 + y^3 in both scalar modes.

    python scripts/reproduce_planar.py --order 81 --out runs/planar
"""
import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from saddlecert.cli import RunConfig, run_pipeline

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class Experiment:
    system: Path = ROOT / "systems" / "planar.txt"
    order: int = 81
    samples: int = 201
    out: Path = Path("runs/planar")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=Experiment.order)
    ap.add_argument("--samples", type=int, default=Experiment.samples)
    ap.add_argument("--out", type=Path, default=Experiment.out)
    args = ap.parse_args()
    exp = Experiment(order=args.order, samples=args.samples, out=args.out)

    print(f"{'mode':<9} {'r_theta':>10} {'C':>8} {'M':>8} {'shrinks':>8} {'seconds':>8}")
    for mode in ("float", "interval"):
        t0 = time.perf_counter()
        cert = run_pipeline(RunConfig(exp.system, exp.order, mode, samples=exp.samples, out=exp.out / mode))
        dt = time.perf_counter() - t0
        print(f"{mode:<9} {cert.r_theta:10.6f} {cert.C:8.4f} {cert.M:8.4f} {cert.shrink_iterations:8d} {dt:8.2f}")
    print(f"artifacts under {exp.out}/; plot with: python {exp.out}/float/plot_manifolds.py")


if __name__ == "__main__":
    main()
