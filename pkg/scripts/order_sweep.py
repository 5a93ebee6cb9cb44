"""How r_theta, C and M depend on the truncation order n1.

    python scripts/order_sweep.py --system systems/planar.txt --orders 10 20 40 81 120
"""
import argparse
import csv
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from saddlecert.certificate import build_certificate
from saddlecert.sysfile import parse_system

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class Sweep:
    system: Path = ROOT / "systems" / "planar.txt"
    orders: list[int] = field(default_factory=lambda: [10, 20, 30, 40, 60, 81, 100, 120])
    mode: str = "float"
    csv_out: Path | None = None


def run(sweep: Sweep) -> list[dict]:
    vf = parse_system(sweep.system.read_text(encoding="utf-8"), sweep.mode)
    rows = []
    for n1 in sweep.orders:
        t0 = time.perf_counter()
        c = build_certificate(vf, n1)
        rows.append({
            "n1": n1,
            "r_theta": c.r_theta,
            "C": c.C,
            "M": c.M,
            "shrinks": c.shrink_iterations,
            "fallback": c.fallback,
            "seconds": round(time.perf_counter() - t0, 3),
        })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--system", type=Path, default=Sweep.system)
    ap.add_argument("--orders", type=int, nargs="+")
    ap.add_argument("--mode", choices=("float", "interval"), default="float")
    ap.add_argument("--csv", type=Path, dest="csv_out")
    args = ap.parse_args()
    sweep = Sweep(args.system, args.orders or Sweep().orders, args.mode, args.csv_out)
    rows = run(sweep)
    out = open(sweep.csv_out, "w", newline="") if sweep.csv_out else sys.stdout
    writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
