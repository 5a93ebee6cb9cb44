"""Command-line front end.

    saddlecert --input systems/planar.txt --order 81 --mode float --out run/

writes certificate.json, coefficients.csv, enclosure.csv and plot_manifolds.py
(plus normal_form.csv with --with-G). Exit codes: 0 certified, 2 parse or
validation error, 3 resonance, 4 inconclusive interval, 5 tail divergence,
6 iteration cap, 1 anything else.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .certificate import Certificate, build_certificate, remainder_bound
from .errors import (
    InconclusiveInterval,
    MaxIterationsExceeded,
    ResonanceDetected,
    SaddleCertError,
    TailDiverges,
    ValidationError,
)
from .series import eval_enclosure
from .solver import ManifoldParam, normal_form_tail
from .sysfile import parse_system

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_VALIDATION = 2
EXIT_RESONANCE = 3
EXIT_INCONCLUSIVE = 4
EXIT_TAIL = 5
EXIT_ITERATIONS = 6

# fraction of r_theta kept away from the pole of the remainder when sampling
EDGE_FRACTION = 0.05


@dataclass
class RunConfig:
    input: Path
    n1: int = 81
    mode: str = "float"
    rho: int | None = None
    with_G: int | None = None
    samples: int = 201
    out: Path = Path("saddlecert_out")

    def __post_init__(self):
        self.input = Path(self.input)
        self.out = Path(self.out)
        if self.n1 < 2:
            raise ValidationError("order must be at least 2")
        if self.samples < 0:
            raise ValidationError("sample count must be non-negative")
        if self.mode not in ("float", "interval"):
            raise ValidationError(f"unknown mode {self.mode!r}")


def _pair(arith, x):
    lo, hi = arith.bounds(x)
    return [lo, hi]


def certificate_json(cert: Certificate) -> dict:
    a = cert.arith
    if cert.mode == "float":
        omega, A = float(cert.omega), float(cert.A)
        lam = [float(v) for v in cert.lam]
        mu = [float(v) for v in cert.mu]
    else:
        omega, A = _pair(a, cert.omega), _pair(a, cert.A)
        lam = [_pair(a, a.const(v)) for v in cert.lam]
        mu = [_pair(a, a.const(v)) for v in cert.mu]
    return {
        "n1": cert.n1,
        "r_theta": cert.r_theta,
        "C": cert.C,
        "M": cert.M,
        "Omega": omega,
        "A": A,
        "mode": cert.mode,
        "shrink_iterations": cert.shrink_iterations,
        "lambda": lam,
        "mu": mu,
        "N": cert.N,
        "rho": cert.rho,
        "fallback": cert.fallback,
        "cauchy_delta_bound": cert.cauchy_ok,
        "remainder": {
            "form": "r_theta * (t / r_theta)**(n1 + 1) / (1 - t / r_theta), t = |zeta| < r_theta",
            "r_theta": cert.r_theta,
            "exponent": cert.n1 + 1,
        },
    }


def coefficient_rows(cert: Certificate, tail=None) -> tuple[list[str], list[list]]:
    a = cert.arith
    interval = cert.mode == "interval"
    header = ["side", "component", "exponents"] + (["value_lo", "value_hi"] if interval else ["value"])
    rows = []

    def emit(side, full_index, values):
        for i, v in enumerate(values):
            vals = _pair(a, v) if interval else [float(v)]
            rows.append([side, i + 1, " ".join(map(str, full_index))] + vals)

    for param in (cert.stable, cert.unstable):
        for q, values in param.coeffs.items():
            emit(param.side, param.full_index(q), values)
    if tail is not None:
        for m, values in tail.coeffs.items():
            emit("G", m, values)
    return header, rows


def _grid(radius: float, count: int, nparams: int):
    if count == 0:
        return []
    half = radius * (1 - EDGE_FRACTION)
    if count == 1:
        axis = [0.0]
    else:
        # symmetric integer numerators keep t = 0 exact for odd counts
        axis = [half * (2 * i - (count - 1)) / (count - 1) for i in range(count)]
    return list(itertools.product(axis, repeat=nparams))


def emit_enclosure_samples(param: ManifoldParam, cert: Certificate, count: int) -> tuple[list[str], list[list]]:
    """Sample points of the truncated manifold with their a priori remainder.

    One-parameter sides are sampled along a line, higher-dimensional sides on
    a grid of ``count`` points per axis over the parameter box. Every row
    carries ``remainder`` = remainder_bound(|t|), to be added as a box
    +-remainder in every coordinate. Interval mode adds z<j>_lo/z<j>_hi: the
    interval evaluation of the polynomial part widened by the remainder.
    """
    p, d = param.nparams, param.d
    interval = cert.mode == "interval"
    header = ["side"] + [f"t{q + 1}" for q in range(p)] + [f"z{j + 1}" for j in range(d)] + ["remainder"]
    if interval:
        header += [f"z{j + 1}_{end}" for j in range(d) for end in ("lo", "hi")]
    a = cert.arith
    emb = param.embedding()
    rows = []
    for t in _grid(cert.r_theta, count, p):
        norm = max(abs(x) for x in t)
        rem = remainder_bound(cert, norm)
        if rem == float("inf"):
            continue
        if interval:
            encl = [eval_enclosure(s, list(t), a) for s in emb]
            point = [a.mid(e) for e in encl]
            bounds = []
            for e in encl:
                bounds += [a.lower(e - rem), a.upper(e + rem)]
            rows.append([param.side, *t, *point, rem, *bounds])
        else:
            point = [float(s.evaluate(t)) for s in emb]
            rows.append([param.side, *t, *point, rem])
    return header, rows


PLOT_SCRIPT = '''"""Plot the sampled manifold enclosures written by saddlecert (needs matplotlib)."""
import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
rows = []
for path in sorted(here.glob("enclosure*.csv")):
    with open(path, newline="") as fh:
        rows += list(csv.DictReader(fh))

colours = {"stable": "tab:blue", "unstable": "tab:red"}
fig, ax = plt.subplots(figsize=(6, 6))
for side, colour in colours.items():
    pts = [r for r in rows if r["side"] == side]
    if not pts:
        continue
    x = [float(r["z1"]) for r in pts]
    y = [float(r["z2"]) for r in pts]
    e = [float(r["remainder"]) for r in pts]
    ax.errorbar(x, y, xerr=e, yerr=e, fmt=".", ms=2, color=colours[side], ecolor=colours[side], alpha=0.6, label=side)
ax.set_xlabel("z1")
ax.set_ylabel("z2")
ax.set_aspect("equal")
ax.legend()
out = here / "manifolds.png"
fig.savefig(out, dpi=150)
print(out, file=sys.stderr)
'''


def _write_csv(path: Path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buf.getvalue(), encoding="utf-8")


def run_pipeline(cfg: RunConfig) -> Certificate:
    """Parse, certify and write all artifacts; errors propagate to the caller."""
    try:
        text = cfg.input.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {cfg.input}: {exc}") from None
    vf = parse_system(text, cfg.mode)
    cert = build_certificate(vf, cfg.n1, cfg.rho)
    tail = None
    if cfg.with_G:
        tail = normal_form_tail(vf, cert.stable, cert.unstable, cfg.with_G)

    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / "certificate.json").write_text(json.dumps(certificate_json(cert), indent=2) + "\n", encoding="utf-8")
    _write_csv(cfg.out / "coefficients.csv", *coefficient_rows(cert))
    if tail is not None:
        header, rows = coefficient_rows(cert, tail)
        _write_csv(cfg.out / "normal_form.csv", header, [r for r in rows if r[0] == "G"])
    samples = [emit_enclosure_samples(param, cert, cfg.samples) for param in (cert.stable, cert.unstable)]
    if samples[0][0] == samples[1][0]:
        _write_csv(cfg.out / "enclosure.csv", samples[0][0], samples[0][1] + samples[1][1])
    else:
        # sides with different parameter counts have different columns
        for param, (header, rows) in zip((cert.stable, cert.unstable), samples):
            _write_csv(cfg.out / f"enclosure_{param.side}.csv", header, rows)
    (cfg.out / "plot_manifolds.py").write_text(PLOT_SCRIPT, encoding="utf-8")
    return cert


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ValidationError):
        return EXIT_VALIDATION
    if isinstance(exc, ResonanceDetected):
        return EXIT_RESONANCE
    if isinstance(exc, InconclusiveInterval):
        return EXIT_INCONCLUSIVE
    if isinstance(exc, TailDiverges):
        return EXIT_TAIL
    if isinstance(exc, MaxIterationsExceeded):
        return EXIT_ITERATIONS
    return EXIT_OTHER


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="saddlecert",
        description="Truncated parametrisations of saddle manifolds with a verified convergence radius.",
    )
    ap.add_argument("--input", required=True, type=Path, help="system definition file")
    ap.add_argument("--order", type=int, default=81, dest="n1", help="truncation order n1 (default 81)")
    ap.add_argument("--mode", choices=("float", "interval"), default="float")
    ap.add_argument("--rho", type=int, default=None, help="order of the explicit part of the F majorant")
    ap.add_argument("--with-G", type=int, default=None, metavar="N", dest="with_G",
                    help="also compute the normal-form tail G up to order N")
    ap.add_argument("--samples", type=int, default=201, help="enclosure samples per parameter axis")
    ap.add_argument("--out", type=Path, default=Path("saddlecert_out"), help="output directory")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.input, args.n1, args.mode, args.rho, args.with_G, args.samples, args.out)
        cert = run_pipeline(cfg)
    except SaddleCertError as exc:
        print(f"saddlecert: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    print(
        f"certified r_theta = {cert.r_theta:.6g} (C = {cert.C:.4g}, M = {cert.M:.4g}, "
        f"{cert.shrink_iterations} shrinks, mode {cert.mode}) -> {cfg.out}",
        file=sys.stderr,
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
