"""Line-based system definition files.

    dim_stable 1
    dim_unstable 1
    lambda -0.4
    mu 1.5
    # F <component> <exponents...> <coefficient>
    F 1  2 0   1.0
    F 2  3 0  -1.0
    # optional, for a non-polynomial tail: s' and a bound on ||F|| over B_{s'}
    analytic 0.5 10

Numbers are read exactly (decimal or p/q), components are 1-based,
repeated monomials are summed, '#' starts a comment.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import SystemFileSyntaxError, ValidationError
from .solver import VectorField

_SINGLE = ("dim_stable", "dim_unstable", "lambda", "mu", "analytic")


def _number(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise SystemFileSyntaxError(lineno, f"not a number: {tok!r}") from None


def _integer(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise SystemFileSyntaxError(lineno, f"not an integer: {tok!r}") from None


def parse_system(text: str, mode: str = "float") -> VectorField:
    seen: dict[str, tuple[int, list[str]]] = {}
    f_lines: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *args = line.split()
        if key == "F":
            f_lines.append((lineno, args))
        elif key in _SINGLE:
            if key in seen:
                raise SystemFileSyntaxError(lineno, f"{key} given twice")
            if not args:
                raise SystemFileSyntaxError(lineno, f"{key} needs a value")
            seen[key] = (lineno, args)
        else:
            raise SystemFileSyntaxError(lineno, f"unknown keyword {key!r}")

    for key in ("dim_stable", "dim_unstable", "lambda", "mu"):
        if key not in seen:
            raise ValidationError(f"missing {key} line")
    dims = {}
    for key in ("dim_stable", "dim_unstable"):
        lineno, args = seen[key]
        if len(args) != 1:
            raise SystemFileSyntaxError(lineno, f"{key} takes one integer")
        dims[key] = _integer(args[0], lineno)
        if dims[key] < 1:
            raise ValidationError(f"{key} must be at least 1")
    ds, du = dims["dim_stable"], dims["dim_unstable"]
    d = ds + du

    lam_line, lam_args = seen["lambda"]
    mu_line, mu_args = seen["mu"]
    lam = [_number(t, lam_line) for t in lam_args]
    mu = [_number(t, mu_line) for t in mu_args]
    if len(lam) != ds:
        raise ValidationError(f"dim_stable is {ds} but {len(lam)} lambda values given")
    if len(mu) != du:
        raise ValidationError(f"dim_unstable is {du} but {len(mu)} mu values given")

    terms: dict = {}
    for lineno, args in f_lines:
        if len(args) != d + 2:
            raise SystemFileSyntaxError(lineno, f"F line needs component, {d} exponents and a coefficient")
        comp = _integer(args[0], lineno)
        exps = tuple(_integer(t, lineno) for t in args[1:-1])
        coeff = _number(args[-1], lineno)
        if not 1 <= comp <= d:
            raise ValidationError(f"line {lineno}: component {comp} out of range 1..{d}")
        if sum(exps) < 2:
            raise ValidationError(f"line {lineno}: monomial of order {sum(exps)}; F must be O(z^2)")
        key = (comp - 1, exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff

    analytic = None
    if "analytic" in seen:
        lineno, args = seen["analytic"]
        if len(args) != 2:
            raise SystemFileSyntaxError(lineno, "analytic takes s' and ||F||")
        analytic = (_number(args[0], lineno), _number(args[1], lineno))

    # layout problems surface as OrderingViolation / SignViolation (ValidationError)
    return VectorField(tuple(lam), tuple(mu), terms, analytic, mode)


def format_rational(q: Fraction) -> str:
    """Exact decimal when the denominator is 2^a 5^b, otherwise p/q."""
    q = Fraction(q)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = q * 10**digits
    assert scaled.denominator == 1
    n = abs(scaled.numerator)
    sign = "-" if q < 0 else ""
    if digits == 0:
        return f"{sign}{n}"
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def serialise_system(vf: VectorField) -> str:
    lines = [
        f"dim_stable {vf.ds}",
        f"dim_unstable {vf.du}",
        "lambda " + " ".join(format_rational(v) for v in vf.stable),
        "mu " + " ".join(format_rational(v) for v in vf.unstable),
        "# F <component> <exponents...> <coefficient>",
    ]
    for (i, m), c in vf.terms.items():
        lines.append(f"F {i + 1} " + " ".join(str(e) for e in m) + f" {format_rational(c)}")
    if vf.analytic is not None:
        lines.append(f"analytic {format_rational(vf.analytic[0])} {format_rational(vf.analytic[1])}")
    return "\n".join(lines) + "\n"
