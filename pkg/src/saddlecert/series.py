"""Truncated multivariate power series.

Coefficients live in a sparse dict keyed by exponent tuples (multi-indices)
and are kept in graded order. A series is scalar valued; vector-valued maps
such as F or an inner substitution are plain lists of series.

Index classes follow the split of the coordinates z = (x, y) into the first
``ds`` stable and the remaining unstable coordinates:

* ``STABLE``   -- |m_u| = 0 (pure stable monomials)
* ``UNSTABLE`` -- |m_s| = 0 (pure unstable monomials)
* ``MIXED``    -- |m_s| >= 1 and |m_u| >= 1

The classification is only defined for |m| >= 2.
"""
from __future__ import annotations

import enum
import math
from functools import lru_cache
from typing import Iterable, Sequence

from .scalar import FLOAT

MultiIndex = tuple


class IndexClass(enum.Enum):
    STABLE = "V_s"
    UNSTABLE = "V_u"
    MIXED = "U"


def order(m: MultiIndex) -> int:
    return sum(m)


def split(m: MultiIndex, ds: int) -> tuple[MultiIndex, MultiIndex]:
    """Return the stable and unstable parts (m_s, m_u) of ``m``."""
    return tuple(m[:ds]), tuple(m[ds:])


def classify(m: MultiIndex, ds: int) -> IndexClass:
    if sum(m) < 2:
        raise ValueError(f"index classes are defined for |m| >= 2, got {m}")
    ms, mu = split(m, ds)
    if sum(mu) == 0:
        return IndexClass.STABLE
    if sum(ms) == 0:
        return IndexClass.UNSTABLE
    return IndexClass.MIXED


def unit(d: int, j: int) -> MultiIndex:
    return tuple(1 if i == j else 0 for i in range(d))


def mindex_count(d: int, k: int) -> int:
    """Number of d-dimensional multi-indices of order k."""
    if d < 1 or k < 0:
        raise ValueError("need d >= 1 and k >= 0")
    return math.comb(k + d - 1, d - 1)


@lru_cache(maxsize=None)
def multi_indices(d: int, k: int) -> tuple[MultiIndex, ...]:
    """All d-dimensional multi-indices of order k, lexicographically descending."""
    if d == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        for rest in multi_indices(d - 1, k - first):
            out.append((first,) + rest)
    return tuple(out)


def _add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


class PolySeries:
    """Immutable truncated power series in ``nvars`` variables.

    Terms of order above ``order`` are never stored; missing keys are zero.
    Stored terms are exact polynomial coefficients, so operations may raise
    the storage order (a product is truncated at whatever order is asked for).
    """

    __slots__ = ("nvars", "order", "coeffs", "arith", "_parts")

    def __init__(self, nvars: int, order: int, coeffs=None, arith=FLOAT):
        self.nvars = nvars
        self.order = order
        self.arith = arith
        items = []
        for m, c in (coeffs or {}).items():
            m = tuple(m)
            if len(m) != nvars:
                raise ValueError(f"index {m} does not have {nvars} entries")
            if sum(m) <= order:
                items.append((m, c))
        items.sort(key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))
        self.coeffs = dict(items)
        self._parts = None

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, nvars, order, arith=FLOAT):
        return cls(nvars, order, {}, arith)

    @classmethod
    def variable(cls, nvars, j, order, arith=FLOAT):
        return cls(nvars, order, {unit(nvars, j): arith.one}, arith)

    # access -----------------------------------------------------------------

    def __getitem__(self, m):
        return self.coeffs.get(tuple(m), self.arith.zero)

    def __iter__(self):
        return iter(self.coeffs.items())

    def __len__(self):
        return len(self.coeffs)

    def part(self, k: int) -> dict:
        """Homogeneous part of order k as a dict."""
        if self._parts is None:
            parts: dict[int, dict] = {}
            for m, c in self.coeffs.items():
                parts.setdefault(sum(m), {})[m] = c
            self._parts = parts
        return self._parts.get(k, {})

    def min_order(self) -> int | None:
        return min((sum(m) for m in self.coeffs), default=None)

    def degree(self) -> int:
        return max((sum(m) for m in self.coeffs), default=0)

    def truncate(self, n: int) -> "PolySeries":
        return PolySeries(self.nvars, min(n, self.order), self.coeffs, self.arith)

    def with_order(self, n: int) -> "PolySeries":
        return PolySeries(self.nvars, n, self.coeffs, self.arith)

    # arithmetic -------------------------------------------------------------

    def _check(self, other):
        if other.nvars != self.nvars:
            raise ValueError(f"dimension mismatch: {self.nvars} vs {other.nvars}")
        if other.arith is not self.arith:
            raise ValueError("scalar mode mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return PolySeries(self.nvars, max(self.order, other.order), out, self.arith)

    def __neg__(self):
        return PolySeries(self.nvars, self.order, {m: -c for m, c in self.coeffs.items()}, self.arith)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return PolySeries(self.nvars, self.order, {m: factor * c for m, c in self.coeffs.items()}, self.arith)

    def derivative(self, j: int) -> "PolySeries":
        out = {}
        for m, c in self.coeffs.items():
            if m[j]:
                dm = m[:j] + (m[j] - 1,) + m[j + 1:]
                out[dm] = m[j] * c
        return PolySeries(self.nvars, max(self.order - 1, 0), out, self.arith)

    def embed(self, d: int, positions: Sequence[int]) -> "PolySeries":
        """Re-key into ``d`` variables, sending variable q to ``positions[q]``."""
        out = {}
        for m, c in self.coeffs.items():
            full = [0] * d
            for q, e in zip(positions, m):
                full[q] = e
            out[tuple(full)] = c
        return PolySeries(d, self.order, out, self.arith)

    def evaluate(self, point):
        acc = self.arith.zero
        for m, c in self.coeffs.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term = term * x**e
            acc = acc + term
        return acc

    def max_abs_coeff(self) -> float:
        return max((self.arith.upper(abs(c)) for c in self.coeffs.values()), default=0.0)

    def __repr__(self):
        body = " + ".join(f"{c}*{m}" for m, c in self.coeffs.items()) or "0"
        return f"PolySeries(nvars={self.nvars}, order={self.order}, {body})"


def series_multiply(a: PolySeries, b: PolySeries, n: int) -> PolySeries:
    """Cauchy product of a and b with every term of order > n discarded."""
    a._check(b)
    out: dict = {}
    for ma, ca in a.coeffs.items():
        oa = sum(ma)
        if oa > n:
            break
        for mb, cb in b.coeffs.items():
            if oa + sum(mb) > n:
                break
            m = _add_index(ma, mb)
            prod = ca * cb
            out[m] = out[m] + prod if m in out else prod
    return PolySeries(a.nvars, n, out, a.arith)


def homogeneous_product(a_part, b_part) -> dict:
    """Product of two homogeneous parts (dicts), accumulated into a new dict."""
    out: dict = {}
    for ma, ca in a_part.items():
        for mb, cb in b_part.items():
            m = _add_index(ma, mb)
            prod = ca * cb
            out[m] = out[m] + prod if m in out else prod
    return out


def compose_truncated(F: Sequence[PolySeries], inner: Sequence[PolySeries], n: int) -> list[PolySeries]:
    """Return F o inner truncated at order n.

    ``F`` is a list of series in ``len(inner)`` variables with no terms of
    order < 2; ``inner`` is a list of series in a common parameter space with
    no constant terms. Powers of each inner component are built by repeated
    truncated multiplication and cached, then every monomial of F is formed
    as a product of cached powers.
    """
    if not inner:
        raise ValueError("empty inner substitution")
    p = inner[0].nvars
    arith = inner[0].arith
    for s in inner:
        if s.coeffs and s.min_order() == 0:
            raise ValueError("inner substitution has a constant term")
        if s.nvars != p:
            raise ValueError("inner components live in different parameter spaces")
    for f in F:
        if f.nvars != len(inner):
            raise ValueError(f"F has {f.nvars} variables but inner has {len(inner)} components")
        if f.coeffs and f.min_order() < 2:
            raise ValueError("F has terms of order < 2")

    inner = [s.with_order(n) for s in inner]
    powers: list[dict[int, PolySeries]] = [{1: s} for s in inner]

    def power(j, e):
        cache = powers[j]
        if e not in cache:
            cache[e] = series_multiply(power(j, e - 1), inner[j], n)
        return cache[e]

    out = []
    for f in F:
        acc: dict = {}
        for m, c in f.coeffs.items():
            if sum(m) > n:
                break
            term = None
            for j, e in enumerate(m):
                if e:
                    pw = power(j, e)
                    term = pw if term is None else series_multiply(term, pw, n)
            for q, v in term.coeffs.items():
                cv = c * v
                acc[q] = acc[q] + cv if q in acc else cv
        out.append(PolySeries(p, n, acc, arith))
    return out


def filter_class(s: PolySeries, cls: IndexClass, ds: int) -> PolySeries:
    """Keep exactly the terms whose index lies in ``cls``; terms of order < 2 are dropped."""
    kept = {m: c for m, c in s.coeffs.items() if sum(m) >= 2 and classify(m, ds) is cls}
    return PolySeries(s.nvars, s.order, kept, s.arith)


def eval_enclosure(s: PolySeries, box: Iterable, arith=None):
    """Interval enclosure of the range of ``s`` over ``box``.

    ``box`` holds one (lo, hi) pair or interval per variable. Naive interval
    evaluation of every monomial; always returns an interval of the interval
    back end.
    """
    from .scalar import INTERVAL

    ia = arith or INTERVAL
    ivbox = []
    for b in box:
        if isinstance(b, tuple):
            ivbox.append(ia.interval(b[0], b[1]))
        else:
            ivbox.append(ia.const(b))
    acc = ia.zero
    for m, c in s.coeffs.items():
        term = ia.const(c) if not isinstance(c, ia.ctx.mpf) else c
        for x, e in zip(ivbox, m):
            if e:
                term = term * x**e
        acc = acc + term
    return acc
