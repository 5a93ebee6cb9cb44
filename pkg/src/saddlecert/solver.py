"""Order-by-order computation of the manifold parametrisations.

The stable manifold is (xi, 0) + phi(xi) and the unstable one (0, eta) + psi(eta).
At order k every coefficient is obtained by dividing the order-k coefficient
of F evaluated along the order-(k-1) parametrisation by the small divisor
m.lambda - (lambda, mu)_i, so coefficients only depend on lower orders.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Mapping, Sequence

from .errors import OrderTooSmall, ValidationError
from .scalar import _as_fraction, get_arith
from .series import (
    IndexClass,
    PolySeries,
    compose_truncated,
    filter_class,
    homogeneous_product,
    multi_indices,
    series_multiply,
    unit,
)
from .spectrum import Spectrum, check_layout, small_divisor, verify_spectrum


@dataclass(frozen=True)
class VectorField:
    """z' = Lambda z + F(z) with polynomial F given by exact coefficients.

    ``terms`` maps (component, exponent tuple) to a rational coefficient;
    components are 0-based. ``analytic`` optionally carries (s', ||F||_{s'})
    for a non-polynomial tail that only enters the certificate.
    """

    stable: tuple[Fraction, ...]
    unstable: tuple[Fraction, ...]
    terms: Mapping[tuple[int, tuple[int, ...]], Fraction]
    analytic: tuple[Fraction, Fraction] | None = None
    mode: str = "float"

    def __post_init__(self):
        lam, mu = check_layout(self.stable, self.unstable)
        object.__setattr__(self, "stable", lam)
        object.__setattr__(self, "unstable", mu)
        d = len(self.stable) + len(self.unstable)
        merged: dict = {}
        for (i, m), c in self.terms.items():
            m = tuple(int(e) for e in m)
            if len(m) != d:
                raise ValidationError(f"monomial {m} does not have {d} exponents")
            if not 0 <= i < d:
                raise ValidationError(f"component {i + 1} out of range 1..{d}")
            if any(e < 0 for e in m):
                raise ValidationError(f"negative exponent in {m}")
            if sum(m) < 2:
                raise ValidationError(f"F must be O(z^2); monomial {m} has order {sum(m)}")
            key = (i, m)
            merged[key] = merged.get(key, Fraction(0)) + _as_fraction(c)
        object.__setattr__(self, "terms", dict(sorted(merged.items())))
        if self.analytic is not None:
            sp, norm = (_as_fraction(v) for v in self.analytic)
            if sp <= 0 or norm < 0:
                raise ValidationError("analytic data needs s' > 0 and ||F||_{s'} >= 0")
            object.__setattr__(self, "analytic", (sp, norm))
        get_arith(self.mode)

    @property
    def d(self) -> int:
        return len(self.stable) + len(self.unstable)

    @property
    def ds(self) -> int:
        return len(self.stable)

    @property
    def du(self) -> int:
        return len(self.unstable)

    @property
    def arith(self):
        return get_arith(self.mode)

    @property
    def degree(self) -> int:
        return max((sum(m) for (_, m) in self.terms), default=0)

    @cached_property
    def spectrum(self) -> Spectrum:
        return verify_spectrum(self.stable, self.unstable, self.mode)

    @cached_property
    def F(self) -> list[PolySeries]:
        a = self.arith
        comps: list[dict] = [{} for _ in range(self.d)]
        for (i, m), c in self.terms.items():
            comps[i][m] = a.const(c)
        n = max(self.degree, 2)
        return [PolySeries(self.d, n, c, a) for c in comps]

    def with_mode(self, mode: str) -> "VectorField":
        return VectorField(self.stable, self.unstable, self.terms, self.analytic, mode)


@dataclass(frozen=True)
class ManifoldParam:
    """Coefficients of phi (side='stable') or psi (side='unstable').

    ``coeffs`` maps a parameter-space index (length d_s resp. d_u) of order
    2..n1 to a length-d list of scalars. Every index of those orders is present,
    zeros included.
    """

    side: str
    n1: int
    d: int
    ds: int
    coeffs: dict
    arith: Any = field(compare=False)

    @property
    def nparams(self) -> int:
        return self.ds if self.side == "stable" else self.d - self.ds

    @property
    def positions(self) -> tuple[int, ...]:
        """Coordinates of the full space spanned by the parameters."""
        if self.side == "stable":
            return tuple(range(self.ds))
        return tuple(range(self.ds, self.d))

    def full_index(self, q) -> tuple[int, ...]:
        full = [0] * self.d
        for pos, e in zip(self.positions, q):
            full[pos] = e
        return tuple(full)

    def component(self, i: int) -> PolySeries:
        """phi_i (or psi_i) as a series in the parameters."""
        return PolySeries(self.nparams, self.n1, {q: v[i] for q, v in self.coeffs.items()}, self.arith)

    def series(self) -> list[PolySeries]:
        return [self.component(i) for i in range(self.d)]

    def embedding(self) -> list[PolySeries]:
        """(xi, 0) + phi(xi) (resp. (0, eta) + psi(eta)) as series in the parameters."""
        out = []
        for i in range(self.d):
            s = self.component(i)
            if i in self.positions:
                q = self.positions.index(i)
                s = s + PolySeries.variable(self.nparams, q, self.n1, self.arith)
            out.append(s)
        return out

    def embedded(self) -> list[PolySeries]:
        """phi (resp. psi) re-keyed as series in all d coordinates."""
        return [s.embed(self.d, self.positions) for s in self.series()]

    def order_slice(self, k: int) -> dict:
        return {q: v for q, v in self.coeffs.items() if sum(q) == k}

    def evaluate(self, t) -> list:
        """Point (t, 0) + phi(t) on the truncated manifold."""
        return [s.evaluate(t) for s in self.embedding()]


@dataclass(frozen=True)
class NormalFormTail:
    order: int
    coeffs: dict  # full d-dim MIXED index -> length-d list
    arith: Any = field(compare=False)

    def component(self, i: int, d: int) -> PolySeries:
        return PolySeries(d, self.order, {m: v[i] for m, v in self.coeffs.items()}, self.arith)


class _Node:
    """Series of one coordinate or monomial, grown one homogeneous order at a time."""

    __slots__ = ("left", "right", "parts")

    def __init__(self, left=None, right=None):
        self.left = left
        self.right = right
        # leaves get their order-1 part appended by the solver; products start at order 2
        self.parts: list[dict] = [{}] if left is None else [{}, {}]

    def grow(self, k: int) -> None:
        # children start at order >= 1, so order k needs only their orders < k
        acc: dict = {}
        for a in range(1, k):
            b = k - a
            if b >= len(self.right.parts) or a >= len(self.left.parts):
                continue
            pa, pb = self.left.parts[a], self.right.parts[b]
            if not pa or not pb:
                continue
            for m, c in homogeneous_product(pa, pb).items():
                acc[m] = acc[m] + c if m in acc else c
        self.parts.append(acc)


def _solve_side(vf: VectorField, n1: int, side: str) -> ManifoldParam:
    s = vf.spectrum
    if n1 < s.N or n1 < 2:
        raise OrderTooSmall(f"order n1 = {n1} is below N = {s.N} (or 2)")
    a = vf.arith
    d, ds = vf.d, vf.ds
    positions = tuple(range(ds)) if side == "stable" else tuple(range(ds, d))
    p = len(positions)

    leaves = [_Node() for _ in range(d)]
    for j in range(d):
        leaves[j].parts.append({unit(p, positions.index(j)): a.one} if j in positions else {})

    nodes: dict[tuple, _Node] = {}

    def node_for(m):
        if m in nodes:
            return nodes[m]
        j = max(i for i, e in enumerate(m) if e)
        rest = m[:j] + (m[j] - 1,) + m[j + 1:]
        left = leaves[rest.index(1)] if sum(rest) == 1 else node_for(rest)
        nodes[m] = _Node(left, leaves[j])
        return nodes[m]

    comp_terms: list[list] = [[] for _ in range(d)]
    for (i, m), c in vf.terms.items():
        comp_terms[i].append((node_for(m), a.const(c)))
    chain = list(nodes.values())

    divisors = {}
    coeffs: dict = {}
    for k in range(2, n1 + 1):
        for node in chain:
            node.grow(k)
        indices = multi_indices(p, k)
        new = {q: [a.zero] * d for q in indices}
        for i in range(d):
            num: dict = {}
            for node, c in comp_terms[i]:
                for q, v in node.parts[k].items():
                    cv = c * v
                    num[q] = num[q] + cv if q in num else cv
            for q in indices:
                key = (i, q)
                if key not in divisors:
                    full = [0] * d
                    for pos, e in zip(positions, q):
                        full[pos] = e
                    divisors[key] = small_divisor(s, full, i)
                if q in num:
                    new[q][i] = a.divide_checked(num[q], divisors[key])
                else:
                    a.divide_checked(a.zero, divisors[key])
        for j in range(d):
            leaves[j].parts.append({q: new[q][j] for q in indices})
        coeffs.update(new)
    return ManifoldParam(side, n1, d, ds, coeffs, a)


def solve_stable(vf: VectorField, n1: int) -> ManifoldParam:
    """Coefficients alpha_{i,m_s} of phi for 2 <= |m_s| <= n1."""
    return _solve_side(vf, n1, "stable")


def solve_unstable(vf: VectorField, n1: int) -> ManifoldParam:
    """Coefficients beta_{i,m_u} of psi for 2 <= |m_u| <= n1."""
    return _solve_side(vf, n1, "unstable")


def invariance_residual(vf: VectorField, param: ManifoldParam) -> list[PolySeries]:
    """L phi - [F((xi,0) + phi)]_{V_s} (or the unstable mirror), truncated at n1.

    The composition is redone from scratch with ``compose_truncated`` so this
    does not share the incremental path used by the solver.
    """
    a = param.arith
    n = param.n1
    composed = compose_truncated(vf.F, param.embedding(), n)
    eig = vf.spectrum.eigenvalues
    pos_eig = [eig[j] for j in param.positions]
    out = []
    for i in range(vf.d):
        lhs = {}
        for q, v in param.coeffs.items():
            dot = a.zero
            for e, lam in zip(q, pos_eig):
                if e:
                    dot = dot + e * lam
            lhs[q] = (dot - eig[i]) * v[i]
        # composed lives on the parameter slice, so the V_s / V_u filter only drops orders < 2
        rhs = PolySeries(param.nparams, n, {q: c for q, c in composed[i].coeffs.items() if sum(q) >= 2}, a)
        out.append(PolySeries(param.nparams, n, lhs, a) - rhs)
    return out


def normal_form_tail(vf: VectorField, phi: ManifoldParam, psi: ManifoldParam, n: int) -> NormalFormTail:
    """Coefficients g_m (m mixed, |m| <= n) of the pulled-back nonlinearity G.

    Solves G = [F(Theta)]_U - D(phi + psi) G order by order; D(phi + psi) has
    no constant part, so the order-k part of G needs G only up to order k-1.
    """
    if n > min(phi.n1, psi.n1):
        raise OrderTooSmall(f"parametrisations known to order {min(phi.n1, psi.n1)}, need {n}")
    a = vf.arith
    d, ds = vf.d, vf.ds
    P = [x.truncate(n) + y.truncate(n) for x, y in zip(phi.embedded(), psi.embedded())]
    theta = [P[j] + PolySeries.variable(d, j, n, a) for j in range(d)]
    FU = [filter_class(f, IndexClass.MIXED, ds) for f in compose_truncated(vf.F, theta, n)]
    jac = [[P[i].derivative(j) for j in range(d)] for i in range(d)]

    G = [PolySeries.zero(d, n, a) for _ in range(d)]
    for k in range(2, n + 1):
        new_parts = []
        for i in range(d):
            acc = dict(FU[i].part(k))
            for j in range(d):
                for m, c in series_multiply(jac[i][j], G[j], k).part(k).items():
                    acc[m] = acc[m] - c if m in acc else -c
            new_parts.append(acc)
        G = [G[i] + PolySeries(d, n, new_parts[i], a) for i in range(d)]
    coeffs: dict = {}
    for k in range(2, n + 1):
        for m in multi_indices(d, k):
            if sum(m[:ds]) >= 1 and sum(m[ds:]) >= 1:
                coeffs[m] = [G[i][m] for i in range(d)]
    return NormalFormTail(n, coeffs, a)
