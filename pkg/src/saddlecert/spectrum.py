"""Linear part of the saddle: non-resonance checks and small-divisor bounds.

Eigenvalues are kept as exact rationals. Stable eigenvalues are listed in
ascending order (lambda_{d_s}, ..., lambda_1), unstable ones ascending
(mu_1, ..., mu_{d_u}); coordinate j of the vector field carries the j-th
entry of the concatenated list.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .errors import (
    InconclusiveInterval,
    NonpositiveOmega,
    OrderingViolation,
    ResonanceDetected,
    SignViolation,
    ValidationError,
)
from .scalar import FLOAT, _as_fraction, get_arith
from .series import multi_indices

SAFETY_NET_ORDER = 200
SAFETY_NET_BUDGET = 200_000


@dataclass(frozen=True)
class Spectrum:
    stable: tuple[Fraction, ...]
    unstable: tuple[Fraction, ...]
    N: int
    arith: Any = field(default=FLOAT, compare=False)
    omega: Any = field(default=None, compare=False)

    @property
    def ds(self) -> int:
        return len(self.stable)

    @property
    def du(self) -> int:
        return len(self.unstable)

    @property
    def d(self) -> int:
        return self.ds + self.du

    @property
    def N_eff(self) -> int:
        return max(self.N, 2)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return self.stable + self.unstable

    @property
    def eigenvalues(self) -> tuple:
        """The diagonal of the linear part as scalars of the active mode."""
        return tuple(self.arith.const(v) for v in self.values)

    def with_mode(self, mode) -> "Spectrum":
        return verify_spectrum(self.stable, self.unstable, mode)


def _ceil_ratio(a: Fraction, b: Fraction) -> int:
    return math.ceil(a / b)


def _relation_text(m, i, side, ds, du) -> str:
    if side == "stable":
        def name(p):
            return f"lambda_{ds - p}"
    else:
        def name(p):
            return f"mu_{p + 1}"
    lhs = " + ".join(f"{e}*{name(p)}" if e != 1 else name(p) for p, e in enumerate(m) if e)
    return f"{lhs} = {name(i)}"


def _check_side(values, arith, side, ds, du):
    """Finite rational independence up to order ceil(v_last/v_first) (stable: ratio of extremes)."""
    if side == "stable":
        bound = _ceil_ratio(values[0], values[-1])
    else:
        bound = _ceil_ratio(values[-1], values[0])
    n = len(values)
    scal = [arith.const(v) for v in values]
    for k in range(2, bound + 1):
        for m in multi_indices(n, k):
            if arith is FLOAT:
                # exact rational test, independent of rounding
                dot = sum(e * v for e, v in zip(m, values))
                for i, v in enumerate(values):
                    if dot == v:
                        raise ResonanceDetected(m, i, side, _relation_text(m, i, side, ds, du))
            else:
                dot = arith.zero
                for e, v in zip(m, scal):
                    if e:
                        dot = dot + e * v
                for i, v in enumerate(scal):
                    rel = dot - v
                    if arith.is_exact_zero(rel):
                        raise ResonanceDetected(m, i, side, _relation_text(m, i, side, ds, du))
                    if not arith.excludes_zero(rel):
                        raise InconclusiveInterval(
                            f"cannot certify {_relation_text(m, i, side, ds, du).replace('=', '!=')}: "
                            f"relation encloses {rel}"
                        )
    return bound


def verify_spectrum(lam: Sequence, mu: Sequence, mode="float") -> Spectrum:
    """Validate the linear part and return a Spectrum with N and Omega filled in.

    ``lam`` lists the stable eigenvalues ascending (most negative first) and
    ``mu`` the unstable ones ascending. Raises ResonanceDetected when an exact
    relation m.lambda = lambda_i (|m| >= 2) exists up to the order that
    finite independence requires; interval mode raises InconclusiveInterval if a
    relation cannot be separated from zero.
    """
    arith = get_arith(mode)
    lam, mu = check_layout(lam, mu)
    ds, du = len(lam), len(mu)
    ns = _check_side(lam, arith, "stable", ds, du)
    nu = _check_side(mu, arith, "unstable", ds, du)
    result = Spectrum(lam, mu, max(ns, nu), arith)
    object.__setattr__(result, "omega", omega_global(result))
    return result


def check_layout(lam: Sequence, mu: Sequence) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Signs and ordering only; returns the eigenvalues as exact rationals."""
    lam = tuple(_as_fraction(v) for v in lam)
    mu = tuple(_as_fraction(v) for v in mu)
    if not lam or not mu:
        raise ValidationError("need at least one stable and one unstable eigenvalue")
    if any(v >= 0 for v in lam):
        raise SignViolation(f"stable eigenvalues must be negative: {[float(v) for v in lam]}")
    if any(v <= 0 for v in mu):
        raise SignViolation(f"unstable eigenvalues must be positive: {[float(v) for v in mu]}")
    if list(lam) != sorted(lam) or list(mu) != sorted(mu):
        raise OrderingViolation("eigenvalues must be listed in ascending order")
    return lam, mu


def small_divisor(s: Spectrum, m, i: int):
    """m_s.lambda - (lambda, mu)_i for m in V_s, m_u.mu - (lambda, mu)_i for m in V_u.

    ``m`` is a full d-dimensional index and ``i`` a 0-based component.
    """
    m = tuple(m)
    if len(m) != s.d:
        raise ValueError(f"index {m} is not {s.d}-dimensional")
    ms, mu_ = m[: s.ds], m[s.ds:]
    eig = s.eigenvalues
    if sum(mu_) == 0:
        part = eig[: s.ds]
        exps = ms
    elif sum(ms) == 0:
        part = eig[s.ds:]
        exps = mu_
    else:
        raise ValueError(f"no small divisor for mixed index {m}")
    acc = s.arith.zero
    for e, v in zip(exps, part):
        if e:
            acc = acc + e * v
    return acc - eig[i]


def omega_of(s: Spectrum, k: int):
    """min(|k lambda_1 - lambda_{d_s}|, |k mu_1 - mu_{d_u}|)."""
    a = s.arith
    lam1, lam_ds = a.const(s.stable[-1]), a.const(s.stable[0])
    mu1, mu_du = a.const(s.unstable[0]), a.const(s.unstable[-1])
    return a.min([abs(k * lam1 - lam_ds), abs(k * mu1 - mu_du)])


def _enumerated_ratio_floor(s: Spectrum, max_order: int = SAFETY_NET_ORDER):
    """Brute-force min of |m.(lambda,mu) - nu| / |m| over pure indices, in doubles."""
    nus = np.array([float(v) for v in s.values])
    best = math.inf
    for side in (s.stable, s.unstable):
        vals = np.array([float(v) for v in side])
        sums = vals.copy()
        for k in range(2, max_order + 1):
            sums = np.unique((sums[:, None] + vals[None, :]).ravel())
            best = min(best, float(np.min(np.abs(sums[:, None] - nus[None, :]))) / k)
            if sums.size > SAFETY_NET_BUDGET:
                break
    return best


def _round_down(q: Fraction) -> float:
    f = float(q)
    if Fraction(f) > q:
        f = math.nextafter(f, -math.inf)
    return f


def omega_global(s: Spectrum):
    """Uniform small-divisor bound: |m.(lambda,mu) - nu| >= Omega |m| for all m in V, |m| >= 2.

    Uses N_eff = max(N, 2) in the tail term; the finite part covers
    2 <= |m| < N_eff. The result is further capped by a brute-force scan of
    all pure indices up to order 200, which can only lower it. Float mode
    evaluates the bound exactly in rationals and rounds it down, so the
    returned double never exceeds the true bound.
    """
    a = s.arith
    exact = a is FLOAT
    n_eff = s.N_eff
    if exact:
        lam1, lam_ds, mu1, mu_du = s.stable[-1], s.stable[0], s.unstable[0], s.unstable[-1]
        tail = min(abs(n_eff * lam1 - lam_ds), abs(n_eff * mu1 - mu_du))
        eig = s.values
        zero = Fraction(0)
    else:
        tail = omega_of(s, n_eff)
        eig = s.eigenvalues
        zero = a.zero
    candidates = [tail / n_eff]
    for block in (eig[: s.ds], eig[s.ds:]):
        for k in range(2, n_eff):
            for m in multi_indices(len(block), k):
                dot = zero
                for e, v in zip(m, block):
                    if e:
                        dot = dot + e * v
                for nu in eig:
                    candidates.append(abs(dot - nu) / k)
    net = _enumerated_ratio_floor(s)
    if exact:
        omega = min(candidates)
        if math.isfinite(net):
            omega = min(omega, Fraction(net))
        omega = _round_down(omega)
    else:
        omega = a.min(candidates)
        if math.isfinite(net):
            omega = a.min([omega, a.const(net)])
    if not a.lower(omega) > 0:
        raise NonpositiveOmega(f"Omega = {omega} is not positive")
    return omega
