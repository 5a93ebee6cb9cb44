"""Majorant chain, heuristic growth fit and the verified convergence radius."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import DegenerateWindow, MaxIterationsExceeded, NonpositiveOmega, TailDiverges, ValidationError
from .scalar import FLOAT, get_arith
from .series import mindex_count
from .solver import ManifoldParam, VectorField, solve_stable, solve_unstable

SHRINK = 0.95
MAX_SHRINKS = 10_000
DEFAULT_R_CAP = 1.0
# clamp 2 r <= ANALYTIC_MARGIN * (largest s'' for which the tail bound closes)
ANALYTIC_MARGIN = 0.95


@dataclass
class MajorantData:
    gamma: list  # gamma[k], k = 0..n1 (entries 0, 1 are zero); the values fed to the fit
    chat: list  # chat[k], k = 0..rho
    rho: int
    n0: int
    gamma_upper: list | None = None  # rigorous upper endpoints in interval mode
    delta: list | None = None


@dataclass
class Certificate:
    n1: int
    r_theta: float
    C: float
    M: float
    omega: Any
    A: Any
    shrink_iterations: int
    mode: str
    rho: int
    N: int
    lam: tuple = ()
    mu: tuple = ()
    fallback: bool = False
    cauchy_ok: bool | None = None
    stable: ManifoldParam | None = field(default=None, repr=False)
    unstable: ManifoldParam | None = field(default=None, repr=False)
    majorants: MajorantData | None = field(default=None, repr=False)

    @property
    def arith(self):
        return get_arith(self.mode)

    def verified(self) -> bool:
        """Re-evaluate r_theta <= Omega / (4 A_{2 r_theta}) from the stored Omega and A."""
        return radius_condition_holds(self.r_theta, self.omega, self.A, self.arith)

    def remainder(self, zeta_norm: float) -> float:
        return remainder_bound(self, zeta_norm)


def joint_majorant(phi: ManifoldParam, psi: ManifoldParam) -> list:
    """gamma_k = sum_{|m|=k} max_i |alpha_{i,m}| + sum_{|m|=k} max_i |beta_{i,m}|.

    Returned as floats; in interval mode the upper endpoints (rounded up) so the
    sequence dominates the true one.
    """
    a = phi.arith
    n1 = min(phi.n1, psi.n1)
    gamma = [0.0] * (n1 + 1)
    for k in range(2, n1 + 1):
        acc = a.zero
        for param in (phi, psi):
            for v in param.order_slice(k).values():
                acc = acc + a.max([abs(x) for x in v])
        gamma[k] = a.upper(acc)
    return gamma


def fit_geometric_bound(gamma: Sequence[float], n1: int) -> tuple[float, float]:
    """Least-squares fit of log gamma_k = log C + k log M over floor(n1/2) < k <= n1.

    Zero entries are skipped. C is then raised until gamma_k <= C M^k on the
    whole window.
    """
    n0 = n1 // 2
    ks = [k for k in range(n0 + 1, n1 + 1) if gamma[k] > 0]
    if len(ks) < 2:
        raise DegenerateWindow(f"only {len(ks)} nonzero majorant coefficients in ({n0}, {n1}]")
    B = np.column_stack([np.ones(len(ks)), np.array(ks, dtype=float)])
    b = np.log(np.array([gamma[k] for k in ks], dtype=float))
    (log_c, log_m), *_ = np.linalg.lstsq(B, b, rcond=None)
    C, M = math.exp(log_c), math.exp(log_m)
    for k in ks:
        if gamma[k] > C * M**k:
            C = gamma[k] / M**k
            while gamma[k] > C * M**k:
                C = math.nextafter(C, math.inf)
    return C, M


def fhat_coeffs(vf: VectorField, rho: int) -> list:
    """chat_k = sum_{|m|=k} max_i |c_{i,m}| for k = 0..rho (scalars of vf's mode)."""
    a = vf.arith
    by_index: dict = {}
    for (i, m), c in vf.terms.items():
        by_index.setdefault(m, []).append(abs(a.const(c)))
    chat = [a.zero] * (rho + 1)
    for m, vals in sorted(by_index.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        k = sum(m)
        if k <= rho:
            chat[k] = chat[k] + a.max(vals)
    return chat


def _tail_bound(vf: VectorField, s2, rho: int):
    a = vf.arith
    if vf.analytic is None:
        if vf.degree > rho:
            raise ValidationError(f"rho = {rho} is below deg F = {vf.degree} and no analytic bound is given")
        return a.zero
    sp, norm = (a.const(v) for v in vf.analytic)
    t = s2 / sp
    q = t * (rho + 1 + vf.d) / (rho + 2)
    if not a.upper(q) < 1:
        raise TailDiverges(f"tail ratio {a.upper(q):.6g} >= 1 at s'' = {a.upper(s2):.6g}; raise rho or shrink s''")
    first = mindex_count(vf.d, rho + 1) * t ** (rho - 1)
    return norm / (sp * sp) * first / (1 - q)


def quadratic_bound(vf: VectorField, s2, rho: int | None = None, chat=None):
    """A_{s''} = sum_{k=2}^{rho} chat_k s''^(k-2) + (Cauchy tail), so that F^(w) <= A |w|^2 on B_{s''}."""
    a = vf.arith
    rho = default_rho(vf) if rho is None else rho
    if chat is None:
        chat = fhat_coeffs(vf, rho)
    s2 = a.const(s2)
    acc = a.zero
    for k in range(rho, 1, -1):
        acc = acc * s2 + chat[k]
    return acc + _tail_bound(vf, s2, rho)


def default_rho(vf: VectorField) -> int:
    return max(vf.degree, 2)


def radius_condition_holds(r: float, omega, A, arith=FLOAT) -> bool:
    """r <= Omega / (4 A), with A = 0 treated as always true."""
    if arith is FLOAT:
        return A == 0 or r <= omega / (4 * A)
    if arith.upper(A) == 0:
        return True
    if not arith.lower(A) > 0:
        return False
    return r <= arith.lower(omega / (4 * A))


def _analytic_radius_cap(vf: VectorField, rho: int) -> float | None:
    if vf.analytic is None:
        return None
    sp = float(vf.analytic[0])
    return 0.5 * ANALYTIC_MARGIN * sp * min(1.0, (rho + 2) / (rho + 1 + vf.d))


def verify_radius(spectrum, vf: VectorField, r_candidate: float, rho: int | None = None, chat=None):
    """Shrink r by 0.95 until r <= Omega / (4 A_{2r}); returns (r, iterations)."""
    a = vf.arith
    rho = default_rho(vf) if rho is None else rho
    if chat is None:
        chat = fhat_coeffs(vf, rho)
    omega = spectrum.omega
    if not a.lower(omega) > 0:
        raise NonpositiveOmega(f"Omega = {omega}")
    if not r_candidate > 0:
        raise ValueError("candidate radius must be positive")
    r = float(r_candidate)
    cap = _analytic_radius_cap(vf, rho)
    if cap is not None and r > cap:
        r = cap
    for it in range(MAX_SHRINKS + 1):
        A = quadratic_bound(vf, 2 * r, rho, chat)
        if radius_condition_holds(r, omega, A, a):
            return r, it
        r *= SHRINK
    raise MaxIterationsExceeded(f"no admissible radius after {MAX_SHRINKS} shrinks")


def sigma_coeffs(chat: Sequence, omega, n: int, arith=FLOAT) -> list:
    """delta_k = [F^(w + sigma^[k-1](w))]_k / (Omega k) for k = 2..n (list indexed by k)."""
    a = arith
    rho = len(chat) - 1
    w = [a.zero] * (n + 1)
    if n >= 1:
        w[1] = a.one
    # pw[j][k]: coefficient of w^k in (w + sigma)^j, filled order by order
    pw = {j: [a.zero] * (n + 1) for j in range(2, rho + 1)}
    delta = [a.zero] * (n + 1)
    for k in range(2, n + 1):
        for j in range(2, rho + 1):
            lower = w if j == 2 else pw[j - 1]
            acc = a.zero
            for i in range(1, k):
                acc = acc + lower[k - i] * w[i]
            pw[j][k] = acc
        num = a.zero
        for j in range(2, min(rho, k) + 1):
            num = num + chat[j] * pw[j][k]
        delta[k] = num / (omega * k)
        w[k] = delta[k]
    return delta


def _below_power(x: float, base: float, e: int) -> bool:
    try:
        return x <= base**e
    except OverflowError:
        return True


def remainder_bound(cert: Certificate, zeta_norm: float) -> float:
    """r (|z|/r)^(n1+1) / (1 - |z|/r) on |z| < r; +inf at and beyond r."""
    if zeta_norm < 0:
        raise ValueError("norm must be non-negative")
    r = cert.r_theta
    if zeta_norm >= r:
        return math.inf
    if cert.mode == "float":
        q = zeta_norm / r
        return r * q ** (cert.n1 + 1) / (1 - q)
    a = cert.arith
    q = a.const(zeta_norm) / a.const(r)
    return a.upper(a.const(r) * q ** (cert.n1 + 1) / (1 - q))


def build_certificate(vf: VectorField, n1: int, rho: int | None = None, r_cap: float = DEFAULT_R_CAP) -> Certificate:
    """Solve both sides, fit (C, M), and verify a radius starting from 1/M.

    In interval mode the coefficients, Omega, A and the radius inequality are
    all interval-verified; the (C, M) fit is a heuristic and is always run in
    floating point on the float-mode coefficients, so it proposes the same
    candidate radius in both modes.
    """
    a = vf.arith
    spectrum = vf.spectrum
    rho = default_rho(vf) if rho is None else rho
    phi, psi = solve_stable(vf, n1), solve_unstable(vf, n1)
    if a is FLOAT:
        gamma_fit = joint_majorant(phi, psi)
        gamma_upper = gamma_fit
    else:
        fvf = vf.with_mode("float")
        gamma_fit = joint_majorant(solve_stable(fvf, n1), solve_unstable(fvf, n1))
        gamma_upper = joint_majorant(phi, psi)

    fallback = False
    try:
        C, M = fit_geometric_bound(gamma_fit, n1)
        r_candidate = 1.0 / M
    except DegenerateWindow:
        fallback = True
        C, M = max(gamma_fit, default=0.0), 1.0
        r_candidate = r_cap

    chat = fhat_coeffs(vf, rho)
    r, its = verify_radius(spectrum, vf, r_candidate, rho, chat)
    A = quadratic_bound(vf, 2 * r, rho, chat)
    delta = sigma_coeffs(chat, spectrum.omega, n1, a)
    # Cauchy estimate on the verified disk: delta_k <= r^(1-k)
    cauchy_ok = all(_below_power(a.upper(delta[k]), r, 1 - k) for k in range(2, n1 + 1))
    majorants = MajorantData(gamma_fit, chat, rho, n1 // 2, gamma_upper, delta)
    return Certificate(
        n1=n1,
        r_theta=r,
        C=C,
        M=M,
        omega=spectrum.omega,
        A=A,
        shrink_iterations=its,
        mode=a.name,
        rho=rho,
        N=spectrum.N,
        lam=spectrum.stable,
        mu=spectrum.unstable,
        fallback=fallback,
        cauchy_ok=cauchy_ok,
        stable=phi,
        unstable=psi,
        majorants=majorants,
    )
