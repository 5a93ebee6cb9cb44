"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (output capture is off in the
project config, so the verdict lines appear in the log).
"""
import math
import time
from fractions import Fraction

import pytest

from conftest import load
from oracles import planar_exact, pure_sums
from saddlecert.certificate import build_certificate, fhat_coeffs, remainder_bound
from saddlecert.corpus import random_corpus
from saddlecert.errors import ResonanceDetected
from saddlecert.scalar import INTERVAL
from saddlecert.solver import invariance_residual, solve_stable, solve_unstable
from saddlecert.spectrum import verify_spectrum

N1 = 81


def verdict(number, ok, text):
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")


@pytest.fixture(scope="module")
def planar():
    return load("planar.txt")


@pytest.fixture(scope="module")
def planar_iv():
    return load("planar.txt", "interval")


@pytest.fixture(scope="module")
def cert(planar):
    return build_certificate(planar, N1)


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(seed=2024, size=10)


def test_criterion_1_planar_reproduction(planar):
    t0 = time.perf_counter()
    c = build_certificate(planar, N1)
    elapsed = time.perf_counter() - t0
    ok = 0.021 <= c.r_theta <= 0.026 and 2.55 <= c.M <= 2.85 and 0.18 <= c.C <= 0.45 and elapsed < 60
    verdict(1, ok, f"r_theta={c.r_theta:.5f} in [0.021,0.026], M={c.M:.4f} in [2.55,2.85], "
                   f"C={c.C:.4f} in [0.18,0.45], runtime {elapsed:.2f}s < 60s")
    assert ok


def test_criterion_2_radius_check(cert, planar):
    chat = fhat_coeffs(planar, 3)
    omega = Fraction(1, 5)
    c2, c3 = Fraction(chat[2]), Fraction(chat[3])
    # r = Omega / (4 (c2 + 2 c3 r))  <=>  8 c3 r^2 + 4 c2 r - Omega = 0
    a, b = 8 * c3, 4 * c2
    fixed = (-float(b) + math.sqrt(float(b * b + 4 * a * omega))) / (2 * float(a))
    rel = abs(cert.r_theta - fixed) / fixed
    r = Fraction(cert.r_theta)
    A = c2 + c3 * 2 * r
    holds = r <= omega / (4 * A)
    ok = rel < 0.05 and holds and chat[2] == 2 and chat[3] == 2
    verdict(2, ok, f"r_theta={cert.r_theta:.5f} vs fixed point {fixed:.5f} (rel. gap {rel:.3%} < 5%); "
                   f"exact re-check r <= Omega/(4 A_2r): {holds}")
    assert ok


def test_criterion_3_low_order_coefficients(planar):
    phi, psi = solve_stable(planar, 3), solve_unstable(planar, 3)
    checks = [
        (phi.coeffs[(2,)][0], -2.5),
        (phi.coeffs[(3,)][0], 6.25),
        (phi.coeffs[(3,)][1], 10 / 27),
        (psi.coeffs[(2,)][0], 5 / 17),
        (psi.coeffs[(2,)][1], 0.0),
        (psi.coeffs[(3,)][1], 1 / 3),
    ]
    err = max(abs(got - want) for got, want in checks)
    ok = err <= 1e-12
    verdict(3, ok, f"six hand-derived alpha/beta values, max abs error {err:.2e} <= 1e-12")
    assert ok


def _max_relative_residual(vf, param):
    worst = 0.0
    res = invariance_residual(vf, param)
    for k in range(2, param.n1 + 1):
        scale = max(abs(c) for v in param.order_slice(k).values() for c in v)
        for r in res:
            for v in r.part(k).values():
                worst = max(worst, abs(v) / (scale if scale > 0 else 1.0))
    return worst


def test_criterion_4_invariance_residual(planar, corpus):
    systems = [planar] + corpus
    worst = 0.0
    zero_inside = True
    for vf in systems:
        ivf = vf.with_mode("interval")
        for solve in (solve_stable, solve_unstable):
            worst = max(worst, _max_relative_residual(vf, solve(vf, 20)))
            for r in invariance_residual(ivf, solve(ivf, 20)):
                zero_inside &= all(INTERVAL.contains(v, 0) for v in r.coeffs.values())
    ok = worst < 1e-9 and zero_inside
    verdict(4, ok, f"n1=20 on planar + {len(corpus)} random saddles: max relative residual {worst:.2e} < 1e-9; "
                   f"every interval residual contains 0: {zero_inside}")
    assert ok


def _majorant_chain(c):
    m = c.majorants
    delta_ge_gamma = all(m.delta[k] >= m.gamma_upper[k] for k in range(2, c.n1 + 1))
    window = [k for k in range(c.n1 // 2 + 1, c.n1 + 1) if m.gamma[k] > 0]
    fit_ok = all(m.gamma[k] <= c.C * c.M**k for k in window)
    partial = 0.0
    sums_ok = True
    for k in range(2, c.n1 + 1):
        partial += m.delta[k] * c.r_theta**k
        sums_ok &= partial <= c.r_theta
    return delta_ge_gamma, fit_ok, sums_ok


def test_criterion_5_majorant_chain(cert, corpus):
    results = [_majorant_chain(cert)] + [_majorant_chain(build_certificate(vf, 30)) for vf in corpus]
    flags = [all(col) for col in zip(*results)]
    ok = all(flags)
    verdict(5, ok, f"planar (n1={N1}) + {len(corpus)} random saddles (n1=30): delta_k >= gamma_k: {flags[0]}, "
                   f"gamma_k <= C M^k on window: {flags[1]}, sum delta_k r^k <= r: {flags[2]}")
    assert ok


def test_criterion_6_resonance_gate():
    try:
        verify_spectrum(["-2", "-1"], ["1"])
        relation = None
    except ResonanceDetected as exc:
        relation = exc.relation
    n_planar = verify_spectrum(["-0.4"], ["1.5"]).N
    n_two = verify_spectrum(["-2.5", "-1"], ["1"]).N
    ok = relation == "2*lambda_1 = lambda_2" and n_planar == 1 and n_two == 3
    verdict(6, ok, f"(-2,-1),(1) rejected with '{relation}'; planar N={n_planar}; (-2.5,-1),(1) N={n_two}")
    assert ok


def test_criterion_7_omega_oracle(corpus):
    spectra = [(["-0.4"], ["1.5"]), (["-2.5", "-1"], ["1"])] + [(vf.stable, vf.unstable) for vf in corpus]
    checked = 0
    ok = True
    for lam, mu in spectra:
        s = verify_spectrum(lam, mu)
        omega = Fraction(s.omega)
        nus = s.values
        for side in (s.stable, s.unstable):
            for k, sums in pure_sums(list(side), 200).items():
                if k < 2:
                    continue
                for value in sums:
                    for nu in nus:
                        checked += 1
                        ok &= abs(value - nu) >= omega * k
    verdict(7, ok, f"{len(spectra)} accepted spectra, {checked} exact (m, nu) checks up to |m|=200: "
                   "|m.(lambda,mu) - nu| >= Omega |m|")
    assert ok


def test_criterion_8_interval_soundness(planar, planar_iv, cert):
    ci = build_certificate(planar_iv, N1)
    a = INTERVAL
    contained = True
    for fp, ip in ((cert.stable, ci.stable), (cert.unstable, ci.unstable)):
        for q, v in fp.coeffs.items():
            contained &= all(a.contains(iv, x) for x, iv in zip(v, ip.coeffs[q]))
    contained &= a.contains(ci.omega, cert.omega) and a.contains(ci.A, cert.A)
    contained &= (ci.r_theta, ci.C, ci.M) == (cert.r_theta, cert.C, cert.M) and ci.verified()

    widest, widest_k, first_over = 0.0, None, None
    for ip in (ci.stable, ci.unstable):
        for q, v in ip.coeffs.items():
            k = sum(q)
            if k > 30:
                continue
            for iv in v:
                w = a.width(iv)
                if w > widest:
                    widest, widest_k = w, k
                if w >= 1e-6 and (first_over is None or k < first_over):
                    first_over = k
    narrow = widest < 1e-6

    # any sound interval must also contain the exact value, so its width is at
    # least |float - exact|; measure that gap on the stable side
    exact = planar_exact(30)
    gap = max(abs(Fraction(cert.stable.coeffs[(k,)][i]) - exact[k][i]) for k in exact for i in range(2))
    ok = contained and narrow
    verdict(8, ok, f"float values inside intervals: {contained}; widths up to order 30 < 1e-6: {narrow} "
                   f"(widest {widest:.3g} at order {widest_k}, first >= 1e-6 at order {first_over}; "
                   f"|float - exact| already reaches {float(gap):.3g} by order 30)")
    assert contained
    assert narrow


def test_criterion_9_remainder(cert):
    r, n1 = cert.r_theta, cert.n1
    at_zero = remainder_bound(cert, 0.0) == 0
    at_half = remainder_bound(cert, r / 2) == r * 2.0**-n1
    grid = [r * i / 1000 for i in range(1000)]
    values = [remainder_bound(cert, t) for t in grid]
    monotone = all(b >= a for a, b in zip(values, values[1:])) and values[-1] > values[1]
    pole = remainder_bound(cert, r) == math.inf
    ok = at_zero and at_half and monotone and pole
    verdict(9, ok, f"R(0)=0: {at_zero}; R(r/2)=r 2^-n1 exactly: {at_half}; "
                   f"increasing on [0,r): {monotone}; R(r)=inf: {pole}")
    assert ok
