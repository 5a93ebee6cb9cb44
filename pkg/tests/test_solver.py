from fractions import Fraction

import pytest

from conftest import load
from oracles import planar_exact
from saddlecert.corpus import random_corpus
from saddlecert.errors import OrderTooSmall
from saddlecert.scalar import INTERVAL
from saddlecert.series import IndexClass, PolySeries, classify, compose_truncated, series_multiply
from saddlecert.solver import VectorField, invariance_residual, normal_form_tail, solve_stable, solve_unstable


def test_low_order_stable_coefficients(planar):
    phi = solve_stable(planar, 5)
    assert phi.coeffs[(2,)][0] == pytest.approx(-2.5, abs=1e-12)
    assert phi.coeffs[(3,)][0] == pytest.approx(6.25, abs=1e-12)
    assert phi.coeffs[(3,)][1] == pytest.approx(10 / 27, abs=1e-12)


def test_low_order_unstable_coefficients(planar):
    psi = solve_unstable(planar, 5)
    assert psi.coeffs[(2,)][0] == pytest.approx(5 / 17, abs=1e-12)
    assert psi.coeffs[(2,)][1] == 0
    assert psi.coeffs[(3,)][1] == pytest.approx(1 / 3, abs=1e-12)


def test_every_index_present_and_pure(planar):
    phi = solve_stable(planar, 12)
    assert set(phi.coeffs) == {(k,) for k in range(2, 13)}
    for q in phi.coeffs:
        assert classify(phi.full_index(q), planar.ds) is IndexClass.STABLE
    psi = solve_unstable(planar, 12)
    for q in psi.coeffs:
        assert classify(psi.full_index(q), planar.ds) is IndexClass.UNSTABLE


def test_no_linear_part(planar):
    for param in (solve_stable(planar, 8), solve_unstable(planar, 8)):
        assert all(s.min_order() is None or s.min_order() >= 2 for s in param.series())


def test_lower_orders_do_not_move_when_n1_grows(planar):
    short, long = solve_stable(planar, 30), solve_stable(planar, 60)
    for q, v in short.coeffs.items():
        assert long.coeffs[q] == v


@pytest.mark.parametrize("solve, side", [(solve_stable, "stable"), (solve_unstable, "unstable")])
def test_coefficients_match_exact_recursion(planar, planar_iv, solve, side):
    exact = planar_exact(25, side)
    fl, iv = solve(planar, 25), solve(planar_iv, 25)
    for k, pair in exact.items():
        for i, q in enumerate(pair):
            lo, hi = INTERVAL.bounds(iv.coeffs[(k,)][i])
            assert Fraction(lo) <= q <= Fraction(hi)
            assert abs(fl.coeffs[(k,)][i] - float(q)) <= 1e-13 * max(1.0, abs(float(q)))


def _relative_residual(vf, param):
    worst = 0.0
    res = invariance_residual(vf, param)
    for k in range(2, param.n1 + 1):
        scale = max(abs(c) for v in param.order_slice(k).values() for c in v)
        for r in res:
            for q, v in r.part(k).items():
                worst = max(worst, abs(v) / (scale if scale > 0 else 1.0))
    return worst


def test_planar_residual_vanishes(planar):
    for solve in (solve_stable, solve_unstable):
        assert _relative_residual(planar, solve(planar, 20)) < 1e-9


@pytest.mark.parametrize("idx", range(10))
def test_random_residuals_vanish(idx):
    vf = random_corpus()[idx]
    for solve in (solve_stable, solve_unstable):
        assert _relative_residual(vf, solve(vf, 20)) < 1e-9


def test_interval_residual_contains_zero(planar_iv):
    for solve in (solve_stable, solve_unstable):
        for r in invariance_residual(planar_iv, solve(planar_iv, 20)):
            assert all(INTERVAL.contains(v, 0) for v in r.coeffs.values())


def test_linear_system_gives_zero_manifolds():
    vf = VectorField((Fraction(-1),), (Fraction(2),), {})
    phi = solve_stable(vf, 10)
    assert all(c == 0 for v in phi.coeffs.values() for c in v)
    assert all(not r.coeffs or all(c == 0 for c in r.coeffs.values()) for r in invariance_residual(vf, phi))


def test_order_below_N_is_rejected():
    vf = VectorField((Fraction(-5, 2), Fraction(-1)), (Fraction(1),), {(0, (0, 2, 0)): Fraction(1)})
    with pytest.raises(OrderTooSmall):
        solve_stable(vf, 2)
    assert solve_stable(vf, 3).n1 == 3


def test_normal_form_examples(planar):
    phi, psi = solve_stable(planar, 6), solve_unstable(planar, 6)
    G = normal_form_tail(planar, phi, psi, 4)
    assert G.coeffs[(1, 1)][0] == 0
    assert G.coeffs[(1, 2)][0] == pytest.approx(2 * 5 / 17, abs=1e-12)
    assert all(G.coeffs[m][1] == 0 for m in G.coeffs if sum(m) == 3)
    assert all(sum(m[:1]) >= 1 and sum(m[1:]) >= 1 for m in G.coeffs)


@pytest.mark.parametrize("name, n", [("planar.txt", 6), ("saddle3d.txt", 4)])
def test_conjugacy_equation(name, n):
    # D Theta (Lambda z + G) = Lambda Theta + F(Theta) up to order n
    vf = load(name)
    d = vf.d
    phi, psi = solve_stable(vf, n), solve_unstable(vf, n)
    G = normal_form_tail(vf, phi, psi, n)
    theta = [
        a + b + PolySeries.variable(d, j, n)
        for j, (a, b) in enumerate(zip(phi.embedded(), psi.embedded()))
    ]
    eig = [float(v) for v in vf.stable + vf.unstable]
    lin = [PolySeries.variable(d, j, n).scale(eig[j]) + G.component(j, d) for j in range(d)]
    FT = compose_truncated(vf.F, theta, n)
    for i in range(d):
        lhs = PolySeries.zero(d, n)
        for j in range(d):
            lhs = lhs + series_multiply(theta[i].derivative(j), lin[j], n)
        rhs = theta[i].scale(eig[i]) + FT[i]
        diff = lhs - rhs
        assert all(abs(c) < 1e-10 for c in diff.coeffs.values())


def test_pullback_is_linear_on_eigenspaces(planar):
    G = normal_form_tail(planar, solve_stable(planar, 5), solve_unstable(planar, 5), 5)
    for i in range(2):
        g = G.component(i, 2)
        assert g.evaluate([0.3, 0.0]) == 0
        assert g.evaluate([0.0, 0.3]) == 0


def test_normal_form_order_guard(planar):
    with pytest.raises(OrderTooSmall):
        normal_form_tail(planar, solve_stable(planar, 3), solve_unstable(planar, 3), 4)
