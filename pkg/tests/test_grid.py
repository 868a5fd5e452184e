import numpy as np
import pytest

from phasekit.basis import BasisParams
from phasekit.diffop import DiffOpExpr, derived_p_frak, derived_x_frak
from phasekit.grid import (
    FieldStack,
    apply_fd,
    apply_fd_nd,
    apply_recurrence_p,
    apply_recurrence_x,
    convergence_order,
    derivative,
    field_stack,
    route_consistency_report,
)
from phasekit.transform import AnalyticWaveFunction, GaussianPacket, PhaseSpaceGrid, forward_coeffs

E = DiffOpExpr


def grid_mesh(n=9):
    g = PhaseSpaceGrid(-1.0, 2.0, n, -0.5, 1.5, n + 2)
    X, P = g.mesh()
    return g, X, P


def test_stencils_exact_on_quadratics():
    g, X, P = grid_mesh()
    f = 1 + 2 * X - 3 * P + X**2 - 0.5 * X * P + 4 * P**2
    np.testing.assert_allclose(derivative(f, g, 1, 0), 2 + 2 * X - 0.5 * P, atol=1e-12)
    np.testing.assert_allclose(derivative(f, g, 0, 1), -3 - 0.5 * X + 8 * P, atol=1e-12)
    np.testing.assert_allclose(derivative(f, g, 2, 0), 2.0, atol=1e-10)
    np.testing.assert_allclose(derivative(f, g, 0, 2), 8.0, atol=1e-10)
    np.testing.assert_allclose(derivative(f, g, 1, 1), -0.5, atol=1e-12)


def test_second_difference_exact_on_cubics_including_boundary():
    g, X, P = grid_mesh()
    np.testing.assert_allclose(derivative(X**3, g, 2, 0), 6 * X, atol=1e-9)


def test_stencil_convergence_order():
    errs, hs = [], []
    for n in (21, 41):
        g = PhaseSpaceGrid(0.0, 2.0, n, 0.0, 1.0, n)
        X, P = g.mesh()
        f = np.sin(2 * X) * np.cos(P)
        errs.append(np.abs(derivative(f, g, 2, 0) + 4 * f).max())
        hs.append(g.hX)
    assert 1.7 <= convergence_order(errs[0], errs[1], hs[0], hs[1]) <= 2.3


def test_stencil_errors():
    g, X, _ = grid_mesh()
    with pytest.raises(ValueError):
        derivative(X, g, 2, 1)
    tiny = PhaseSpaceGrid(0, 1, 4, 0, 1, 4)
    with pytest.raises(ValueError):
        derivative(np.zeros((4, 4)), tiny, 1, 0)


def test_apply_fd_nd_agrees_with_one_dimensional_path():
    g, X, P = grid_mesh(11)
    psi = np.exp(-(X**2) - 0.5 * P**2 + 0.3j * X * P)
    expr = 0.5 * E.X() @ E.dP() - 2j * E.monomial(1, 1.0, dxpow=[2]) + E.P()
    field_vals = apply_fd_nd(expr, psi, [g.X], [g.P])
    stack = FieldStack(g, 1.0, psi[None])
    np.testing.assert_allclose(apply_fd(expr, stack.field(0)).values, field_vals, atol=1e-12)


def _operator_oracle(psi, params, n_max, which):
    """<n|xi|psi> or <n|pi|psi> by transforming (x - X) psi or -i hbar psi' directly."""
    h = 1e-5
    if which == "x":
        f = lambda x: (x - params.X) * psi(x) / (np.sqrt(2) * params.a)
    else:
        f = lambda x: (-1j * params.hbar * (psi(x + h) - psi(x - h)) / (2 * h) - params.P * psi(x)) / (
            np.sqrt(2) * params.ell
        )
    return forward_coeffs(AnalyticWaveFunction(f, is_normalized=True), params, n_max).coeffs


@pytest.mark.parametrize("origin", ["x", "x-X"])
def test_recurrences_match_direct_operator_action(origin):
    psi = GaussianPacket(0.5, 0.4, 0.9, 1.2, origin)
    g = PhaseSpaceGrid(-0.5, 0.7, 5, -0.3, 0.9, 5)
    a = 0.7
    stack = field_stack(psi, BasisParams(0, 0, a, 1.2, origin), g, 6)
    i, j = 2, 3
    params = BasisParams(g.X[i], g.P[j], a, 1.2, origin)
    for which, rec in (("x", apply_recurrence_x), ("p", apply_recurrence_p)):
        ref = _operator_oracle(psi, params, 6, which)
        for n in range(6):
            assert abs(rec(stack, n).values[i, j] - ref[n]) < 1e-8


def test_recurrence_index_bounds():
    g = PhaseSpaceGrid(-1, 1, 5, -1, 1, 5)
    stack = field_stack(GaussianPacket(), BasisParams(), g, 3)
    apply_recurrence_p(stack, 2)
    with pytest.raises(IndexError):
        apply_recurrence_x(stack, 3)


@pytest.mark.parametrize("origin", ["x", "x-X"])
def test_derived_operators_reproduce_recurrences_at_second_order(origin):
    params = BasisParams(0.3, -0.2, 0.7, 1.0, origin)
    psi = GaussianPacket(0.3, -0.2, 0.7, 1.0, origin)
    grid = PhaseSpaceGrid.around(0.3, -0.2, 0.7, 1.0, 32, 5.0)
    rep = route_consistency_report(psi, params, grid, 4, representation="derived")
    assert 1.7 <= rep["min_order"] and rep["max_order"] <= 2.3
    assert rep["max_relative_error"] < 0.15
    # refining 32 nodes to 64 shrinks the spacing by 63/31
    assert rep["h_ratio"] == pytest.approx(63 / 31, rel=1e-12)


def test_printed_pair_does_not_track_recurrences():
    params = BasisParams(0.3, -0.2, 0.7)
    psi = GaussianPacket(0.3, -0.2, 0.7)
    grid = PhaseSpaceGrid.around(0.3, -0.2, 0.7, 1.0, 32, 5.0)
    rep = route_consistency_report(psi, params, grid, 4, representation="printed")
    assert rep["max_relative_error"] > 0.1
    assert not rep["passed"]


def test_report_schema():
    params = BasisParams(0.0, 0.0, 1.0)
    grid = PhaseSpaceGrid.around(0.0, 0.0, 1.0, 1.0, 16, 5.0)
    rep = route_consistency_report(GaussianPacket(), params, grid, 3, representation="derived")
    keys = {"representation", "grid", "refined_grid", "tolerance", "entries", "passed", "min_order"}
    assert keys <= set(rep)
    assert {e["op"] for e in rep["entries"]} == {"p", "x"}
    assert {e["n"] for e in rep["entries"]} == {1, 2}
    with pytest.raises(ValueError):
        route_consistency_report(GaussianPacket(), params, grid, 2)
    with pytest.raises(ValueError):
        route_consistency_report(GaussianPacket(), params, grid, 3, representation="other")


def test_derived_operators_explicit_form():
    p = BasisParams(0.0, 0.0, 0.5, 2.0)
    assert derived_x_frak(p).coeff(None, None, None, [1]) == pytest.approx(np.sqrt(2) * p.ell * 1j)
    assert derived_p_frak(p).coeff(None, None, [1], None) == pytest.approx(-np.sqrt(2) * p.a * 1j)
