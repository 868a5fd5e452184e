import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phasekit.basis import BasisParams
from phasekit.diffop import (
    DiffOpExpr,
    Polynomial,
    apply_to_polynomial,
    build_p_frak,
    build_p_hat,
    build_x_frak,
    build_x_hat,
    build_z_hat_1d,
    commutator,
    compose,
    derived_p_frak,
    derived_x_frak,
    render,
)
from phasekit.multidim import ParamTensors, build_dispersion_generators

E = DiffOpExpr
coeffs = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@st.composite
def powers(draw, dim, slots, max_degree=3):
    pw = [[0] * dim for _ in range(slots)]
    for _ in range(draw(st.integers(0, max_degree))):
        pw[draw(st.integers(0, slots - 1))][draw(st.integers(0, dim - 1))] += 1
    return pw


@st.composite
def exprs(draw, dim):
    out = E.zero(dim)
    for _ in range(draw(st.integers(1, 3))):
        out = out + E.monomial(dim, draw(coeffs), *draw(powers(dim, 4)))
    return out


@st.composite
def polys(draw, dim):
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        xp, pp = draw(powers(dim, 2))
        terms[(tuple(xp), tuple(pp))] = draw(coeffs)
    return Polynomial(dim, terms)


@st.composite
def triples(draw):
    dim = draw(st.integers(1, 2))
    return dim, draw(exprs(dim)), draw(exprs(dim)), draw(exprs(dim)), draw(polys(dim))


def scale(*es):
    return max([1.0] + [abs(c) for e in es for _, c in e.items()])


@given(triples())
def test_composition_is_associative(t):
    _, A, B, C, _ = t
    lhs, rhs = (A @ B) @ C, A @ (B @ C)
    assert lhs.max_abs_diff(rhs) <= 1e-10 * scale(lhs, rhs)


@given(triples())
def test_composition_is_action_homomorphism(t):
    _, A, B, _, q = t
    one = apply_to_polynomial(A @ B, q)
    two = apply_to_polynomial(A, apply_to_polynomial(B, q))
    s = max([1.0] + [abs(c) for c in one.terms.values()])
    assert one.max_abs_diff(two) <= 1e-10 * s


@given(triples())
def test_jacobi_identity(t):
    dim, A, B, C, _ = t
    J = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) + commutator(C, commutator(A, B))
    assert J.max_abs_diff(E.zero(dim)) <= 1e-10 * scale(A @ B @ C)


@given(triples())
def test_commutator_antisymmetric_and_bilinear(t):
    dim, A, B, C, _ = t
    assert (commutator(A, B) + commutator(B, A)).max_abs_diff(E.zero(dim)) <= 1e-12 * scale(A @ B)
    lhs = commutator(A, 2.0 * B - C)
    rhs = 2.0 * commutator(A, B) - commutator(A, C)
    assert lhs.max_abs_diff(rhs) <= 1e-10 * scale(lhs)


@given(triples())
def test_evaluation_of_action_at_points(t):
    # the exact action agrees with the polynomial evaluated after applying term by term
    dim, A, _, _, q = t
    r = apply_to_polynomial(A, q)
    pts = ([0.3] * dim, [-0.7] * dim)
    direct = sum(apply_to_polynomial(E(dim, {k: c}), q)(*pts) for k, c in A.items())
    assert abs(r(*pts) - direct) <= 1e-10 * max(1.0, abs(direct))


def test_leibniz_closed_forms():
    assert (E.dX() @ E.X()) == E.identity() + E.X() @ E.dX()
    lhs = E.monomial(1, 1.0, dppow=[2]) @ E.monomial(1, 1.0, ppow=[2])
    rhs = 2.0 * E.identity() + 4.0 * E.monomial(1, 1.0, ppow=[1], dppow=[1]) + E.monomial(1, 1.0, ppow=[2], dppow=[2])
    assert lhs == rhs
    # d^3 X^3 = 6 + 18 X d + 9 X^2 d^2 + X^3 d^3
    lhs = E.monomial(1, 1.0, dxpow=[3]) @ E.monomial(1, 1.0, xpow=[3])
    assert lhs.coeff() == 6 and lhs.coeff([1], None, [1]) == 18 and lhs.coeff([2], None, [2]) == 9


def test_variables_on_different_axes_commute():
    assert commutator(E.dX(2, 0), E.X(2, 1)).is_zero()
    assert commutator(E.dP(2, 1), E.P(2, 1)) == E.identity(2)


PARAMS = BasisParams(0.3, -0.2, 0.7, 1.3)


@pytest.mark.parametrize("alpha", [-1.0, -0.3, 0.0, 0.5, 2.0])
@pytest.mark.parametrize("beta", [None, 3.0, -0.7])
@pytest.mark.parametrize("convention", ["section2", "section4"])
def test_frak_commutator_for_any_alpha_beta(alpha, beta, convention):
    ab = alpha if beta is None else (alpha, beta)
    C = commutator(build_x_frak(PARAMS, ab, convention), build_p_frak(PARAMS, ab, convention))
    target = 1j if convention == "section2" else -1j
    assert C.max_abs_diff(target * E.identity()) < 1e-13


@pytest.mark.parametrize("alpha", [-1.0, 0.5, 2.0])
def test_hat_commutator_linked(alpha):
    C = commutator(build_x_hat(PARAMS, alpha), build_p_hat(PARAMS, alpha))
    assert C.max_abs_diff(1j * PARAMS.hbar * E.identity()) < 1e-13


@pytest.mark.parametrize("alpha,beta", [(0.5, 3.0), (-1.0, 0.2), (2.0, -0.7)])
def test_hat_commutator_unlinked_residual(alpha, beta):
    C = commutator(build_x_hat(PARAMS, (alpha, beta)), build_p_hat(PARAMS, (alpha, beta)))
    residual = np.sqrt(2) * (PARAMS.a * alpha - PARAMS.ell * beta)
    assert C.max_abs_diff((1j * PARAMS.hbar + residual) * E.identity()) < 1e-13


@pytest.mark.parametrize("origin", ["x", "x-X"])
def test_derived_pair_commutator(origin):
    p = BasisParams(0.3, -0.2, 0.7, 1.3, origin)
    C = commutator(derived_x_frak(p), derived_p_frak(p))
    assert C.max_abs_diff(-1j * E.identity()) < 1e-13


def test_z_hat_1d_matches_one_dimensional_tensors():
    t = ParamTensors([[PARAMS.a]], [[PARAMS.ell]], [1.0], PARAMS.hbar)
    g = build_dispersion_generators(t, 0, 0)
    for mine, ref in zip(build_z_hat_1d(PARAMS), (g.z_plus, g.z_minus, g.z_cross)):
        assert mine.max_abs_diff(ref) < 1e-14


def test_render_is_deterministic_and_graded():
    expr = build_x_frak(BasisParams(a=0.5), 0.25)
    text = render(expr)
    assert text == render(build_x_frak(BasisParams(a=0.5), 0.25))
    assert text == "-0.5 * P + 0.25 * dP + -0.5j * dX"
    assert render(E.zero()) == "0"
    assert render(2.0 * E.X(2, 1)) == "2.0 * X1"


def test_expression_basics():
    a = E.X() + 2.0 * E.dP()
    assert a.order == 1 and a.degree == 1
    assert (a - a).is_zero()
    assert (a / 2.0).coeff(None, None, None, [1]) == 1.0
    with pytest.raises(ValueError):
        E.X(1) + E.X(2)
    with pytest.raises(AttributeError):
        a.dim = 3
