from math import factorial

import mpmath
import numpy as np
import pytest
from scipy import integrate

from phasekit.basis import (
    BasisParams,
    basis_wavefunction,
    basis_wavefunctions,
    gauss_hermite,
    hermite,
    hermite_function,
    hermite_functions,
    quadrature_size,
)


def hermite_series(n, u):
    """Explicit sum n! sum_m (-1)^m (2u)^(n-2m) / (m! (n-2m)!)."""
    return factorial(n) * sum(
        (-1) ** m * (2 * u) ** (n - 2 * m) / (factorial(m) * factorial(n - 2 * m))
        for m in range(n // 2 + 1)
    )


@pytest.mark.parametrize("n", range(9))
def test_hermite_matches_series(n):
    for u in (-2.1, 0.0, 0.4, 1.3):
        assert hermite(n, u) == pytest.approx(hermite_series(n, u), rel=1e-13, abs=1e-13)


def test_hermite_5_at_1_3():
    # 32 u^5 - 160 u^3 + 120 u
    u = 1.3
    assert hermite(5, u) == pytest.approx(32 * u**5 - 160 * u**3 + 120 * u, rel=1e-14)


def test_hermite_function_high_index_against_mpmath():
    mpmath.mp.dps = 60
    n, u = 300, 10.0
    ref = mpmath.hermite(n, u) * mpmath.exp(-u * u / 2) / mpmath.sqrt(
        mpmath.mpf(2) ** n * mpmath.factorial(n) * mpmath.sqrt(mpmath.pi)
    )
    assert hermite_function(n, u) == pytest.approx(float(ref), rel=1e-10)


def test_hermite_functions_shape_and_rows():
    u = np.linspace(-3, 3, 7).reshape(7, 1)
    h = hermite_functions(4, u)
    assert h.shape == (5, 7, 1)
    for n in range(5):
        np.testing.assert_allclose(h[n], hermite_function(n, u), rtol=1e-14, atol=1e-15)


def test_gauss_hermite_integrates_polynomials_exactly():
    rule = gauss_hermite(10)
    # int u^4 exp(-u^2) du = 3 sqrt(pi) / 4
    assert rule.integrate(lambda u: u**4) == pytest.approx(3 * np.sqrt(np.pi) / 4, rel=1e-14)
    assert len(rule) == 10
    assert quadrature_size(20) == 48


def test_gauss_hermite_rejects_empty_rule():
    with pytest.raises(ValueError):
        gauss_hermite(0)


@pytest.mark.parametrize("origin", ["x", "x-X"])
def test_orthonormality_against_adaptive_quadrature(origin):
    p = BasisParams(X=0.4, P=-1.1, a=0.8, hbar=1.3, phase_origin=origin)
    pairs = [(0, 0), (0, 1), (2, 2), (3, 5), (4, 4), (1, 3)]
    for m, n in pairs:
        f = lambda x: np.conj(basis_wavefunction(m, x, p)) * basis_wavefunction(n, x, p)
        re = integrate.quad(lambda x: f(x).real, -15, 15, limit=200)[0]
        im = integrate.quad(lambda x: f(x).imag, -15, 15, limit=200)[0]
        assert abs(complex(re, im) - (m == n)) < 1e-9


def test_ground_state_variance_is_a_squared():
    p = BasisParams(X=0.3, P=0.5, a=0.6)
    dens = lambda x: abs(basis_wavefunction(0, x, p)) ** 2
    var = integrate.quad(lambda x: (x - p.X) ** 2 * dens(x), -10, 10)[0]
    assert var == pytest.approx(p.a**2, rel=1e-10)


def test_momentum_width_from_duality():
    p = BasisParams(a=0.4, hbar=2.0)
    assert p.ell == pytest.approx(2.5)
    assert p.a * p.ell == pytest.approx(p.hbar / 2)


def test_leading_phase_convention():
    # chi_n(X) carries i^n times the real Hermite function at u = 0
    p = BasisParams(X=0.0, P=0.0, a=1.0)
    x = np.array([0.0])
    phi = basis_wavefunctions(2, x, p)[:, 0]
    h0 = hermite_function(0, 0.0) / np.sqrt(np.sqrt(2.0))
    h2 = hermite_function(2, 0.0) / np.sqrt(np.sqrt(2.0))
    np.testing.assert_allclose(phi, [h0, 0.0, -h2], atol=1e-15)


def test_phase_origin_changes_only_a_global_phase():
    kw = dict(X=1.2, P=0.7, a=0.9)
    x = np.linspace(-2, 4, 11)
    a = basis_wavefunctions(3, x, BasisParams(**kw, phase_origin="x"))
    b = basis_wavefunctions(3, x, BasisParams(**kw, phase_origin="x-X"))
    np.testing.assert_allclose(a, b * np.exp(1j * 0.7 * 1.2), atol=1e-14)


@pytest.mark.parametrize(
    "kw",
    [dict(a=0.0), dict(a=-1.0), dict(hbar=0.0), dict(phase_origin="y")],
)
def test_invalid_params_rejected(kw):
    with pytest.raises(ValueError):
        BasisParams(**kw)


def test_shifted_and_dict():
    p = BasisParams(X=1.0, P=2.0, a=0.5, hbar=1.5)
    q = p.shifted(P=-1.0)
    assert (q.X, q.P, q.a) == (1.0, -1.0, 0.5)
    assert p.to_dict()["hbar"] == 1.5
