import numpy as np
import pytest

from phasekit.basis import BasisParams, basis_wavefunctions, gauss_hermite
from phasekit.matrices import (
    TridiagonalOperator,
    commutator,
    dispersion_matrices,
    hermitian_part,
    ladder_minus,
    ladder_plus,
    nonzero_entries,
    p_frak_matrix,
    p_matrix,
    x_frak_matrix,
    x_matrix,
    z_generators_1d,
)

PARAMS = BasisParams(X=0.3, P=-0.2, a=0.7, hbar=1.3)


def quadrature_elements(params, N, h=1e-5):
    """<n|x|m> and <n|p|m> from the basis functions themselves."""
    rule = gauss_hermite(80)
    s = np.sqrt(2.0) * params.a
    x = params.X + s * rule.nodes
    w = rule.unweighted() * s
    phi = basis_wavefunctions(N - 1, x, params)
    dphi = (basis_wavefunctions(N - 1, x + h, params) - basis_wavefunctions(N - 1, x - h, params)) / (2 * h)
    X = (phi.conj() * w) @ (x * phi).T
    P = (phi.conj() * w) @ (-1j * params.hbar * dphi).T
    return X, P


@pytest.mark.parametrize("origin", ["x", "x-X"])
def test_tridiagonals_are_true_matrix_elements(origin):
    params = BasisParams(0.3, -0.2, 0.7, 1.3, origin)
    X, P = quadrature_elements(params, 8)
    np.testing.assert_allclose(x_matrix(params, 8).to_dense(), X, atol=1e-12)
    np.testing.assert_allclose(p_matrix(params, 8).to_dense(), P, atol=1e-7)


def test_frak_matrices_structure():
    p, x = p_frak_matrix(6), x_frak_matrix(6)
    assert p.is_hermitian() and x.is_hermitian()
    assert np.all(p.to_dense().imag == 0)
    assert np.all(x.to_dense().real == 0)
    # <n-1|xi|n> = +i sqrt(n/2)
    assert x.to_dense()[2, 3] == pytest.approx(1j * np.sqrt(1.5))


def test_ladders_from_frak_pair():
    N = 7
    p, x = p_frak_matrix(N).to_dense(), x_frak_matrix(N).to_dense()
    np.testing.assert_allclose(ladder_minus(N).to_dense(), (p - 1j * x) / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(ladder_plus(N).to_dense(), (p + 1j * x) / np.sqrt(2), atol=1e-15)
    C = commutator(ladder_minus(N), ladder_plus(N))
    np.testing.assert_allclose(np.diag(C)[:-1], 1.0, atol=1e-14)
    assert C[-1, -1] == pytest.approx(-(N - 1))


@pytest.mark.parametrize("N", [4, 8, 16, 32])
def test_commutator_defect_confined_to_corner(N):
    C = commutator(x_matrix(PARAMS, N), p_matrix(PARAMS, N))
    expected = 1j * PARAMS.hbar * np.eye(N)
    expected[-1, -1] = -1j * PARAMS.hbar * (N - 1)
    np.testing.assert_allclose(C, expected, atol=1e-12)


def test_flipped_orientation_breaks_commutator():
    C = commutator(x_matrix(PARAMS, 6, orientation=-1), p_matrix(PARAMS, 6))
    assert abs(C[0, 0] + 1j * PARAMS.hbar) < 1e-12


def test_dispersion_interior_diagonal():
    N = 32
    sx, sp = dispersion_matrices(PARAMS, N)
    n = np.arange(N - 2)
    np.testing.assert_allclose(np.diag(sx)[: N - 2], (2 * n + 1) * PARAMS.a**2, rtol=1e-12)
    np.testing.assert_allclose(np.diag(sp)[: N - 2], (2 * n + 1) * PARAMS.ell**2, rtol=1e-12)
    off = sx[: N - 2, : N - 2] - np.diag(np.diag(sx)[: N - 2])
    assert np.abs(off).max() < 1e-12


def test_z_generators_against_ladder_products():
    N = 10
    zp, zm, zx = z_generators_1d(N)
    lo, hi = ladder_minus(N).to_dense(), ladder_plus(N).to_dense()
    inner = slice(0, N - 2)
    # z+ = (z- z+ + z+ z-)/4 on the untruncated block
    np.testing.assert_allclose(np.diag(zp)[inner], (2 * np.arange(N - 2) + 1) / 4, atol=1e-14)
    ref_m = (lo @ lo + hi @ hi) / 4
    ref_x = 1j * (lo @ lo - hi @ hi) / 4
    np.testing.assert_allclose(zm[inner, inner], ref_m[inner, inner], atol=1e-14)
    np.testing.assert_allclose(zx[inner, inner], ref_x[inner, inner], atol=1e-14)
    assert zm[1, 3] == pytest.approx(np.sqrt(6) / 4)


def test_tridiagonal_matvec_and_errors():
    T = x_matrix(PARAMS, 5)
    v = np.arange(5, dtype=complex)
    np.testing.assert_allclose(T @ v, T.to_dense() @ v)
    np.testing.assert_allclose(np.asarray(T), T.to_dense())
    assert T.H.is_hermitian()
    with pytest.raises(ValueError):
        TridiagonalOperator(np.zeros(3), np.zeros(3), np.zeros(2))
    with pytest.raises(ValueError):
        commutator(np.eye(3), np.eye(4))
    with pytest.raises(ValueError):
        p_frak_matrix(1)


def test_nonzero_entries_and_hermitian_part():
    M = np.array([[1, 2j], [0, 0]])
    assert nonzero_entries(M) == [(0, 0, 1.0, 0.0), (0, 1, 0.0, 2.0)]
    H = hermitian_part(M)
    np.testing.assert_allclose(H, H.conj().T)
