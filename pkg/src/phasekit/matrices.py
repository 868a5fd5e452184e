"""Truncated matrix representations in the basis ``{|n, X, P, l>}``.

Matrix elements follow ``A[n, m] = <n|A|m>`` (row = bra index).  The
dimensionless operators are

    xi  = (x - X) / (sqrt(2) a),    pi = (p - P) / (sqrt(2) l),

with ``pi`` real symmetric and ``xi`` imaginary antisymmetric, and the ladder
pair ``z- = (pi - i xi) / sqrt(2)``, ``z+ = (pi + i xi) / sqrt(2)``.

Dense products of tridiagonals are plain ``numpy`` arrays.  Truncating at
``N`` states leaves a defect confined to the last row/column of any product
that reaches index ``N``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisParams

__all__ = [
    "TridiagonalOperator",
    "ladder_minus",
    "ladder_plus",
    "p_frak_matrix",
    "x_frak_matrix",
    "x_matrix",
    "p_matrix",
    "commutator",
    "dispersion_matrices",
    "z_generators_1d",
    "nonzero_entries",
    "hermitian_part",
]


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """``N x N`` tridiagonal matrix: ``upper[k] = A[k, k+1]``, ``lower[k] = A[k+1, k]``."""

    diag: np.ndarray
    upper: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=complex)
        upper = np.asarray(self.upper, dtype=complex)
        lower = np.asarray(self.lower, dtype=complex)
        if upper.shape != (len(diag) - 1,) or lower.shape != (len(diag) - 1,):
            raise ValueError("off-diagonals must have length N - 1")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)

    @property
    def N(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.upper, 1) + np.diag(self.lower, -1)

    def __array__(self, dtype=None, copy=None):
        out = self.to_dense()
        return out if dtype is None else out.astype(dtype)

    def matvec(self, v):
        v = np.asarray(v)
        out = self.diag * v
        out[:-1] += self.upper * v[1:]
        out[1:] += self.lower * v[:-1]
        return out

    def __matmul__(self, other):
        other = np.asarray(other)
        if other.ndim == 1:
            return self.matvec(other)
        return self.to_dense() @ other

    def __rmatmul__(self, other):
        return np.asarray(other) @ self.to_dense()

    @property
    def H(self) -> "TridiagonalOperator":
        """Conjugate transpose."""
        return TridiagonalOperator(self.diag.conj(), self.lower.conj(), self.upper.conj())

    def is_hermitian(self) -> bool:
        return bool(
            np.array_equal(self.lower, self.upper.conj())
            and np.array_equal(self.diag.imag, np.zeros(self.N))
        )

    def scaled(self, c, shift=0.0) -> "TridiagonalOperator":
        """``c * A + shift * I``."""
        return TridiagonalOperator(c * self.diag + shift, c * self.upper, c * self.lower)


def _check_size(N, minimum):
    if N < minimum:
        raise ValueError(f"truncation size must be >= {minimum}, got {N}")


def ladder_minus(N) -> TridiagonalOperator:
    """Lowering operator: ``z- |n> = sqrt(n) |n-1>``."""
    _check_size(N, 2)
    root = np.sqrt(np.arange(1, N))
    return TridiagonalOperator(np.zeros(N), root, np.zeros(N - 1))


def ladder_plus(N) -> TridiagonalOperator:
    """Raising operator: ``z+ |n> = sqrt(n+1) |n+1>``."""
    return ladder_minus(N).H


def p_frak_matrix(N) -> TridiagonalOperator:
    """``<n|pi|m> = (sqrt(m) delta_{n,m-1} + sqrt(m+1) delta_{n,m+1}) / sqrt(2)``."""
    _check_size(N, 2)
    root = np.sqrt(np.arange(1, N) / 2.0)
    return TridiagonalOperator(np.zeros(N), root, root)


def x_frak_matrix(N, orientation=1) -> TridiagonalOperator:
    """``<n|xi|m> = i (sqrt(m) delta_{n,m-1} - sqrt(m+1) delta_{n,m+1}) / sqrt(2)``.

    ``orientation=-1`` transposes the off-diagonal pattern; it exists only to
    demonstrate that the verification suite detects the wrong orientation.
    """
    _check_size(N, 2)
    root = 1j * np.sqrt(np.arange(1, N) / 2.0) * orientation
    return TridiagonalOperator(np.zeros(N), root, -root)


def x_matrix(params: BasisParams, N, orientation=1) -> TridiagonalOperator:
    """Coordinate operator ``x = sqrt(2) a xi + X``."""
    return x_frak_matrix(N, orientation).scaled(np.sqrt(2.0) * params.a, params.X)


def p_matrix(params: BasisParams, N) -> TridiagonalOperator:
    """Momentum operator ``p = sqrt(2) l pi + P``."""
    return p_frak_matrix(N).scaled(np.sqrt(2.0) * params.ell, params.P)


def _dense(A):
    if isinstance(A, TridiagonalOperator):
        return A.to_dense()
    return np.asarray(A)


def commutator(A, B) -> np.ndarray:
    """``AB - BA`` as a dense matrix."""
    A, B = _dense(A), _dense(B)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"commutator needs square matrices of equal size, got {A.shape} and {B.shape}")
    return A @ B - B @ A


def hermitian_part(M) -> np.ndarray:
    """``(M + M^H) / 2``; exact Hermitian symmetry regardless of summation order."""
    M = _dense(M)
    return 0.5 * (M + M.conj().T)


def dispersion_matrices(params: BasisParams, N):
    """Dispersion operators ``Sigma_x`` and ``Sigma_p``.

    Built from the defining quadratic form
    ``((x - X)**2 / a**2 + (p - P)**2 / l**2) / 2`` scaled by ``a**2``
    (resp. ``l**2``).  On the untruncated block the diagonal is
    ``(2n + 1) a**2`` (resp. ``(2n + 1) l**2``).
    """
    _check_size(N, 3)
    a, ell = params.a, params.ell
    dx = _dense(x_matrix(params, N)) - params.X * np.eye(N)
    dp = _dense(p_matrix(params, N)) - params.P * np.eye(N)
    form = 0.5 * (hermitian_part(dx @ dx) / a**2 + hermitian_part(dp @ dp) / ell**2)
    return a**2 * form, ell**2 * form


def z_generators_1d(N):
    """One-dimensional dispersion generators ``(z_plus, z_minus, z_cross)``.

    ``z_plus = (pi pi + xi xi)/4``, ``z_minus = (pi pi - xi xi)/4``,
    ``z_cross = (pi xi + xi pi)/4``.
    """
    _check_size(N, 3)
    p = _dense(p_frak_matrix(N))
    x = _dense(x_frak_matrix(N))
    pp, xx = p @ p, x @ x
    z_plus = hermitian_part(pp + xx) / 4.0
    z_minus = hermitian_part(pp - xx) / 4.0
    z_cross = hermitian_part(p @ x + x @ p) / 4.0
    return z_plus, z_minus, z_cross


def nonzero_entries(M, tol=0.0):
    """Rows ``(n, m, re, im)`` of entries with ``|M[n, m]| > tol``, row-major."""
    M = _dense(M)
    rows = []
    for n, m in zip(*np.nonzero(np.abs(M) > tol)):
        v = complex(M[n, m])
        rows.append((int(n), int(m), v.real, v.imag))
    return rows
