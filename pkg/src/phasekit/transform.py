"""Forward phase-space transform and its two reconstruction routes.

``Psi^n(X, P) = <n, X, P, l | psi>`` is evaluated by Gauss-Hermite quadrature
centred on the basis packet.  A state is recovered either by summing over
``n`` at one fixed ``(X, P)`` or by integrating one fixed ``n`` over the
phase plane with measure ``dX dP / (2 pi hbar)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline

from .basis import (
    BasisParams,
    basis_wavefunction,
    basis_wavefunctions,
    gauss_hermite,
    hermite_functions,
    quadrature_size,
)

__all__ = [
    "GaussianPacket",
    "HermitePacket",
    "SampledWaveFunction",
    "AnalyticWaveFunction",
    "Superposition",
    "CoefficientVector",
    "PhaseSpaceGrid",
    "PhaseSpaceField",
    "Reconstruction",
    "forward_coeffs",
    "forward_stack",
    "forward_field",
    "reconstruct_sum",
    "reconstruct_integral",
    "bessel_residual",
]

# Sampled wave functions must cover [X - SUPPORT_HALF_WIDTH a, X + SUPPORT_HALF_WIDTH a].
SUPPORT_HALF_WIDTH = 8.0
NORM_TOL = 1e-6
# Edge magnitude (relative to the peak) above which a phase-space field is
# considered cut off by its grid.
EDGE_TOL = 0.05
# Floor on the quadrature size for arbitrary (non-basis) wave functions.
MIN_QUAD_POINTS = 48


# -- wave functions ----------------------------------------------------------


class WaveFunction:
    """Base class for coordinate wave functions ``psi(x)``."""

    #: True when the state is L2-normalized by construction.
    normalized = False

    def __call__(self, x):
        raise NotImplementedError

    def support(self):
        """Interval outside which ``psi`` is treated as zero."""
        return (-np.inf, np.inf)

    def norm_squared(self) -> float:
        raise NotImplementedError

    def __rmul__(self, c):
        return Superposition(((c, self),))

    def __add__(self, other):
        return Superposition(((1.0, self), (1.0, other)))


class _Packet(WaveFunction):
    normalized = True

    @property
    def params(self) -> BasisParams:
        return BasisParams(self.X0, self.P0, self.a0, self.hbar, self.phase_origin)

    def __call__(self, x):
        return basis_wavefunction(self.n0, np.asarray(x, dtype=float), self.params)

    def norm_squared(self):
        return 1.0


@dataclass(frozen=True)
class HermitePacket(_Packet):
    """The basis state ``|n0, X0, P0, l0>`` itself, as a wave function."""

    n0: int = 0
    X0: float = 0.0
    P0: float = 0.0
    a0: float = 1.0
    hbar: float = 1.0
    phase_origin: str = "x"


@dataclass(frozen=True)
class GaussianPacket(_Packet):
    """Coherent packet centred at ``(X0, P0)`` with coordinate width ``a0``."""

    X0: float = 0.0
    P0: float = 0.0
    a0: float = 1.0
    hbar: float = 1.0
    phase_origin: str = "x"

    n0 = 0


@dataclass(frozen=True, eq=False)
class SampledWaveFunction(WaveFunction):
    """Wave function given by samples on a strictly increasing grid.

    Real and imaginary parts are interpolated with natural cubic splines and
    taken to vanish outside the sampled interval.
    """

    x: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if x.ndim != 1 or x.shape != values.shape:
            raise ValueError("x and values must be 1-D arrays of equal length")
        if len(x) < 8:
            raise ValueError(f"need at least 8 samples, got {len(x)}")
        if np.any(np.diff(x) <= 0):
            raise ValueError("sample grid must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_re", CubicSpline(x, values.real, bc_type="natural"))
        object.__setattr__(self, "_im", CubicSpline(x, values.imag, bc_type="natural"))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.x[0]) & (x <= self.x[-1])
        out = np.where(inside, self._re(x) + 1j * self._im(x), 0.0)
        return out if out.ndim else complex(out)

    def support(self):
        return (self.x[0], self.x[-1])

    def norm_squared(self):
        return float(trapezoid(np.abs(self.values) ** 2, self.x))


@dataclass(frozen=True, eq=False)
class AnalyticWaveFunction(WaveFunction):
    """Any vectorized callable ``psi(x)``; ``normalized`` is caller-asserted."""

    func: Callable
    is_normalized: bool = False
    norm_window: tuple = (-60.0, 60.0)

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=complex)

    @property
    def normalized(self):
        return self.is_normalized

    def norm_squared(self):
        xs = np.linspace(*self.norm_window, 40001)
        return float(trapezoid(np.abs(self(xs)) ** 2, xs))

    def normalize(self) -> "AnalyticWaveFunction":
        """Copy rescaled to unit norm and marked normalized."""
        k = 1.0 / np.sqrt(self.norm_squared())
        func = self.func
        return AnalyticWaveFunction(lambda x: k * func(x), True, self.norm_window)


@dataclass(frozen=True, eq=False)
class Superposition(WaveFunction):
    """Finite linear combination ``sum_k c_k psi_k``."""

    terms: tuple = ()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for c, psi in self.terms:
            out = out + c * psi(x)
        return out

    def support(self):
        lo = min(psi.support()[0] for _, psi in self.terms)
        hi = max(psi.support()[1] for _, psi in self.terms)
        return (lo, hi)

    def norm_squared(self):
        lo, hi = self.support()
        lo, hi = max(lo, -60.0), min(hi, 60.0)
        xs = np.linspace(lo, hi, 40001)
        return float(trapezoid(np.abs(self(xs)) ** 2, xs))

    def __rmul__(self, c):
        return Superposition(tuple((c * ck, psi) for ck, psi in self.terms))

    def __add__(self, other):
        if isinstance(other, Superposition):
            return Superposition(self.terms + other.terms)
        return Superposition(self.terms + ((1.0, other),))


# -- containers --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """``Psi^n(X, P, l)`` for ``n = 0 .. n_max`` at one phase-space point."""

    params: BasisParams
    n_max: int
    coeffs: np.ndarray
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.n_max + 1,):
            raise ValueError("coeffs must have length n_max + 1")
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self):
        return self.n_max + 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def partial_sums(self):
        """Running sums of ``|Psi^n|**2``."""
        return np.cumsum(np.abs(self.coeffs) ** 2)


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform rectilinear grid on the ``(X, P)`` plane."""

    X_min: float
    X_max: float
    nX: int
    P_min: float
    P_max: float
    nP: int

    def __post_init__(self):
        if self.nX < 3 or self.nP < 3:
            raise ValueError("grid needs at least 3 nodes per axis")
        if not (self.X_max > self.X_min and self.P_max > self.P_min):
            raise ValueError("grid extents must be increasing")

    @classmethod
    def around(cls, X0, P0, a, hbar, n, width=5.0):
        """Square ``n x n`` grid over ``[X0 +- width a] x [P0 +- width l]``."""
        ell = hbar / (2.0 * a)
        return cls(X0 - width * a, X0 + width * a, n, P0 - width * ell, P0 + width * ell, n)

    @property
    def X(self):
        return np.linspace(self.X_min, self.X_max, self.nX)

    @property
    def P(self):
        return np.linspace(self.P_min, self.P_max, self.nP)

    @property
    def hX(self):
        return (self.X_max - self.X_min) / (self.nX - 1)

    @property
    def hP(self):
        return (self.P_max - self.P_min) / (self.nP - 1)

    def mesh(self):
        return np.meshgrid(self.X, self.P, indexing="ij")

    def refined(self, factor=2):
        """Same extent with ``factor`` times as many nodes per axis."""
        return PhaseSpaceGrid(
            self.X_min, self.X_max, factor * self.nX, self.P_min, self.P_max, factor * self.nP
        )

    def to_dict(self):
        return {
            "X_min": self.X_min,
            "X_max": self.X_max,
            "nX": self.nX,
            "P_min": self.P_min,
            "P_max": self.P_max,
            "nP": self.nP,
        }


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """``Psi^n`` sampled on a phase-space grid; ``values[i, j]`` is at ``(X_i, P_j)``."""

    grid: PhaseSpaceGrid
    n: int
    a: float
    values: np.ndarray
    hbar: float = 1.0
    phase_origin: str = "x"
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.nX, self.grid.nP):
            raise ValueError(
                f"values shape {values.shape} does not match grid {(self.grid.nX, self.grid.nP)}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", values)

    def params_at(self, X, P) -> BasisParams:
        return BasisParams(X, P, self.a, self.hbar, self.phase_origin)

    def with_values(self, values):
        return PhaseSpaceField(
            self.grid, self.n, self.a, values, self.hbar, self.phase_origin, self.flags
        )


class Reconstruction(NamedTuple):
    values: np.ndarray
    flags: frozenset


# -- forward transform -------------------------------------------------------


def _support_flags(psi, X_lo, X_hi, a):
    lo, hi = psi.support()
    if lo > X_lo - SUPPORT_HALF_WIDTH * a or hi < X_hi + SUPPORT_HALF_WIDTH * a:
        return {"truncated_support"}
    return set()


def _norm_flags(psi):
    if psi.normalized:
        return set()
    if abs(psi.norm_squared() - 1.0) >= NORM_TOL:
        return {"not_normalized"}
    return set()


def _stack(psi, X, P, a, hbar, phase_origin, n_max, m):
    """``Psi^n(X_i, P_j)`` for all n, i, j; shape ``(n_max+1, len(X), len(P))``."""
    rule = gauss_hermite(m)
    u = rule.nodes
    weight = rule.unweighted() * np.sqrt(2.0) * a
    scale = np.sqrt(2.0) * a
    x = X[:, None] + scale * u[None, :]  # (nX, m)
    vals = psi(x)  # (nX, m)
    h = hermite_functions(n_max, u) / np.sqrt(scale)  # (n, m)
    h = h * (1j ** -np.arange(n_max + 1))[:, None]
    s = x if phase_origin == "x" else x - X[:, None]
    phase = np.exp(-1j * P[None, :, None] * s[:, None, :] / hbar)  # (nX, nP, m)
    return np.einsum("nk,ik,ijk->nij", h * weight, vals, phase, optimize=True)


def forward_coeffs(psi, params: BasisParams, n_max, quad_points=None) -> CoefficientVector:
    """Coefficients ``Psi^n(X, P, l)``, ``n = 0 .. n_max``, of ``psi``.

    Evaluated with a Gauss-Hermite rule in ``u = (x - X) / (sqrt(2) a)`` of
    ``quad_points`` nodes (default ``2 n_max + 8``, at least 48 so that
    packets displaced by several widths are still resolved).

    Flags
    -----
    truncated_support
        sampled ``psi`` does not cover ``[X - 8a, X + 8a]``.
    not_normalized
        ``| ||psi||**2 - 1 | >= 1e-6``.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    m = quad_points or max(quadrature_size(n_max), MIN_QUAD_POINTS)
    c = _stack(
        psi,
        np.array([params.X], dtype=float),
        np.array([params.P], dtype=float),
        params.a,
        params.hbar,
        params.phase_origin,
        n_max,
        m,
    )[:, 0, 0]
    flags = _support_flags(psi, params.X, params.X, params.a) | _norm_flags(psi)
    return CoefficientVector(params, n_max, c, frozenset(flags))


def forward_stack(psi, grid: PhaseSpaceGrid, a, n_max, hbar=1.0, phase_origin="x", quad_points=None):
    """All fields ``Psi^0 .. Psi^{n_max}`` on ``grid`` as one array.

    Returns ``(values, flags)`` with ``values`` of shape ``(n_max+1, nX, nP)``.
    Nodes are independent of each other; the result does not depend on their
    evaluation order.
    """
    m = quad_points or max(quadrature_size(n_max), 64)
    values = _stack(psi, grid.X, grid.P, a, hbar, phase_origin, n_max, m)
    flags = _support_flags(psi, grid.X_min, grid.X_max, a) | _norm_flags(psi)
    return values, frozenset(flags)


def forward_field(psi, n, grid: PhaseSpaceGrid, a, hbar=1.0, phase_origin="x", quad_points=None):
    """``Psi^n`` over the whole grid as a :class:`PhaseSpaceField`."""
    if n < 0:
        raise ValueError("n must be non-negative")
    values, flags = forward_stack(psi, grid, a, n, hbar, phase_origin, quad_points)
    return PhaseSpaceField(grid, n, a, values[n], hbar, phase_origin, flags)


# -- reconstruction ----------------------------------------------------------


def reconstruct_sum(coeffs: CoefficientVector, xs):
    """``sum_n Psi^n phi_n(x)`` at fixed ``(X, P)``."""
    xs = np.asarray(xs, dtype=float)
    phi = basis_wavefunctions(coeffs.n_max, xs, coeffs.params)
    return np.tensordot(coeffs.coeffs, phi, axes=1)


def _trapezoid_weights(n, h):
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def reconstruct_integral(field: PhaseSpaceField, xs) -> Reconstruction:
    """``int Psi^n(X, P) phi_n(x; X, P) dX dP / (2 pi hbar)`` by the 2-D trapezoid rule.

    Flags ``domain_truncated`` when the field at the grid edge exceeds 5% of
    its peak magnitude.
    """
    xs = np.asarray(xs, dtype=float)
    grid = field.grid
    X, P = grid.X, grid.P
    wX = _trapezoid_weights(grid.nX, grid.hX)
    wP = _trapezoid_weights(grid.nP, grid.hP)
    scale = np.sqrt(2.0) * field.a
    u = (xs[:, None] - X[None, :]) / scale  # (nx, nX)
    h = hermite_functions(field.n, u)[field.n] * (1j**field.n) / np.sqrt(scale)
    V = field.values * wX[:, None] * wP[None, :]
    if field.phase_origin == "x":
        plane = np.exp(1j * xs[:, None] * P[None, :] / field.hbar)  # (nx, nP)
        out = np.einsum("ti,ij,tj->t", h, V, plane, optimize=True)
    else:
        s = xs[:, None] - X[None, :]  # (nx, nX)
        plane = np.exp(1j * s[:, :, None] * P[None, None, :] / field.hbar)
        out = np.einsum("ti,ij,tij->t", h, V, plane, optimize=True)
    out = out / (2.0 * np.pi * field.hbar)

    flags = set()
    mag = np.abs(field.values)
    peak = mag.max()
    if peak > 0:
        edge = max(mag[0].max(), mag[-1].max(), mag[:, 0].max(), mag[:, -1].max())
        if edge > EDGE_TOL * peak:
            flags.add("domain_truncated")
    return Reconstruction(out, frozenset(flags))


def bessel_residual(psi, params: BasisParams, n_max, quad_points=None) -> float:
    """``1 - sum_{n <= n_max} |Psi^n|**2``; non-negative up to rounding for normalized ``psi``."""
    c = forward_coeffs(psi, params, n_max, quad_points)
    return float(1.0 - np.sum(np.abs(c.coeffs) ** 2))
