"""Hermite-Gaussian basis of the phase-space representation.

The basis state ``|n, X, P, l>`` is the n-th Hermite-Gaussian packet centred at
coordinate ``X`` with mean momentum ``P``.  Its coordinate variance is
``(2n + 1) a**2`` and its momentum variance ``(2n + 1) l**2`` with
``a * l = hbar / 2``.

In coordinate representation::

    phi_n(x) = i**n * h_n(u) * exp(i P s / hbar) / sqrt(sqrt(2) a),
    u = (x - X) / (sqrt(2) a),

where ``h_n`` is the normalized Hermite function and ``s`` is ``x`` or
``x - X`` depending on ``phase_origin``.  The ``i**n`` factor makes the ladder
actions on this basis real for the momentum-type combination and imaginary
for the coordinate-type one, so that the tridiagonal matrices of
:mod:`phasekit.matrices` are the exact matrix elements of ``x`` and ``p``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss

__all__ = [
    "BasisParams",
    "QuadratureRule",
    "hermite",
    "hermite_function",
    "hermite_functions",
    "basis_wavefunction",
    "basis_wavefunctions",
    "gauss_hermite",
    "quadrature_size",
]

PHASE_ORIGINS = ("x", "x-X")


@dataclass(frozen=True)
class BasisParams:
    """Parameters ``(X, P, a, hbar)`` of one basis family ``|n, X, P, l>``.

    ``l`` is derived as ``hbar / (2 a)`` so that ``a * l = hbar / 2`` holds to
    rounding.  ``phase_origin`` selects the plane-wave factor
    ``exp(i P x / hbar)`` (``"x"``) or ``exp(i P (x - X) / hbar)`` (``"x-X"``).
    """

    X: float = 0.0
    P: float = 0.0
    a: float = 1.0
    hbar: float = 1.0
    phase_origin: str = "x"

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.phase_origin not in PHASE_ORIGINS:
            raise ValueError(
                f"phase_origin must be one of {PHASE_ORIGINS}, got {self.phase_origin!r}"
            )

    @property
    def ell(self) -> float:
        """Momentum dispersion scale ``hbar / (2 a)``."""
        return self.hbar / (2.0 * self.a)

    def shifted(self, X=None, P=None) -> "BasisParams":
        return BasisParams(
            X=self.X if X is None else X,
            P=self.P if P is None else P,
            a=self.a,
            hbar=self.hbar,
            phase_origin=self.phase_origin,
        )

    def to_dict(self) -> dict:
        return {
            "X": self.X,
            "P": self.P,
            "a": self.a,
            "hbar": self.hbar,
            "ell": self.ell,
            "phase_origin": self.phase_origin,
        }


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite nodes and weights for the weight function ``exp(-u**2)``."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f):
        """Approximate ``int f(u) exp(-u**2) du``."""
        return np.sum(self.weights * f(self.nodes))

    def unweighted(self) -> np.ndarray:
        """Weights for ``int g(u) du``, i.e. ``w_k * exp(u_k**2)``.

        Combined in log space: the raw weights are tiny exactly where
        ``exp(u**2)`` is huge.
        """
        return np.exp(np.log(self.weights) + self.nodes**2)


def hermite(n, u):
    """Physicists' Hermite polynomial ``H_n(u)`` by the three-term recurrence.

    ``H_{n+1} = 2 u H_n - 2 n H_{n-1}``.  Vectorized over ``u``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    u = np.asarray(u, dtype=float)
    h_prev = np.ones_like(u)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * u
    for k in range(1, n):
        h_prev, h = h, 2.0 * u * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def hermite_functions(n_max, u):
    """All normalized Hermite functions ``h_0 .. h_{n_max}`` at ``u``.

    Uses the orthonormal recurrence

        h_{n+1} = sqrt(2/(n+1)) u h_n - sqrt(n/(n+1)) h_{n-1},

    which never forms ``2**n n!`` and stays bounded for large ``n``.

    Returns
    -------
    ndarray of shape ``(n_max + 1,) + u.shape``
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    u = np.asarray(u, dtype=float)
    out = np.empty((n_max + 1,) + u.shape)
    out[0] = np.pi**-0.25 * np.exp(-0.5 * u**2)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * u * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * u * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_function(n, u):
    """Normalized Hermite function ``H_n(u) exp(-u**2/2) / sqrt(2**n n! sqrt(pi))``."""
    h = hermite_functions(n, u)[n]
    return h if h.ndim else float(h)


def _phase(params: BasisParams, x):
    s = x if params.phase_origin == "x" else x - params.X
    return np.exp(1j * params.P * s / params.hbar)


def basis_wavefunctions(n_max, x, params: BasisParams):
    """Coordinate wave functions ``phi_0 .. phi_{n_max}`` of ``|n, X, P, l>``.

    Returns a complex array of shape ``(n_max + 1,) + x.shape``.
    """
    x = np.asarray(x, dtype=float)
    u = (x - params.X) / (np.sqrt(2.0) * params.a)
    h = hermite_functions(n_max, u)
    lead = (1j ** np.arange(n_max + 1)).reshape((-1,) + (1,) * x.ndim)
    return lead * h * (_phase(params, x) / np.sqrt(np.sqrt(2.0) * params.a))


def basis_wavefunction(n, x, params: BasisParams):
    """Coordinate wave function ``<x|n, X, P, l>``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    phi = basis_wavefunctions(n, x, params)[n]
    return phi if phi.ndim else complex(phi)


@lru_cache(maxsize=64)
def _hermgauss(m):
    nodes, weights = hermgauss(m)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_hermite(m) -> QuadratureRule:
    """The ``m``-point Gauss-Hermite rule, exact for degree ``<= 2m - 1``."""
    if m < 1:
        raise ValueError(f"Gauss-Hermite rule needs m >= 1 points, got {m}")
    nodes, weights = _hermgauss(int(m))
    return QuadratureRule(nodes=nodes, weights=weights)


def quadrature_size(n_max) -> int:
    """Number of nodes for overlaps up to index ``n_max``: ``2 n_max + 8``."""
    return 2 * n_max + 8
