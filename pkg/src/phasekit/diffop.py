"""Normal-ordered differential operators with polynomial coefficients.

An expression is a finite sum of terms

    c * X^xpow P^ppow dX^dxpow dP^dppow

over ``dim`` pairs of phase-space variables ``(X^mu, P^mu)``, with every
multiplication factor to the left of every derivative.  Products are brought
back to this form with the Leibniz rule

    dX^c X^k = sum_j C(c, j) k!/(k-j)! X^(k-j) dX^(c-j),

so composition is exact up to the floating-point arithmetic on coefficients.
"""
from __future__ import annotations

import itertools
from math import comb, perm
from typing import Mapping

import numpy as np

from .basis import BasisParams

__all__ = [
    "DiffOpExpr",
    "Polynomial",
    "compose",
    "commutator",
    "apply_to_polynomial",
    "build_p_frak",
    "build_x_frak",
    "build_p_hat",
    "build_x_hat",
    "build_z_hat_1d",
    "derived_p_frak",
    "derived_x_frak",
    "render",
    "CONVENTIONS",
]

PRUNE_TOL = 1e-14
CONVENTIONS = ("section2", "section4")

# A term key is (xpow, ppow, dxpow, dppow), each a tuple of length dim.


def _zeros(dim):
    return (0,) * dim


def _as_index(value, dim):
    if value is None:
        return _zeros(dim)
    if isinstance(value, int):
        if dim != 1:
            raise ValueError("integer exponents are only accepted for dim = 1")
        return (value,)
    value = tuple(int(v) for v in value)
    if len(value) != dim or any(v < 0 for v in value):
        raise ValueError(f"exponent {value} is not a non-negative {dim}-index")
    return value


def _unit(dim, k):
    if not 0 <= k < dim:
        raise IndexError(f"variable index {k} out of range for dim {dim}")
    return tuple(1 if i == k else 0 for i in range(dim))


class DiffOpExpr:
    """Canonical normal-ordered differential operator.

    Terms whose coefficient has modulus ``<= 1e-14`` are dropped; each exponent
    signature appears at most once.  Instances are immutable.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, dim, terms: Mapping = None):
        if dim < 1:
            raise ValueError("dim must be positive")
        clean = {}
        for key, c in (terms or {}).items():
            c = complex(c)
            if abs(c) > PRUNE_TOL:
                clean[key] = c
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOpExpr is immutable")

    # construction helpers

    @classmethod
    def monomial(cls, dim, coeff=1.0, xpow=None, ppow=None, dxpow=None, dppow=None):
        key = tuple(_as_index(v, dim) for v in (xpow, ppow, dxpow, dppow))
        return cls(dim, {key: coeff})

    @classmethod
    def identity(cls, dim=1):
        return cls.monomial(dim, 1.0)

    @classmethod
    def zero(cls, dim=1):
        return cls(dim)

    @classmethod
    def X(cls, dim=1, k=0):
        return cls.monomial(dim, xpow=_unit(dim, k))

    @classmethod
    def P(cls, dim=1, k=0):
        return cls.monomial(dim, ppow=_unit(dim, k))

    @classmethod
    def dX(cls, dim=1, k=0):
        return cls.monomial(dim, dxpow=_unit(dim, k))

    @classmethod
    def dP(cls, dim=1, k=0):
        return cls.monomial(dim, dppow=_unit(dim, k))

    # access

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def coeff(self, xpow=None, ppow=None, dxpow=None, dppow=None) -> complex:
        key = tuple(_as_index(v, self.dim) for v in (xpow, ppow, dxpow, dppow))
        return self._terms.get(key, 0.0 + 0.0j)

    @property
    def order(self) -> int:
        """Highest total derivative order."""
        return max((sum(k[2]) + sum(k[3]) for k in self._terms), default=0)

    @property
    def degree(self) -> int:
        """Highest total polynomial degree of the coefficients."""
        return max((sum(k[0]) + sum(k[1]) for k in self._terms), default=0)

    def is_zero(self, tol=0.0) -> bool:
        return all(abs(c) <= tol for c in self._terms.values())

    # arithmetic

    def _check(self, other):
        if not isinstance(other, DiffOpExpr):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return other

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = DiffOpExpr.monomial(self.dim, other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0.0) + c
        return DiffOpExpr(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOpExpr(self.dim, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return DiffOpExpr(self.dim, {k: c * other for k, c in self._terms.items()})
        if isinstance(other, DiffOpExpr):
            return compose(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __matmul__(self, other):
        return compose(self, other)

    def __truediv__(self, other):
        return self * (1.0 / other)

    # comparison

    def max_abs_diff(self, other) -> float:
        """Largest coefficient difference over the union of signatures."""
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        return max((abs(self._terms.get(k, 0) - other._terms.get(k, 0)) for k in keys), default=0.0)

    def allclose(self, other, rtol=1e-12, atol=1e-13) -> bool:
        """Per-coefficient comparison of canonical forms."""
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        for k in keys:
            a, b = self._terms.get(k, 0), other._terms.get(k, 0)
            if abs(a - b) > atol + rtol * max(abs(a), abs(b)):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, DiffOpExpr):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        return f"DiffOpExpr(dim={self.dim}, {render(self)!r})"

    def __str__(self):
        return render(self)


def _leibniz(c, k):
    """Coefficients of ``d^c x^k = sum_j coef_j x^(k-j) d^(c-j)`` as ``[(j, coef_j)]``."""
    return [(j, comb(c, j) * perm(k, j)) for j in range(min(c, k) + 1)]


def compose(A: DiffOpExpr, B: DiffOpExpr) -> DiffOpExpr:
    """Normal-ordered product ``A B`` (apply ``B`` first)."""
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")
    dim = A.dim
    out = {}
    for (xa, pa, dxa, dpa), ca in A._terms.items():
        for (xb, pb, dxb, dpb), cb in B._terms.items():
            # one Leibniz expansion per variable; dX only meets X, dP only meets P
            per_axis = [_leibniz(dxa[m], xb[m]) for m in range(dim)]
            per_axis += [_leibniz(dpa[m], pb[m]) for m in range(dim)]
            for choice in itertools.product(*per_axis):
                jx = [j for j, _ in choice[:dim]]
                jp = [j for j, _ in choice[dim:]]
                coef = ca * cb
                for _, w in choice:
                    coef *= w
                key = (
                    tuple(xa[m] + xb[m] - jx[m] for m in range(dim)),
                    tuple(pa[m] + pb[m] - jp[m] for m in range(dim)),
                    tuple(dxa[m] - jx[m] + dxb[m] for m in range(dim)),
                    tuple(dpa[m] - jp[m] + dpb[m] for m in range(dim)),
                )
                out[key] = out.get(key, 0.0) + coef
    return DiffOpExpr(dim, out)


def commutator(A: DiffOpExpr, B: DiffOpExpr) -> DiffOpExpr:
    """``[A, B] = AB - BA``."""
    return compose(A, B) - compose(B, A)


# -- polynomials and the exact action ------------------------------------------


class Polynomial:
    """Polynomial in ``(X^mu, P^mu)``; keys are ``(xpow, ppow)``."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms: Mapping = None):
        self.dim = dim
        self.terms = {k: complex(c) for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def monomial(cls, dim, coeff=1.0, xpow=None, ppow=None):
        return cls(dim, {(_as_index(xpow, dim), _as_index(ppow, dim)): coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Polynomial(self.dim, out)

    def __call__(self, X, P):
        """Evaluate at points; ``X`` and ``P`` are sequences of length ``dim`` (arrays allowed)."""
        total = 0.0
        for (xp, pp), c in self.terms.items():
            term = c
            for m in range(self.dim):
                term = term * X[m] ** xp[m] * P[m] ** pp[m]
            total = total + term
        return total

    def max_abs_diff(self, other) -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(k, 0) - other.terms.get(k, 0)) for k in keys), default=0.0)

    def __repr__(self):
        return f"Polynomial(dim={self.dim}, terms={self.terms!r})"


def apply_to_polynomial(expr: DiffOpExpr, poly: Polynomial) -> Polynomial:
    """Exact action of ``expr`` on ``poly``."""
    if expr.dim != poly.dim:
        raise ValueError(f"dimension mismatch: {expr.dim} vs {poly.dim}")
    dim = expr.dim
    out = {}
    for (xa, pa, dxa, dpa), ca in expr.items():
        for (xq, pq), cq in poly.terms.items():
            if any(dxa[m] > xq[m] or dpa[m] > pq[m] for m in range(dim)):
                continue
            coef = ca * cq
            for m in range(dim):
                coef *= perm(xq[m], dxa[m]) * perm(pq[m], dpa[m])
            key = (
                tuple(xa[m] + xq[m] - dxa[m] for m in range(dim)),
                tuple(pa[m] + pq[m] - dpa[m] for m in range(dim)),
            )
            out[key] = out.get(key, 0) + coef
    return Polynomial(dim, {k: c for k, c in out.items() if abs(c) > PRUNE_TOL})


# -- one-dimensional representations -------------------------------------------


def _split_alpha_beta(params: BasisParams, alpha_beta):
    """``alpha_beta`` is a scalar alpha (beta linked as ``(a/l) alpha``) or a pair."""
    if np.ndim(alpha_beta) == 0:
        alpha = float(alpha_beta)
        return alpha, params.a / params.ell * alpha
    alpha, beta = alpha_beta
    return float(alpha), float(beta)


def _sign(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return 1.0 if convention == "section2" else -1.0


def build_p_frak(params: BasisParams, alpha_beta=(0.0, 0.0), convention="section2") -> DiffOpExpr:
    """Dimensionless momentum ``(l/hbar)(+-i hbar dP - X) + beta dX``.

    The ``section2`` sign is ``+i hbar dP``; ``section4`` is ``-i hbar dP``.
    """
    _, beta = _split_alpha_beta(params, alpha_beta)
    s = _sign(convention)
    ell, hbar = params.ell, params.hbar
    I = DiffOpExpr
    return (s * 1j * ell) * I.dP() - (ell / hbar) * I.X() + beta * I.dX()


def build_x_frak(params: BasisParams, alpha_beta=(0.0, 0.0), convention="section2") -> DiffOpExpr:
    """Dimensionless coordinate ``(a/hbar)(-+i hbar dX - P) + alpha dP``."""
    alpha, _ = _split_alpha_beta(params, alpha_beta)
    s = _sign(convention)
    a, hbar = params.a, params.hbar
    I = DiffOpExpr
    return (-s * 1j * a) * I.dX() - (a / hbar) * I.P() + alpha * I.dP()


def build_p_hat(params: BasisParams, alpha_beta=(0.0, 0.0), convention="section2") -> DiffOpExpr:
    """Momentum ``sqrt(2) l p_frak + P``."""
    frak = build_p_frak(params, alpha_beta, convention)
    return np.sqrt(2.0) * params.ell * frak + DiffOpExpr.P()


def build_x_hat(params: BasisParams, alpha_beta=(0.0, 0.0), convention="section2") -> DiffOpExpr:
    """Coordinate ``sqrt(2) a x_frak + X``."""
    frak = build_x_frak(params, alpha_beta, convention)
    return np.sqrt(2.0) * params.a * frak + DiffOpExpr.X()


def derived_x_frak(params: BasisParams) -> DiffOpExpr:
    """Operator on ``Psi^n(X, P)`` that reproduces ``<n|xi|psi>`` for this basis.

    Differentiating the basis overlap gives ``i hbar dP Psi^n = <n|x - s0|psi>``
    where ``s0`` is the phase origin offset, hence
    ``sqrt(2) (l/hbar)(i hbar dP - X)`` for ``phase_origin="x"`` and
    ``sqrt(2) (l/hbar) i hbar dP`` for ``"x-X"``.
    """
    k = np.sqrt(2.0) * params.ell / params.hbar
    expr = (k * 1j * params.hbar) * DiffOpExpr.dP()
    if params.phase_origin == "x":
        expr = expr - k * DiffOpExpr.X()
    return expr


def derived_p_frak(params: BasisParams) -> DiffOpExpr:
    """Operator on ``Psi^n(X, P)`` that reproduces ``<n|pi|psi>`` for this basis.

    ``sqrt(2) (a/hbar)(-i hbar dX)`` for ``phase_origin="x"``,
    ``sqrt(2) (a/hbar)(-i hbar dX - P)`` for ``"x-X"``.
    """
    k = np.sqrt(2.0) * params.a / params.hbar
    expr = (-k * 1j * params.hbar) * DiffOpExpr.dX()
    if params.phase_origin == "x-X":
        expr = expr - k * DiffOpExpr.P()
    return expr


def build_z_hat_1d(params: BasisParams, convention="section4"):
    """``(z_plus, z_minus, z_cross)`` composed from the ``alpha = beta = 0`` pair.

    ``z_plus = (p p + x x)/4``, ``z_minus = (p p - x x)/4``,
    ``z_cross = (p x + x p)/4`` with ``p``, ``x`` the dimensionless
    representations in the requested sign convention.
    """
    p = build_p_frak(params, (0.0, 0.0), convention)
    x = build_x_frak(params, (0.0, 0.0), convention)
    pp, xx = p @ p, x @ x
    return 0.25 * (pp + xx), 0.25 * (pp - xx), 0.25 * (p @ x + x @ p)


# -- rendering --------------------------------------------------------------------


def _fmt_real(v):
    return repr(float(v))


def format_coeff(c: complex) -> str:
    """Shortest round-trip rendering of a complex coefficient."""
    c = complex(c)
    if c.imag == 0:
        return _fmt_real(c.real)
    if c.real == 0:
        return _fmt_real(c.imag) + "j"
    sign = "+" if c.imag >= 0 else "-"
    return f"({_fmt_real(c.real)}{sign}{_fmt_real(abs(c.imag))}j)"


def _factor(name, powers, dim):
    parts = []
    for m, k in enumerate(powers):
        if k == 0:
            continue
        label = name if dim == 1 else f"{name}{m}"
        parts.append(label if k == 1 else f"{label}^{k}")
    return parts


def term_label(key, dim) -> str:
    xpow, ppow, dxpow, dppow = key
    parts = (
        _factor("X", xpow, dim)
        + _factor("P", ppow, dim)
        + _factor("dX", dxpow, dim)
        + _factor("dP", dppow, dim)
    )
    return " ".join(parts) if parts else "1"


def sort_key(key):
    """Graded lexicographic: total derivative order, derivative powers, then variable degree and powers."""
    xpow, ppow, dxpow, dppow = key
    return (sum(dxpow) + sum(dppow), dxpow, dppow, sum(xpow) + sum(ppow), xpow, ppow)


def render(expr: DiffOpExpr) -> str:
    """Deterministic text rendering, one ``coeff * monomial`` per term."""
    if not len(expr):
        return "0"
    lines = []
    for key in sorted(expr.terms, key=sort_key):
        lines.append(f"{format_coeff(expr.terms[key])} * {term_label(key, expr.dim)}")
    return " + ".join(lines)
