"""Multidimensional phase-space representations and dispersion generators.

Parameter tensors ``a[mu, rho]`` and ``b[mu, rho]`` are plain matrices with the
row holding the lower index.  Expression variables are the upper components
``X^rho`` and ``P^rho``; lowered components enter through the diagonal
metric, ``X_rho = eta[rho] X^rho``.  This is where ``eta`` reaches the
commutators: ``d/dP^rho`` acting on ``P_lambda`` yields ``eta[rho]`` when
``rho == lambda``.

With that bookkeeping ``[p_mu, x_nu] = (2i/hbar) (b diag(eta) a^T)[mu, nu]``,
which equals ``i eta[mu, nu]`` whenever the duality ``b a = (hbar/2) I`` holds
and ``a diag(eta)`` is symmetric.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .diffop import CONVENTIONS, DiffOpExpr, commutator

__all__ = [
    "ParamTensors",
    "DispersionGenerators",
    "validate_tensors",
    "random_dual_tensors",
    "diagonal_tensors",
    "build_p_hat_mu",
    "build_x_hat_nu",
    "check_multidim_commutators",
    "build_dispersion_generators",
    "displayed_expansions",
    "MAX_DIM",
]

MAX_DIM = 4
DUALITY_TOL = 1e-12


def minkowski(D):
    return np.array([1.0] + [-1.0] * (D - 1))


@dataclass(frozen=True, eq=False)
class ParamTensors:
    """Width tensors ``a``, ``b``, diagonal metric ``eta`` and mean point ``(Xbar, Pbar)``."""

    a: np.ndarray
    b: np.ndarray
    eta: np.ndarray = None
    hbar: float = 1.0
    Xbar: np.ndarray = None
    Pbar: np.ndarray = None

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.atleast_2d(np.asarray(self.b, dtype=float))
        D = a.shape[0]
        if a.shape != (D, D) or b.shape != (D, D):
            raise ValueError("a and b must be square matrices of equal size")
        if not 1 <= D <= MAX_DIM:
            raise ValueError(f"dimension must be between 1 and {MAX_DIM}, got {D}")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        eta = minkowski(D) if self.eta is None else np.asarray(self.eta, dtype=float).reshape(-1)
        if eta.shape != (D,):
            raise ValueError("eta must hold one signature entry per axis")
        Xbar = np.zeros(D) if self.Xbar is None else np.asarray(self.Xbar, dtype=float)
        Pbar = np.zeros(D) if self.Pbar is None else np.asarray(self.Pbar, dtype=float)
        for name, value in (("a", a), ("b", b), ("eta", eta), ("Xbar", Xbar), ("Pbar", Pbar)):
            object.__setattr__(self, name, value)

    @property
    def D(self) -> int:
        return self.a.shape[0]

    @property
    def A(self) -> np.ndarray:
        """``A[mu, lam] = a[mu, rho] a[rho, lam]``."""
        return self.a @ self.a

    @property
    def B(self) -> np.ndarray:
        """``B[mu, sig] = b[mu, rho] b[rho, sig]``."""
        return self.b @ self.b

    def to_dict(self):
        return {
            "D": self.D,
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "eta": self.eta.tolist(),
            "hbar": self.hbar,
            "Xbar": self.Xbar.tolist(),
            "Pbar": self.Pbar.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        D = data.get("D")
        t = cls(
            a=data["a"],
            b=data["b"],
            eta=data.get("eta"),
            hbar=data.get("hbar", 1.0),
            Xbar=data.get("Xbar"),
            Pbar=data.get("Pbar"),
        )
        if D is not None and D != t.D:
            raise ValueError(f"declared D = {D} but tensors are {t.D} x {t.D}")
        return t


def validate_tensors(t: ParamTensors) -> dict:
    """Report how far ``t`` is from satisfying its constraints.

    ``duality_deviation`` is ``max |b a - (hbar/2) I|``; ``eta_symmetry_deviation``
    is the asymmetry of ``a diag(eta)``, which must vanish for the
    commutators to reproduce ``i eta``.
    """
    duality = float(np.abs(t.b @ t.a - 0.5 * t.hbar * np.eye(t.D)).max())
    signature_ok = bool(np.all(np.isin(t.eta, (1.0, -1.0))))
    a_eta = t.a * t.eta[None, :]
    symmetry = float(np.abs(a_eta - a_eta.T).max())
    return {
        "duality_deviation": duality,
        "signature_valid": signature_ok,
        "signature_deviation": float(np.abs(np.abs(t.eta) - 1.0).max()),
        "eta_symmetry_deviation": symmetry,
        "valid": duality <= DUALITY_TOL and signature_ok,
    }


def diagonal_tensors(widths, hbar=1.0, eta=None) -> ParamTensors:
    """``a = diag(widths)``, ``b = (hbar/2) diag(1/widths)``."""
    widths = np.asarray(widths, dtype=float)
    return ParamTensors(np.diag(widths), 0.5 * hbar * np.diag(1.0 / widths), eta, hbar)


def random_dual_tensors(D, rng=None, hbar=1.0, eta=None) -> ParamTensors:
    """Random dual pair with ``a diag(eta)`` symmetric positive definite.

    ``b = (hbar/2) a^{-1}``, so the duality holds to rounding.
    """
    rng = np.random.default_rng(rng)
    eta = minkowski(D) if eta is None else np.asarray(eta, dtype=float)
    M = rng.normal(size=(D, D))
    S = M @ M.T / D + 0.5 * np.eye(D)
    a = S * eta[None, :]
    b = 0.5 * hbar * np.linalg.inv(a)
    return ParamTensors(a, b, eta, hbar)


# -- builders ---------------------------------------------------------------------


def _sign(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return 1.0 if convention == "section2" else -1.0


def _check_index(t, *indices):
    for k in indices:
        if not 0 <= k < t.D:
            raise IndexError(f"index {k} out of range for D = {t.D}")


def _frak_p(t, mu, beta, s):
    D, hbar = t.D, t.hbar
    E = DiffOpExpr
    out = E.zero(D)
    for rho in range(D):
        c = t.b[mu, rho] / hbar
        out = out + (c * s * 1j * hbar) * E.dP(D, rho) - (c * t.eta[rho]) * E.X(D, rho)
        if beta is not None:
            out = out + beta[mu, rho] * E.dX(D, rho)
    return out


def _frak_x(t, nu, alpha, s):
    D, hbar = t.D, t.hbar
    E = DiffOpExpr
    out = E.zero(D)
    for lam in range(D):
        c = t.a[nu, lam] / hbar
        out = out + (-c * s * 1j * hbar) * E.dX(D, lam) - (c * t.eta[lam]) * E.P(D, lam)
        if alpha is not None:
            out = out + alpha[nu, lam] * E.dP(D, lam)
    return out


def _alpha_beta(t, alpha_beta):
    if alpha_beta is None:
        return None, None
    alpha, beta = (np.asarray(m, dtype=float) for m in alpha_beta)
    if alpha.shape != (t.D, t.D) or beta.shape != (t.D, t.D):
        raise ValueError("alpha and beta must be D x D")
    return alpha, beta


def build_p_hat_mu(t: ParamTensors, mu, variant="frak", alpha_beta=None, convention="section4") -> DiffOpExpr:
    """Momentum representation along axis ``mu``.

    ``frak``: ``(b[mu, rho]/hbar)(-+ i hbar dP^rho - X_rho) + beta[mu, rho] dX^rho``
    (``-`` for ``section4``, ``+`` for ``section2``).
    ``full``: ``sqrt(2) b[mu, rho] p_frak_rho + P_mu``, which for zero
    ``alpha``/``beta`` is ``sqrt(2) (B[mu, sig]/hbar)(-+ i hbar dP^sig - X_sig) + P_mu``.
    """
    _check_index(t, mu)
    s = _sign(convention)
    _, beta = _alpha_beta(t, alpha_beta)
    if variant == "frak":
        return _frak_p(t, mu, beta, s)
    if variant == "full":
        out = t.eta[mu] * DiffOpExpr.P(t.D, mu)
        for rho in range(t.D):
            out = out + (np.sqrt(2.0) * t.b[mu, rho]) * _frak_p(t, rho, beta, s)
        return out
    raise ValueError(f"variant must be 'frak' or 'full', got {variant!r}")


def build_x_hat_nu(t: ParamTensors, nu, variant="frak", alpha_beta=None, convention="section4") -> DiffOpExpr:
    """Coordinate representation along axis ``nu``.

    ``frak``: ``(a[nu, lam]/hbar)(+- i hbar dX^lam - P_lam) + alpha[nu, lam] dP^lam``.
    ``full``: ``sqrt(2) a[nu, rho] x_frak_rho + X_nu``.
    """
    _check_index(t, nu)
    s = _sign(convention)
    alpha, _ = _alpha_beta(t, alpha_beta)
    if variant == "frak":
        return _frak_x(t, nu, alpha, s)
    if variant == "full":
        out = t.eta[nu] * DiffOpExpr.X(t.D, nu)
        for rho in range(t.D):
            out = out + (np.sqrt(2.0) * t.a[nu, rho]) * _frak_x(t, rho, alpha, s)
        return out
    raise ValueError(f"variant must be 'frak' or 'full', got {variant!r}")


def check_multidim_commutators(t: ParamTensors, alpha_beta=None, convention="section4") -> dict:
    """Deviation matrices of all ``D**2`` commutators from their targets.

    ``section4`` checks ``[p_mu, x_nu] = i eta_mu_nu`` (``frak``) and
    ``i hbar eta_mu_nu`` (``full``).  ``section2`` checks the opposite
    ordering ``[x_nu, p_mu]`` against the same targets, matching the
    one-dimensional ``[x, p] = i``.
    """
    D = t.D
    out = {"convention": convention}
    for variant, scale in (("frak", 1.0), ("full", t.hbar)):
        dev = np.zeros((D, D))
        p = [build_p_hat_mu(t, mu, variant, alpha_beta, convention) for mu in range(D)]
        x = [build_x_hat_nu(t, nu, variant, alpha_beta, convention) for nu in range(D)]
        for mu in range(D):
            for nu in range(D):
                if convention == "section4":
                    c = commutator(p[mu], x[nu])
                else:
                    c = commutator(x[nu], p[mu])
                target = 1j * scale * (t.eta[mu] if mu == nu else 0.0)
                dev[mu, nu] = c.max_abs_diff(DiffOpExpr.monomial(D, target))
        out[variant] = dev
    out["max_deviation"] = float(max(out["frak"].max(), out["full"].max()))
    return out


class DispersionGenerators(NamedTuple):
    z_plus: DiffOpExpr
    z_minus: DiffOpExpr
    z_cross: DiffOpExpr
    Z_plus: DiffOpExpr
    Z_minus: DiffOpExpr
    Z_cross: DiffOpExpr


def _lower_generators(t, mu, nu, convention):
    p_mu = build_p_hat_mu(t, mu, "frak", None, convention)
    p_nu = build_p_hat_mu(t, nu, "frak", None, convention)
    x_mu = build_x_hat_nu(t, mu, "frak", None, convention)
    x_nu = build_x_hat_nu(t, nu, "frak", None, convention)
    pp, xx = p_mu @ p_nu, x_mu @ x_nu
    return 0.25 * (pp + xx), 0.25 * (pp - xx), 0.25 * (p_mu @ x_nu + x_nu @ p_mu)


def build_dispersion_generators(t: ParamTensors, mu, nu, convention="section4") -> DispersionGenerators:
    """Dispersion generators along ``(mu, nu)`` by composition.

    Lower-case: ``z+ = (p_mu p_nu + x_mu x_nu)/4``, ``z- = (p_mu p_nu - x_mu x_nu)/4``,
    ``zx = (p_mu x_nu + x_nu p_mu)/4``.  Upper-case:
    ``Z_{mu nu} = 4 b[mu, eps] b[nu, th] z_{eps th}`` for each species.
    """
    _check_index(t, mu, nu)
    z_plus, z_minus, z_cross = _lower_generators(t, mu, nu, convention)
    D = t.D
    Z = [DiffOpExpr.zero(D) for _ in range(3)]
    for eps in range(D):
        for th in range(D):
            w = 4.0 * t.b[mu, eps] * t.b[nu, th]
            if w == 0.0:
                continue
            for k, z in enumerate(_lower_generators(t, eps, th, convention)):
                Z[k] = Z[k] + w * z
    return DispersionGenerators(z_plus, z_minus, z_cross, *Z)


# -- displayed expansions, written out term by term --------------------------------


def _mono(D, coeff, X=(), P=(), dX=(), dP=()):
    """Monomial from lists of variable indices (repeats raise the power)."""
    pw = [[0] * D for _ in range(4)]
    for slot, idx in enumerate((X, P, dX, dP)):
        for k in idx:
            pw[slot][k] += 1
    return DiffOpExpr.monomial(D, coeff, *pw)


def _pp_bracket(t, rho, lam):
    """``-hbar^2 dP^rho dP^lam + i hbar (X_lam dP^rho + X_rho dP^lam) + X_rho X_lam``."""
    D, h, e = t.D, t.hbar, t.eta
    return (
        _mono(D, -h * h, dP=(rho, lam))
        + _mono(D, 1j * h * e[lam], X=(lam,), dP=(rho,))
        + _mono(D, 1j * h * e[rho], X=(rho,), dP=(lam,))
        + _mono(D, e[rho] * e[lam], X=(rho, lam))
    )


def _xx_bracket(t, rho, lam, sign):
    """``-hbar^2 dX^rho dX^lam + sign i hbar (P_lam dX^rho + P_rho dX^lam) + P_rho P_lam``."""
    D, h, e = t.D, t.hbar, t.eta
    return (
        _mono(D, -h * h, dX=(rho, lam))
        + _mono(D, sign * 1j * h * e[lam], P=(lam,), dX=(rho,))
        + _mono(D, sign * 1j * h * e[rho], P=(rho,), dX=(lam,))
        + _mono(D, e[rho] * e[lam], P=(rho, lam))
    )


def _px_bracket(t, rho, lam):
    """``hbar^2 dP^rho dX^lam + i hbar (P_lam dP^rho - X_rho dX^lam) + P_lam X_rho``."""
    D, h, e = t.D, t.hbar, t.eta
    return (
        _mono(D, h * h, dP=(rho,), dX=(lam,))
        + _mono(D, 1j * h * e[lam], P=(lam,), dP=(rho,))
        - _mono(D, 1j * h * e[rho], X=(rho,), dX=(lam,))
        + _mono(D, e[lam] * e[rho], P=(lam,), X=(rho,))
    )


def displayed_expansions(t: ParamTensors, mu, nu, as_printed=True) -> DispersionGenerators:
    """The closed-form expansions of the six generators, built without composition.

    Sign convention ``section4``.  With ``as_printed=True`` the upper-case
    ``Z+``/``Z-`` carry ``+i hbar (P_mu dX^nu + P_nu dX^mu)`` exactly as
    typeset; composition yields ``-i hbar`` there.  ``as_printed=False``
    uses the composed sign.
    """
    _check_index(t, mu, nu)
    D, h = t.D, t.hbar
    zero = DiffOpExpr.zero(D)
    pp = xx = px = zero
    for rho in range(D):
        for lam in range(D):
            pp = pp + (t.b[mu, rho] * t.b[nu, lam] / h**2) * _pp_bracket(t, rho, lam)
            xx = xx + (t.a[mu, rho] * t.a[nu, lam] / h**2) * _xx_bracket(t, rho, lam, -1.0)
            px = px + (t.b[mu, rho] * t.a[nu, lam] / h**2) * _px_bracket(t, rho, lam)
    z_plus = 0.25 * (pp + xx)
    z_minus = 0.25 * (pp - xx)
    z_cross = 0.5 * px

    B = t.B
    PP = zero
    for rho in range(D):
        for lam in range(D):
            PP = PP + (B[mu, rho] * B[nu, lam] / h**2) * _pp_bracket(t, rho, lam)
    XX = 0.25 * _xx_bracket(t, mu, nu, 1.0 if as_printed else -1.0)
    ZX = zero
    for rho in range(D):
        ZX = ZX + (B[mu, rho] / h) * _px_bracket(t, rho, nu)
    return DispersionGenerators(z_plus, z_minus, z_cross, PP + XX, PP - XX, ZX)
