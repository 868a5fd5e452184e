"""Cross-module invariant suite.

Every check returns a record

    {"name", "criterion", "measured", "allowed", "passed", ...}

and :func:`run_all` gathers them into a JSON-ready scorecard.  Records under
``info`` are reported but never affect the verdict.

Perturbations can be injected to confirm that the suite notices them:

``flip-x-orientation``
    transpose the off-diagonal pattern of the coordinate matrix.
``perturb-duality``
    scale the multidimensional ``b`` tensor by ``1 + 1e-6``.
``drop-leibniz``
    compose operators without the Leibniz cross terms.
"""
from __future__ import annotations

import time
from contextlib import contextmanager

import numpy as np

from . import diffop as _diffop
from .basis import BasisParams, basis_wavefunctions, gauss_hermite
from .diffop import (
    DiffOpExpr,
    Polynomial,
    apply_to_polynomial,
    build_p_frak,
    build_p_hat,
    build_x_frak,
    build_x_hat,
    commutator,
    compose,
)
from .grid import apply_fd_nd, convergence_order, route_consistency_report
from .matrices import commutator as mat_commutator
from .matrices import dispersion_matrices, p_matrix, x_matrix
from .multidim import (
    ParamTensors,
    build_dispersion_generators,
    check_multidim_commutators,
    diagonal_tensors,
    displayed_expansions,
    random_dual_tensors,
)
from .transform import (
    GaussianPacket,
    HermitePacket,
    PhaseSpaceGrid,
    bessel_residual,
    forward_coeffs,
    forward_field,
    reconstruct_integral,
    reconstruct_sum,
)

__all__ = ["DEFAULTS", "INJECTIONS", "run_all", "CHECKS"]

INJECTIONS = ("flip-x-orientation", "perturb-duality", "drop-leibniz")

DEFAULTS = {
    "X": 0.3,
    "P": -0.2,
    "a": 0.7,
    "hbar": 1.0,
    "seed": 20240601,
    "route_nodes": 64,
    "route_width": 5.0,
    "route_n_max": 6,
    "algebra_cases": 200,
}


def _record(name, criterion, measured, allowed, passed, **extra):
    rec = {
        "name": name,
        "criterion": criterion,
        "measured": float(measured),
        "allowed": allowed,
        "passed": bool(passed),
    }
    rec.update(extra)
    return rec


def _params(cfg):
    return BasisParams(cfg["X"], cfg["P"], cfg["a"], cfg["hbar"])


# -- 1. orthonormality --------------------------------------------------------------


def check_orthonormality(cfg, n_max=20):
    t0 = time.perf_counter()
    params = _params(cfg)
    rule = gauss_hermite(2 * n_max + 8)
    scale = np.sqrt(2.0) * params.a
    x = params.X + scale * rule.nodes
    phi = basis_wavefunctions(n_max, x, params)
    w = rule.unweighted() * scale
    gram = (phi.conj() * w) @ phi.T
    dev = np.abs(gram - np.eye(n_max + 1)).max()
    elapsed = time.perf_counter() - t0
    return [
        _record("orthonormality", 1, dev, 1e-10, dev < 1e-10, n_max=n_max),
        _record("orthonormality_runtime_s", 1, elapsed, 1.0, elapsed < 1.0),
    ]


# -- 2. dispersion ---------------------------------------------------------------------


def check_dispersion(cfg, N=32, n_var=10):
    params = _params(cfg)
    a, ell = params.a, params.ell
    sx, sp = dispersion_matrices(params, N)
    inner = np.arange(N - 2)
    target = 2 * inner + 1
    diag_dev = max(
        np.abs(sx[inner, inner] / (target * a**2) - 1).max(),
        np.abs(sp[inner, inner] / (target * ell**2) - 1).max(),
    )
    block = np.ix_(inner, inner)
    off = max(
        np.abs(sx[block] - np.diag(np.diag(sx[block]))).max(),
        np.abs(sp[block] - np.diag(np.diag(sp[block]))).max(),
    )

    rule = gauss_hermite(2 * n_var + 16)
    scale = np.sqrt(2.0) * a
    x = params.X + scale * rule.nodes
    phi = basis_wavefunctions(n_var, x, params)
    w = rule.unweighted() * scale
    var = (np.abs(phi) ** 2 * (x - params.X) ** 2) @ w
    var_dev = np.abs(var / ((2 * np.arange(n_var + 1) + 1) * a**2) - 1).max()
    return [
        _record("dispersion_diagonal", 2, diag_dev, 1e-10, diag_dev < 1e-10, N=N),
        _record("dispersion_off_diagonal", 2, off, 1e-12, off < 1e-12, N=N),
        _record("dispersion_quadrature_variance", 2, var_dev, 1e-8, var_dev < 1e-8, n_max=n_var),
    ]


# -- 3. matrix commutator --------------------------------------------------------------


def check_matrix_commutator(cfg, sizes=(4, 8, 16, 32), orientation=1):
    params = _params(cfg)
    out = []
    for N in sizes:
        C = mat_commutator(x_matrix(params, N, orientation), p_matrix(params, N))
        target = 1j * params.hbar * np.eye(N)
        dev = np.abs(C - target)
        interior = dev[: N - 1, : N - 1].max()
        outside = dev.copy()
        outside[N - 1, N - 1] = 0.0
        confined = outside.max() < 1e-12
        out.append(
            _record(
                f"matrix_commutator_N{N}",
                3,
                interior,
                1e-12,
                interior < 1e-12 and confined,
                defect=complex(C[N - 1, N - 1]).imag,
                defect_confined=bool(confined),
            )
        )
    return out


# -- 4. symbolic commutators -------------------------------------------------------------

ALPHAS = (-1.0, -0.3, 0.0, 0.5, 2.0)
UNLINKED_BETAS = (3.0, -0.7)


def check_symbolic_commutators(cfg):
    params = _params(cfg)
    one = DiffOpExpr.identity()
    frak = hat = 0.0
    hat_unlinked = 0.0
    for alpha in ALPHAS:
        pairs = [alpha] + [(alpha, b) for b in UNLINKED_BETAS]
        for ab in pairs:
            c = commutator(build_x_frak(params, ab), build_p_frak(params, ab))
            frak = max(frak, c.max_abs_diff(1j * one))
        c = commutator(build_x_hat(params, alpha), build_p_hat(params, alpha))
        hat = max(hat, c.max_abs_diff(1j * params.hbar * one))
        for ab in pairs[1:]:
            c = commutator(build_x_hat(params, ab), build_p_hat(params, ab))
            hat_unlinked = max(hat_unlinked, c.max_abs_diff(1j * params.hbar * one))
    checks = [
        _record("symbolic_commutator_frak", 4, frak, 1e-13, frak < 1e-13, betas="linked and unlinked"),
        _record("symbolic_commutator_hat", 4, hat, 1e-13, hat < 1e-13, betas="linked"),
    ]
    info = [
        _record(
            "symbolic_commutator_hat_unlinked",
            4,
            hat_unlinked,
            None,
            hat_unlinked < 1e-13,
            note="residual sqrt(2)(a alpha - l beta) for beta != (a/l) alpha",
        )
    ]
    return checks, info


# -- 5. route equivalence ----------------------------------------------------------------


def _route_setup(cfg):
    params = _params(cfg)
    psi = GaussianPacket(cfg["X"], cfg["P"], cfg["a"], cfg["hbar"])
    grid = PhaseSpaceGrid.around(
        cfg["X"], cfg["P"], cfg["a"], cfg["hbar"], cfg["route_nodes"], cfg["route_width"]
    )
    return psi, params, grid


def check_route(cfg):
    psi, params, grid = _route_setup(cfg)
    rep = route_consistency_report(psi, params, grid, cfg["route_n_max"], representation="printed")
    der = route_consistency_report(psi, params, grid, cfg["route_n_max"], representation="derived")
    band = rep["order_band"]
    checks = [
        _record(
            "route_error",
            5,
            rep["max_relative_error"],
            rep["tolerance"],
            rep["max_relative_error"] < rep["tolerance"],
            representation="printed",
        ),
        _record(
            "route_order",
            5,
            rep["min_order"],
            band,
            band[0] <= rep["min_order"] and rep["max_order"] <= band[1],
            max_order=rep["max_order"],
            representation="printed",
        ),
    ]
    info = [
        _record(
            "route_error_derived",
            5,
            der["max_relative_error"],
            der["tolerance"],
            der["max_relative_error"] < der["tolerance"],
            representation="derived",
        ),
        _record(
            "route_order_derived",
            5,
            der["min_order"],
            band,
            band[0] <= der["min_order"] and der["max_order"] <= band[1],
            max_order=der["max_order"],
            representation="derived",
        ),
    ]
    return checks, info


# -- 6. reconstruction --------------------------------------------------------------------


def check_reconstruction(cfg):
    params = _params(cfg)
    X, P, a, hbar = cfg["X"], cfg["P"], cfg["a"], cfg["hbar"]
    xs = np.linspace(X - 5 * a, X + 5 * a, 201)

    psi = 0.6 * HermitePacket(0, X, P, a, hbar) + (0.48 - 0.64j) * HermitePacket(3, X, P, a, hbar)
    c = forward_coeffs(psi, params, 10)
    sum_err = np.abs(reconstruct_sum(c, xs) - psi(xs)).max()

    coherent = GaussianPacket(X, P, a, hbar)
    errs = []
    for nodes, width in ((64, 6.0), (148, 7.0)):
        grid = PhaseSpaceGrid.around(X, P, a, hbar, nodes, width)
        field = forward_field(coherent, 0, grid, a, hbar)
        rec = reconstruct_integral(field, xs)
        errs.append(np.abs(rec.values - coherent(xs)).max())
    shrink = errs[0] / errs[1]

    displaced = GaussianPacket(X + 2 * a, P + 0.5, a, hbar)
    bessel = bessel_residual(displaced, params, 40)
    return [
        _record("reconstruction_sum", 6, sum_err, 1e-8, sum_err < 1e-8),
        _record("reconstruction_integral", 6, errs[0], 1e-3, errs[0] < 1e-3, grid="64x64, +-6a"),
        _record(
            "reconstruction_refinement",
            6,
            shrink,
            ">= 2",
            shrink >= 2.0,
            refined_grid="148x148, +-7a",
            refined_error=float(errs[1]),
        ),
        _record("bessel_residual", 6, abs(bessel), 1e-6, abs(bessel) < 1e-6, n_max=40),
    ]


# -- 7. multidimensional commutators -------------------------------------------------------


def _tensor_cases(cfg, perturb=False):
    rng = np.random.default_rng(cfg["seed"])
    hbar = cfg["hbar"]
    for D in (1, 2, 4):
        widths = np.linspace(0.6, 1.4, D)
        for kind, t in (("diagonal", diagonal_tensors(widths, hbar)), ("random", random_dual_tensors(D, rng, hbar))):
            if perturb:
                t = ParamTensors(t.a, t.b * (1 + 1e-6), t.eta, t.hbar)
            yield D, kind, t


def check_multidim(cfg, perturb=False):
    out = []
    for D, kind, t in _tensor_cases(cfg, perturb):
        worst = max(
            check_multidim_commutators(t, convention=conv)["max_deviation"]
            for conv in ("section4", "section2")
        )
        out.append(_record(f"multidim_commutators_D{D}_{kind}", 7, worst, 1e-12, worst < 1e-12))
    return out


# -- 8. dispersion generators ---------------------------------------------------------------


def gaussian_conjugate(expr: DiffOpExpr) -> DiffOpExpr:
    """``E'`` with ``E (q G) = (E' q) G`` for ``G = exp(-sum(X**2 + P**2)/2)``.

    Each derivative ``d_v`` is replaced by ``d_v - v``.
    """
    D = expr.dim
    out = DiffOpExpr.zero(D)
    for (xp, pp, dx, dp), c in expr.items():
        term = DiffOpExpr.monomial(D, c, xp, pp)
        for k in range(D):
            for _ in range(dx[k]):
                term = compose(term, DiffOpExpr.dX(D, k) - DiffOpExpr.X(D, k))
            for _ in range(dp[k]):
                term = compose(term, DiffOpExpr.dP(D, k) - DiffOpExpr.P(D, k))
        out = out + term
    return out


def _grid_action_error(expr, q, nodes, extent=4.0):
    D = expr.dim
    ax = np.linspace(-extent, extent, nodes)
    mesh = np.meshgrid(*([ax] * (2 * D)), indexing="ij", sparse=True)
    X, P = mesh[:D], mesh[D:]
    G = np.exp(-0.5 * sum(v**2 for v in mesh))
    f = q(X, P) * G
    exact = apply_to_polynomial(gaussian_conjugate(expr), q)(X, P) * G
    fd = apply_fd_nd(expr, f, [ax] * D, [ax] * D)
    inner = (slice(1, -1),) * (2 * D)
    return float(np.abs(fd - exact)[inner].max() / np.abs(exact).max()), ax[1] - ax[0]


def check_generators(cfg):
    t = diagonal_tensors([0.6, 1.4], cfg["hbar"])
    names = ("z_plus", "z_minus", "z_cross")
    worst = 0.0
    bold_printed = bold_composed = 0.0
    for mu in range(2):
        for nu in range(2):
            g = build_dispersion_generators(t, mu, nu)
            shown = displayed_expansions(t, mu, nu, as_printed=True)
            fixed = displayed_expansions(t, mu, nu, as_printed=False)
            for n in names:
                worst = max(worst, getattr(g, n).max_abs_diff(getattr(shown, n)))
            for n in ("Z_plus", "Z_minus", "Z_cross"):
                bold_printed = max(bold_printed, getattr(g, n).max_abs_diff(getattr(shown, n)))
                bold_composed = max(bold_composed, getattr(g, n).max_abs_diff(getattr(fixed, n)))

    q = Polynomial(
        2, {((0, 0), (0, 0)): 1.0, ((1, 0), (0, 1)): 0.3 + 0.2j, ((0, 1), (0, 0)): -0.5}
    )
    g = build_dispersion_generators(t, 0, 1)
    coarse = fine = 0.0
    orders = []
    for n in names:
        e_c, h_c = _grid_action_error(getattr(g, n), q, 21)
        e_f, h_f = _grid_action_error(getattr(g, n), q, 41)
        coarse, fine = max(coarse, e_c), max(fine, e_f)
        orders.append(convergence_order(e_c, e_f, h_c, h_f))
    ok = fine < 5e-2 and 1.7 <= min(orders) and max(orders) <= 2.3
    checks = [
        _record("generator_expansions", 8, worst, 1e-12, worst < 1e-12, D=2),
        _record(
            "generator_grid_action",
            8,
            fine,
            {"relative_error": 5e-2, "order_band": [1.7, 2.3]},
            ok,
            coarse_error=coarse,
            min_order=min(orders),
            max_order=max(orders),
        ),
    ]
    info = [
        _record(
            "bold_generator_expansions_as_printed",
            8,
            bold_printed,
            1e-12,
            bold_printed < 1e-12,
            note="upper-case Z+/Z- display carries +i hbar on the P dX terms",
        ),
        _record(
            "bold_generator_expansions_composed_sign",
            8,
            bold_composed,
            1e-12,
            bold_composed < 1e-12,
        ),
    ]
    return checks, info


# -- 9. algebra engine ----------------------------------------------------------------------


def random_expr(rng, dim, max_degree=3, n_terms=3):
    """Random expression whose terms have total degree (powers plus derivatives) <= ``max_degree``."""
    out = DiffOpExpr.zero(dim)
    for _ in range(n_terms):
        pw = np.zeros((4, dim), dtype=int)
        for _ in range(rng.integers(0, max_degree + 1)):
            pw[rng.integers(4), rng.integers(dim)] += 1
        c = complex(rng.normal(), rng.normal())
        out = out + DiffOpExpr.monomial(dim, c, *pw.tolist())
    return out


def random_poly(rng, dim, max_degree=3, n_terms=4):
    terms = {}
    for _ in range(n_terms):
        pw = np.zeros((2, dim), dtype=int)
        for _ in range(rng.integers(0, max_degree + 1)):
            pw[rng.integers(2), rng.integers(dim)] += 1
        key = (tuple(pw[0].tolist()), tuple(pw[1].tolist()))
        terms[key] = terms.get(key, 0) + complex(rng.normal(), rng.normal())
    return Polynomial(dim, terms)


def _scale(*exprs):
    return max([1.0] + [abs(c) for e in exprs for _, c in e.items()])


def check_algebra(cfg):
    rng = np.random.default_rng(cfg["seed"] + 9)
    cases = cfg["algebra_cases"]
    assoc = homo = jacobi = 0.0
    for _ in range(cases):
        dim = int(rng.integers(1, 3))
        A, B, C = (random_expr(rng, dim) for _ in range(3))
        lhs, rhs = compose(compose(A, B), C), compose(A, compose(B, C))
        assoc = max(assoc, lhs.max_abs_diff(rhs) / _scale(lhs, rhs))

        q = random_poly(rng, dim)
        one = apply_to_polynomial(compose(A, B), q)
        two = apply_to_polynomial(A, apply_to_polynomial(B, q))
        s = max([1.0] + [abs(c) for c in one.terms.values()])
        homo = max(homo, one.max_abs_diff(two) / s)

        J = (
            commutator(A, commutator(B, C))
            + commutator(B, commutator(C, A))
            + commutator(C, commutator(A, B))
        )
        jacobi = max(jacobi, J.max_abs_diff(DiffOpExpr.zero(dim)) / _scale(compose(compose(A, B), C)))
    return [
        _record("algebra_associativity", 9, assoc, 1e-10, assoc < 1e-10, cases=cases),
        _record("algebra_homomorphism", 9, homo, 1e-10, homo < 1e-10, cases=cases),
        _record("algebra_jacobi", 9, jacobi, 1e-10, jacobi < 1e-10, cases=cases),
    ]


# -- driver ------------------------------------------------------------------------------------


def _naive_compose(A, B):
    """Juxtaposition without reordering cross terms."""
    out = {}
    for (xa, pa, dxa, dpa), ca in A.items():
        for (xb, pb, dxb, dpb), cb in B.items():
            key = tuple(
                tuple(u + v for u, v in zip(s, t))
                for s, t in ((xa, xb), (pa, pb), (dxa, dxb), (dpa, dpb))
            )
            out[key] = out.get(key, 0) + ca * cb
    return DiffOpExpr(A.dim, out)


@contextmanager
def _leibniz_dropped():
    saved = _diffop.compose
    _diffop.compose = _naive_compose
    globals()["compose"] = _naive_compose
    try:
        yield
    finally:
        _diffop.compose = saved
        globals()["compose"] = saved


CHECKS = {
    1: "orthonormality",
    2: "dispersion eigenvalues",
    3: "matrix commutator",
    4: "symbolic commutators",
    5: "route equivalence",
    6: "reconstruction",
    7: "multidimensional commutators",
    8: "dispersion generators",
    9: "algebra engine",
}


def run_all(config=None, inject=None, criteria=None) -> dict:
    """Run the suite; returns the scorecard dict.

    ``inject`` is ``None`` or one of :data:`INJECTIONS`.  ``criteria`` limits
    the run to a subset of criterion numbers.
    """
    cfg = dict(DEFAULTS)
    cfg.update(config or {})
    if inject is not None and inject not in INJECTIONS:
        raise ValueError(f"unknown injection {inject!r}; choose from {INJECTIONS}")
    wanted = set(criteria or CHECKS)
    orientation = -1 if inject == "flip-x-orientation" else 1

    checks, info = [], []

    def run(n, fn):
        if n not in wanted:
            return
        result = fn()
        if isinstance(result, tuple):
            checks.extend(result[0])
            info.extend(result[1])
        else:
            checks.extend(result)

    def body():
        run(1, lambda: check_orthonormality(cfg))
        run(2, lambda: check_dispersion(cfg))
        run(3, lambda: check_matrix_commutator(cfg, orientation=orientation))
        run(4, lambda: check_symbolic_commutators(cfg))
        run(5, lambda: check_route(cfg))
        run(6, lambda: check_reconstruction(cfg))
        run(7, lambda: check_multidim(cfg, perturb=inject == "perturb-duality"))
        run(8, lambda: check_generators(cfg))
        run(9, lambda: check_algebra(cfg))

    if inject == "drop-leibniz":
        with _leibniz_dropped():
            body()
    else:
        body()

    by_criterion = {}
    for rec in checks:
        k = str(rec["criterion"])
        by_criterion[k] = by_criterion.get(k, True) and rec["passed"]
    return {
        "config": cfg,
        "inject": inject,
        "n_checks": len(checks),
        "n_passed": sum(r["passed"] for r in checks),
        "criteria": by_criterion,
        "checks": checks,
        "info": info,
        "passed": all(r["passed"] for r in checks),
    }
