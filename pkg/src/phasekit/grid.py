"""Finite-difference action of phase-space operators and the ladder-recurrence route.

Two ways to act with the dimensionless coordinate/momentum on ``Psi^n``:

* recurrence: a pointwise combination of the neighbouring fields
  ``Psi^{n-1}`` and ``Psi^{n+1}`` (exact);
* differential: a :class:`~phasekit.diffop.DiffOpExpr` applied by second-order
  finite differences on the ``(X, P)`` grid.

:func:`route_consistency_report` measures how far apart the two routes are and
how that gap scales under grid refinement.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisParams
from .diffop import DiffOpExpr, build_p_frak, build_x_frak, derived_p_frak, derived_x_frak
from .transform import PhaseSpaceField, PhaseSpaceGrid, forward_stack

__all__ = [
    "FieldStack",
    "field_stack",
    "derivative",
    "apply_fd",
    "apply_fd_nd",
    "apply_recurrence_p",
    "apply_recurrence_x",
    "route_consistency_report",
    "convergence_order",
    "ORDER_BAND",
    "ROUTE_TOL",
]

ORDER_BAND = (1.7, 2.3)
ROUTE_TOL = 1e-3
MIN_NODES = 5


@dataclass(frozen=True, eq=False)
class FieldStack:
    """``Psi^0 .. Psi^{n_max}`` of one state on one grid; ``values[n, i, j]``."""

    grid: PhaseSpaceGrid
    a: float
    values: np.ndarray
    hbar: float = 1.0
    phase_origin: str = "x"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 3 or values.shape[1:] != (self.grid.nX, self.grid.nP):
            raise ValueError("stack values must have shape (n_max + 1, nX, nP)")
        object.__setattr__(self, "values", values)

    @property
    def n_max(self) -> int:
        return self.values.shape[0] - 1

    def field(self, n) -> PhaseSpaceField:
        return PhaseSpaceField(self.grid, n, self.a, self.values[n], self.hbar, self.phase_origin)

    def __add__(self, other):
        return FieldStack(self.grid, self.a, self.values + other.values, self.hbar, self.phase_origin)

    def __rmul__(self, c):
        return FieldStack(self.grid, self.a, c * self.values, self.hbar, self.phase_origin)


def field_stack(psi, params: BasisParams, grid: PhaseSpaceGrid, n_max, quad_points=None) -> FieldStack:
    """Forward-transform ``psi`` on every grid node for ``n = 0 .. n_max``."""
    values, _ = forward_stack(
        psi, grid, params.a, n_max, params.hbar, params.phase_origin, quad_points
    )
    return FieldStack(grid, params.a, values, params.hbar, params.phase_origin)


# -- finite differences ---------------------------------------------------------


def _d1(f, h, axis):
    return np.gradient(f, h, axis=axis, edge_order=2)


def _d2(f, h, axis):
    f = np.moveaxis(f, axis, 0)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h**2
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h**2
    out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / h**2
    return np.moveaxis(out, 0, axis)


def derivative(values, grid: PhaseSpaceGrid, dx, dp):
    """``dX^dx dP^dp`` of grid values, ``dx + dp <= 2``.

    Central second-order stencils inside, one-sided second-order stencils on
    the boundary rows and columns.
    """
    if dx + dp > 2:
        raise ValueError(f"derivative order {dx + dp} exceeds 2")
    if grid.nX < MIN_NODES or grid.nP < MIN_NODES:
        raise ValueError(f"grid needs at least {MIN_NODES} nodes per axis for the stencils")
    f = np.asarray(values)
    if dx == 2:
        return _d2(f, grid.hX, 0)
    if dp == 2:
        return _d2(f, grid.hP, 1)
    if dx:
        f = _d1(f, grid.hX, 0)
    if dp:
        f = _d1(f, grid.hP, 1)
    return f


def apply_fd(expr: DiffOpExpr, field: PhaseSpaceField) -> PhaseSpaceField:
    """Apply a one-dimensional operator to a field by finite differences."""
    if expr.dim != 1:
        raise ValueError("apply_fd handles dim = 1 expressions (variables X, P)")
    grid = field.grid
    XX, PP = grid.mesh()
    out = np.zeros_like(field.values)
    cache = {}
    for (xpow, ppow, dxpow, dppow), c in expr.items():
        key = (dxpow[0], dppow[0])
        if key not in cache:
            cache[key] = derivative(field.values, grid, *key)
        out = out + c * XX ** xpow[0] * PP ** ppow[0] * cache[key]
    return field.with_values(out)


def apply_fd_nd(expr: DiffOpExpr, values, X_axes, P_axes):
    """Apply a ``dim``-dimensional operator to samples on a tensor-product grid.

    ``values`` has axes ``(X^0 .. X^{D-1}, P^0 .. P^{D-1})``; ``X_axes`` and
    ``P_axes`` are the uniform node vectors.  Derivative order per term is at
    most two.
    """
    D = expr.dim
    if len(X_axes) != D or len(P_axes) != D:
        raise ValueError(f"need {D} X axes and {D} P axes")
    axes = [np.asarray(v, dtype=float) for v in (*X_axes, *P_axes)]
    values = np.asarray(values)
    if values.shape != tuple(len(v) for v in axes):
        raise ValueError("values shape does not match the axes")
    if any(len(v) < MIN_NODES for v in axes):
        raise ValueError(f"grid needs at least {MIN_NODES} nodes per axis for the stencils")
    steps = [v[1] - v[0] for v in axes]
    mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
    cache = {}
    out = np.zeros(values.shape, dtype=complex)
    for (xpow, ppow, dxpow, dppow), c in expr.items():
        orders = tuple(dxpow) + tuple(dppow)
        if sum(orders) > 2:
            raise ValueError("apply_fd_nd handles derivative order <= 2")
        if orders not in cache:
            f = values
            for ax, k in enumerate(orders):
                if k == 2:
                    f = _d2(f, steps[ax], ax)
                elif k == 1:
                    f = _d1(f, steps[ax], ax)
            cache[orders] = f
        coef = c
        for ax, k in enumerate(tuple(xpow) + tuple(ppow)):
            if k:
                coef = coef * mesh[ax] ** k
        out = out + coef * cache[orders]
    return out


# -- recurrences ---------------------------------------------------------------


def _neighbours(stack: FieldStack, n):
    if not 0 <= n <= stack.n_max - 1:
        raise IndexError(
            f"recurrence at n = {n} needs Psi^{n + 1}; stack holds n <= {stack.n_max}"
        )
    lower = stack.values[n - 1] if n > 0 else np.zeros_like(stack.values[0])
    return lower, stack.values[n + 1]


def apply_recurrence_p(stack: FieldStack, n) -> PhaseSpaceField:
    """``<n|pi|psi> = (sqrt(n) Psi^{n-1} + sqrt(n+1) Psi^{n+1}) / sqrt(2)``."""
    lower, upper = _neighbours(stack, n)
    values = (np.sqrt(n) * lower + np.sqrt(n + 1) * upper) / np.sqrt(2.0)
    return stack.field(n).with_values(values)


def apply_recurrence_x(stack: FieldStack, n) -> PhaseSpaceField:
    """``<n|xi|psi> = -i (sqrt(n) Psi^{n-1} - sqrt(n+1) Psi^{n+1}) / sqrt(2)``."""
    lower, upper = _neighbours(stack, n)
    values = -1j * (np.sqrt(n) * lower - np.sqrt(n + 1) * upper) / np.sqrt(2.0)
    return stack.field(n).with_values(values)


# -- consistency report ----------------------------------------------------------


def convergence_order(err_coarse, err_fine, h_coarse, h_fine) -> float:
    """Observed order ``log(e_h / e_h') / log(h / h')``."""
    if err_fine <= 0 or err_coarse <= 0:
        return float("nan")
    return float(np.log(err_coarse / err_fine) / np.log(h_coarse / h_fine))


def _operators(params, representation):
    if representation == "printed":
        return {"p": build_p_frak(params), "x": build_x_frak(params)}
    if representation == "derived":
        return {"p": derived_p_frak(params), "x": derived_x_frak(params)}
    raise ValueError(f"representation must be 'printed' or 'derived', got {representation!r}")


def _route_errors(stack: FieldStack, ops, n_values):
    inner = (slice(1, -1), slice(1, -1))
    errors = {}
    for n in n_values:
        field = stack.field(n)
        for name, recurrence in (("p", apply_recurrence_p), ("x", apply_recurrence_x)):
            diff = apply_fd(ops[name], field).values - recurrence(stack, n).values
            errors[(n, name)] = float(np.abs(diff[inner]).max())
    return errors


def route_consistency_report(
    psi,
    params: BasisParams,
    grid: PhaseSpaceGrid,
    n_max,
    representation="printed",
    refine=2,
    tol=ROUTE_TOL,
    order_band=ORDER_BAND,
    quad_points=None,
) -> dict:
    """Compare recurrence and finite-difference routes for ``n = 1 .. n_max - 1``.

    ``representation="printed"`` uses the printed pair
    ``p = (l/hbar)(i hbar dP - X)``, ``x = (a/hbar)(-i hbar dX - P)``;
    ``"derived"`` uses :func:`~phasekit.diffop.derived_p_frak` and
    :func:`~phasekit.diffop.derived_x_frak`.  The comparison is repeated on
    ``grid.refined(refine)`` to estimate the convergence order.  Boundary
    nodes are excluded everywhere.

    Returns a JSON-ready dict; ``entries`` holds one record per ``(n, op)``
    with ``error``, ``relative_error`` (divided by ``max |Psi|`` over the
    stack), ``error_refined``, ``order`` and ``passed``.
    """
    if n_max < 3:
        raise ValueError("route consistency needs n_max >= 3")
    ops = _operators(params, representation)
    fine_grid = grid.refined(refine)
    coarse = field_stack(psi, params, grid, n_max, quad_points)
    fine = field_stack(psi, params, fine_grid, n_max, quad_points)
    n_values = range(1, n_max)
    e_coarse = _route_errors(coarse, ops, n_values)
    e_fine = _route_errors(fine, ops, n_values)
    scale = float(np.abs(coarse.values).max())
    h_ratio = grid.hX / fine_grid.hX

    entries = []
    for (n, name), err in e_coarse.items():
        err_f = e_fine[(n, name)]
        order = convergence_order(err, err_f, grid.hX, fine_grid.hX)
        rel = err / scale if scale > 0 else 0.0
        entries.append(
            {
                "n": n,
                "op": name,
                "error": err,
                "relative_error": rel,
                "error_refined": err_f,
                "shrink": err / err_f if err_f > 0 else float("inf"),
                "order": order,
                "passed": bool(rel < tol and order_band[0] <= order <= order_band[1]),
            }
        )
    return {
        "representation": representation,
        "params": params.to_dict(),
        "grid": grid.to_dict(),
        "refined_grid": fine_grid.to_dict(),
        "h_ratio": h_ratio,
        "n_max": n_max,
        "max_abs_psi": scale,
        "tolerance": tol,
        "order_band": list(order_band),
        "max_relative_error": max(e["relative_error"] for e in entries),
        "min_order": min(e["order"] for e in entries),
        "max_order": max(e["order"] for e in entries),
        "entries": entries,
        "passed": all(e["passed"] for e in entries),
    }
