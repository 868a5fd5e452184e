# %% [markdown]
# # Recurrences against finite differences
#
# Coordinate and momentum act on the coefficient fields in two ways: as a
# combination of neighbouring fields `Psi^{n-1}`, `Psi^{n+1}`, or as a
# differential operator in `(X, P)`. Comparing them on a grid tests which
# differential operators are consistent with the basis.

# %%
from phasekit import BasisParams, GaussianPacket, PhaseSpaceGrid, route_consistency_report

params = BasisParams(X=0.3, P=-0.2, a=0.7)
psi = GaussianPacket(0.3, -0.2, 0.7)

# %% [markdown]
# Two candidate pairs are compared. `printed` is the `(l/hbar)(i hbar dP - X)`,
# `(a/hbar)(-i hbar dX - P)` pair; `derived` differentiates the basis overlap
# directly, which gives `sqrt(2)(l/hbar)(i hbar dP - X)` and
# `sqrt(2)(a/hbar)(-i hbar dX)` for this phase origin.

# %%
for nodes in (32, 64, 128):
    grid = PhaseSpaceGrid.around(0.3, -0.2, 0.7, 1.0, nodes, 5.0)
    for rep in ("printed", "derived"):
        r = route_consistency_report(psi, params, grid, 6, representation=rep)
        print(
            f"{nodes:4d} nodes  {rep:8s} max rel error {r['max_relative_error']:.3e}"
            f"  order {r['min_order']:.2f}..{r['max_order']:.2f}"
        )
