# %% [markdown]
# # Phase-space fields and the two reconstruction routes
#
# Sweeping the basis centre over a grid turns each coefficient `Psi^n` into a
# field over `(X, P)`. The wave function comes back either from the
# coefficients at one centre (a finite sum) or from a single field integrated
# over the plane.

# %%
import numpy as np

from phasekit import (
    BasisParams,
    GaussianPacket,
    HermitePacket,
    PhaseSpaceGrid,
    forward_coeffs,
    forward_field,
    reconstruct_integral,
    reconstruct_sum,
)

X0, P0, a = 0.3, -0.2, 0.7
xs = np.linspace(-3, 3, 121)

# %% [markdown]
# ## Sum route
#
# A state built from a handful of basis members is recovered exactly once
# `n_max` covers them.

# %%
params = BasisParams(X0, P0, a)
psi = 0.6 * HermitePacket(0, X0, P0, a) + (0.48 - 0.64j) * HermitePacket(3, X0, P0, a)
c = forward_coeffs(psi, params, 10)
print("sum route max error:", np.abs(reconstruct_sum(c, xs) - psi(xs)).max())

# %% [markdown]
# ## Integral route
#
# The trapezoid rule over the plane is accurate once the grid reaches the
# tails of the field. Both spacing and extent matter: halving the spacing
# alone barely helps when the domain edge dominates the error.

# %%
coherent = GaussianPacket(X0, P0, a)
for nodes, width in ((64, 6.0), (127, 6.0), (148, 7.0)):
    grid = PhaseSpaceGrid.around(X0, P0, a, 1.0, nodes, width)
    rec = reconstruct_integral(forward_field(coherent, 0, grid, a), xs)
    err = np.abs(rec.values - coherent(xs)).max()
    print(f"{nodes:4d} nodes, +-{width} widths: max error {err:.3e}  flags={sorted(rec.flags)}")
