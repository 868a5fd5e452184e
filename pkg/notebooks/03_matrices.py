# %% [markdown]
# # Truncated matrices
#
# Coordinate and momentum are tridiagonal in the basis. Truncating to `N`
# states keeps every product exact except in the last row and column.

# %%
import numpy as np

from phasekit import BasisParams, dispersion_matrices, p_matrix, x_matrix
from phasekit.matrices import commutator, z_generators_1d

params = BasisParams(X=0.3, P=-0.2, a=0.7, hbar=1.3)

# %%
for N in (4, 8):
    C = commutator(x_matrix(params, N), p_matrix(params, N))
    print(f"N={N}: diag([x, p]) / (i hbar) =", np.round((np.diag(C) / (1j * params.hbar)).real, 12))

# %% [markdown]
# The dispersion operators are diagonal with entries `(2n + 1) a^2` and
# `(2n + 1) l^2` away from the truncation edge.

# %%
sx, sp = dispersion_matrices(params, 8)
print(np.round(np.diag(sx).real / params.a**2, 12))
print(np.round(np.diag(sp).real / params.ell**2, 12))

# %% [markdown]
# The one-dimensional generators: `z_plus` is diagonal, `z_minus` and
# `z_cross` couple `n` and `n + 2`.

# %%
zp, zm, zx = z_generators_1d(6)
np.set_printoptions(precision=3, suppress=True, linewidth=120)
print(zp.real)
print(zm.real)
print(zx.imag)
