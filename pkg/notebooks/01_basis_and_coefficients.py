# %% [markdown]
# # Displaced Hermite-Gaussian basis and expansion coefficients
#
# A basis family is fixed by a centre `(X, P)`, a coordinate width `a` and
# `hbar`; the momentum width follows as `l = hbar / (2 a)`. Here we build a
# few members, check they are orthonormal, and expand a coherent packet that
# sits away from the basis centre.

# %%
import numpy as np

from phasekit import BasisParams, GaussianPacket, basis_wavefunctions, bessel_residual, forward_coeffs, gauss_hermite

params = BasisParams(X=0.0, P=0.0, a=0.7, hbar=1.0)
print("momentum width l =", params.ell)

# %% [markdown]
# ## Orthonormality on Gauss-Hermite nodes
#
# With `u = (x - X) / (sqrt(2) a)` the basis functions are Hermite functions
# of `u` times a plane wave, so a Gauss-Hermite rule integrates the overlaps
# to rounding.

# %%
rule = gauss_hermite(48)
scale = np.sqrt(2.0) * params.a
x = params.X + scale * rule.nodes
phi = basis_wavefunctions(20, x, params)
gram = (phi.conj() * rule.unweighted() * scale) @ phi.T
print("max |<m|n> - delta| =", np.abs(gram - np.eye(21)).max())

# %% [markdown]
# ## Coefficients of a displaced coherent packet
#
# A coherent packet with the same width, displaced to `(X0, P0)`, has
# Poisson-distributed weights `|Psi^n|^2` with mean
# `(X0 - X)^2 / (4 a^2) + (P0 - P)^2 / (4 l^2)`.

# %%
X0, P0 = 1.4, 0.6
c = forward_coeffs(GaussianPacket(X0, P0, params.a), params, 15)
lam = X0**2 / (4 * params.a**2) + P0**2 / (4 * params.ell**2)
weights = np.abs(c.coeffs) ** 2
for n in range(6):
    poisson = np.exp(-lam) * lam**n / np.prod(np.arange(1, n + 1))
    print(f"n={n}  |Psi^n|^2={weights[n]:.12f}  poisson={poisson:.12f}")

# %% [markdown]
# The missing weight after truncation shrinks quickly with `n_max`:

# %%
for n_max in (5, 10, 20, 40):
    print(n_max, bessel_residual(GaussianPacket(X0, P0, params.a), params, n_max))
