# %% [markdown]
# # Differential operators on phase-space fields
#
# Operators acting on `Psi^n(X, P)` are polynomials in `X`, `P`, `d/dX`,
# `d/dP`, kept in normal order. Composition applies the Leibniz rule, so
# commutators come out as exact coefficient lists.

# %%
from phasekit import BasisParams, DiffOpExpr, build_p_frak, build_p_hat, build_x_frak, build_x_hat, commutator, render

params = BasisParams(a=0.7, hbar=1.3)
E = DiffOpExpr
print(render(E.dX() @ E.X()))
print(render(E.monomial(1, 1.0, dppow=[2]) @ E.monomial(1, 1.0, ppow=[2])))

# %% [markdown]
# The dimensionless pair commutes to `i` for any extra `alpha d/dP` and
# `beta d/dX` pieces. The dimensionful pair needs `beta = (a/l) alpha` to keep
# `i hbar`; otherwise a constant `sqrt(2)(a alpha - l beta)` appears.

# %%
for ab in (0.5, (0.5, 3.0)):
    print("alpha, beta =", ab)
    print("  [x_frak, p_frak] =", render(commutator(build_x_frak(params, ab), build_p_frak(params, ab))))
    print("  [x, p]           =", render(commutator(build_x_hat(params, ab), build_p_hat(params, ab))))
