# %% [markdown]
# # Several dimensions, a metric, and the dispersion generators
#
# Width tensors `a` and `b` with `b a = (hbar/2) I` replace the scalar pair.
# With a diagonal signature `eta`, `[p_mu, x_nu]` reproduces `i eta_mu_nu`
# when `a diag(eta)` is symmetric.

# %%
import numpy as np

from phasekit import (
    build_dispersion_generators,
    check_multidim_commutators,
    diagonal_tensors,
    displayed_expansions,
    random_dual_tensors,
    render,
    validate_tensors,
)

t = random_dual_tensors(3, rng=1, hbar=1.0)
print(validate_tensors(t))
rep = check_multidim_commutators(t)
print("max deviation:", rep["max_deviation"])

# %% [markdown]
# Generators composed from the first-order operators, compared with the
# expansions written out term by term.

# %%
t2 = diagonal_tensors([0.6, 1.4])
g = build_dispersion_generators(t2, 0, 1)
d = displayed_expansions(t2, 0, 1)
print(render(g.z_cross))
for name in g._fields:
    print(f"{name:8s} difference {getattr(g, name).max_abs_diff(getattr(d, name)):.2e}")

# %% [markdown]
# The upper-case `Z+` and `Z-` differ from the closed form only in the sign of
# the `P dX` terms; using the composed sign closes the gap.

# %%
d_fixed = displayed_expansions(t2, 0, 1, as_printed=False)
print(np.max([getattr(g, n).max_abs_diff(getattr(d_fixed, n)) for n in g._fields]))
