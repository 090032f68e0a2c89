# %% [markdown]
# # Population oracles
#
# `d_t` are the limits of the filter's derivative ratios at the truth and
# `v_t` is the limit of `sigma_t^delta(theta) / h_t`.  Both are defined when
# the regime is explosive.

# %%
import numpy as np

from garchf import InnovationSpec, Zeta
from garchf import oracles

gauss = InnovationSpec.gaussian()
theta = Zeta.make(1.0, 1.0, 0.2, 0.2, 0.9).theta

# %%
d = oracles.sample_dt(theta, 1.0, gauss, seed=1, m=20_000)
print("mean d_t:", d.matrix().mean(axis=0), "truncation used:", d.truncation)

# %%
v = oracles.sample_vt(theta.vartheta, theta, 1.0, gauss, seed=2, m=20_000)
print("v_t at the truth:", v.mean(), v.std())
v_alt = oracles.sample_vt((0.25, 0.15, 0.9), theta, 1.0, gauss, seed=2, m=20_000)
print("Kullback-type contrast away from the truth:", oracles.kullback_terms(v_alt, 1.0).mean())
