# %% [markdown]
# # Quasi-maximum likelihood and the universal covariance estimator
#
# The same plug-in covariance is valid whether the data are stationary or
# explosive, so confidence intervals do not require knowing the regime.

# %%
import numpy as np

from garchf import InnovationSpec, ParamBox, Zeta, covariance_report, fit, simulate
from garchf.oracles import information_matrix_I

gauss = InnovationSpec.gaussian()

# %%
truth = Zeta.make(1.0, 1.0, 0.2, 0.2, 0.9)  # explosive
path = simulate(truth, gauss, 5000, seed=11)
res = fit(path, ParamBox.default("any"))
print(res.zeta_hat.as_dict(), "converged:", res.converged)

# %%
rep = covariance_report(res)
for name in rep.names:
    print(f"{name:12s} se={rep.se[name]:.4f} ci={rep.ci[name]}")

# %% [markdown]
# In the explosive regime the estimated information should approach the
# population matrix computed from the limiting derivative series.

# %%
info = information_matrix_I(truth.theta, 1.0, gauss, m=50_000, seed=1)
print(np.round(info, 2))
print(np.round(rep.I_star_hat, 2))
print("relative difference:", np.linalg.norm(rep.I_star_hat - info) / np.linalg.norm(info))

# %% [markdown]
# Estimating the power `delta` jointly.

# %%
res_d = fit(path, ParamBox.default("any", None))
print(covariance_report(res_d).ci["delta"])
