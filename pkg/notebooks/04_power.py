# %% [markdown]
# # Local power and the efficiency gap
#
# The QMLE-based symmetry test attains the power envelope under Gaussian
# innovations and falls short for heavy tails.

# %%
import numpy as np

from garchf import InnovationSpec, Zeta, calibrate_beta
from garchf import power
from garchf.oracles import information_matrix_I

theta = Zeta.make(1.0, 1.0, 0.2, 0.2, 0.9).theta
info = information_matrix_I(theta, 1.0, InnovationSpec.gaussian(), m=50_000, seed=0)
grid = np.linspace(0, 5, 11)

# %%
for spec in (InnovationSpec.gaussian(), InnovationSpec.student(5), InnovationSpec.student(8)):
    curve = power.power_curve(spec, info, grid)
    print(spec, np.round(curve.gap, 4))

# %% [markdown]
# Drift of the stationarity statistic at the boundary model.

# %%
gauss = InnovationSpec.gaussian()
b0 = Zeta.make(1.0, 1.0, 0.2, 0.2, calibrate_beta(0.2, 0.2, 1.0, gauss)).theta
for tau in [(0, 1, 1, 0), (0, 2, 2, 0), (0, 0, 0, -1)]:
    alt = power.LocalAlternative(tau, b0, 1.0, gauss)
    print(tau, f"c_f={power.c_f(alt):.3f}", f"power ST={power.stationarity_local_power(alt):.3f}")
