# %% [markdown]
# # Simulating paths and the Lyapunov exponent
#
# The sign of the top Lyapunov exponent `gamma0 = E log a0(eta)` decides
# whether volatility is stationary (`gamma0 < 0`) or grows exponentially.
# Paths are simulated in the log domain, so explosive paths do not overflow.

# %%
from garchf import InnovationSpec, Zeta, calibrate_beta, lyapunov_exponent, simulate

gauss = InnovationSpec.gaussian()
zeta = Zeta.make(1.0, 1.0, 0.2, 0.2, 0.9)
g0 = lyapunov_exponent(zeta.theta, 1.0, gauss)
print(f"gamma0 (quadrature) = {g0:.5f}")

# %%
g_mc, se = lyapunov_exponent(zeta.theta, 1.0, gauss, "montecarlo", m=200_000, seed=1, return_se=True)
print(f"gamma0 (simulation) = {g_mc:.5f} +- {se:.5f}")

# %% [markdown]
# On an explosive path `log h_t / t` settles near `gamma0`.

# %%
path = simulate(zeta, gauss, 5000, seed=7)
print("log h_t / t at t = 5000:", path.log_h[-1] / 5000)

# %% [markdown]
# The boundary model: choose `beta` so that `gamma0 = 0` exactly.

# %%
b = calibrate_beta(0.2, 0.2, 1.0, gauss)
print(f"boundary beta = {b:.10f}")
print("gamma0 there:", lyapunov_exponent(Zeta.make(1.0, 1.0, 0.2, 0.2, b).theta, 1.0, gauss))

# %%
for nu in (5, 8, 12):
    print(nu, lyapunov_exponent(zeta.theta, 1.0, InnovationSpec.student(nu)))
