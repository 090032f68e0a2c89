# %% [markdown]
# # Monte Carlo experiments
#
# Replications are seeded by index, so results do not depend on the
# number of worker processes (set `GARCHF_THREADS`).

# %%
from garchf import InnovationSpec, Zeta
from garchf.montecarlo import TABLE_HEADER, Scenario, run_scenario

sc = Scenario("explosive-small", Zeta.make(1.0, 1.0, 0.2, 0.2, 0.9), InnovationSpec.gaussian(), 2000)
res = run_scenario(sc, 40, seed=5)
print(TABLE_HEADER)
for row in res.table():
    print(row)
