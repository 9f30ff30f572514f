# %% [markdown]
# # When does the entanglement die?
#
# Vanishing points of the balanced and least balanced cuts, and the strength
# at which the balanced negativity has dropped to 1% of its initial value,
# over a (d, N) grid with equal amplitudes.  Writes three CSV files that can
# be plotted with the scripts generated by ``ghzdecay sweep --plot-script``.

# %%
from ghzdecay.sweep import Quantity, SweepRequest, run_sweep

grid = dict(d_values=range(2, 51), N_values=(4, 6, 8))
tables = {
    "p_balanced.csv": run_sweep(SweepRequest(Quantity.P_BALANCED, **grid)),
    "p_epsilon.csv": run_sweep(SweepRequest(Quantity.P_EPSILON, epsilon=0.01, **grid)),
    "p_least_balanced.csv": run_sweep(SweepRequest(Quantity.P_LEAST_BALANCED, **grid)),
}
for name, table in tables.items():
    with open(name, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(table.to_csv())

# %%
for name, table in tables.items():
    print(name)
    for d in (2, 3, 10, 50):
        vals = [table.lookup(d=d, N=N)["value"] for N in (4, 6, 8)]
        print(f"  d={d:2d}  " + "  ".join(f"N={N}: {v:.5f}" for N, v in zip((4, 6, 8), vals)))

# %% [markdown]
# The balanced vanishing point grows with both N and d.  The 1% threshold and
# the least balanced vanishing point grow with d but shrink with N.

# %%
from ghzdecay import critical_p_balanced_closed_form, critical_p_partition, make_ghz, oracle_critical_p

spec = make_ghz(3, 4, [1, 1, 1])
print("closed form      ", critical_p_balanced_closed_form(spec).value)
print("exact block root ", critical_p_partition(spec, "depolarizing", 2).value)
print("dense oracle     ", oracle_critical_p(spec, "depolarizing", 2))
