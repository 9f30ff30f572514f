# %% [markdown]
# # Large-N and large-d behaviour
#
# * balanced vanishing point  -> 2d / (2d + 1 + sqrt 5) as N grows
# * 1% threshold              ~  -ln(0.01) / N for large N
# * 1% threshold              -> 1 - 0.01^(1/N) as d grows

# %%
from ghzdecay.sweep import asymptote_report

table = asymptote_report([2, 3, 5], [4, 16, 64, 256, 1024], epsilon=0.01)
print(f"{'d':>3} {'N':>5} {'p_bal':>9} {'limit':>9} {'rel':>9} {'p_eps':>9} {'-ln e/N':>9} {'rel':>9}")
for r in table.records():
    print(f"{r['d']:3d} {r['N']:5d} {r['p_balanced']:9.6f} {r['balanced_limit']:9.6f} "
          f"{r['balanced_rel_dev']:9.2e} {r['p_epsilon']:9.6f} {r['log_estimate']:9.6f} {r['log_rel_dev']:9.2e}")

# %%
table = asymptote_report([10, 100, 1000, 10000], [4, 8], epsilon=0.01)
for r in table.records():
    print(f"d={r['d']:6d} N={r['N']}  p_eps={r['p_epsilon']:.6f}  large-d limit={r['large_d_limit']:.6f}")
