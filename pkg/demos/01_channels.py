# %% [markdown]
# # Local noise on one qudit
#
# Clock and shift operators, the two noise maps in closed form and as
# explicit conjugation sums, and a complete-positivity check through the
# Choi matrix.

# %%
import numpy as np

from ghzdecay import ChannelModel, apply_channel, apply_channel_twirl, choi_matrix, clock_matrix, shift_matrix

d = 3
X, Z = shift_matrix(d), clock_matrix(d)
w = np.exp(2j * np.pi / d)
print("ZX == w XZ:", np.allclose(Z @ X, w * X @ Z))
print("X^d == 1:", np.allclose(np.linalg.matrix_power(X, d), np.eye(d)))

# %%
rng = np.random.default_rng(0)
g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
rho = g @ g.conj().T
rho /= np.trace(rho)

for kind in ("depolarizing", "phase-damping"):
    ch = ChannelModel(kind, 0.4, d)
    out = apply_channel(ch, rho)
    gap = np.abs(out - apply_channel_twirl(ch, rho)).max()
    print(f"{kind:14s} closed form vs twirl sum: {gap:.1e}, trace {np.trace(out).real:.15f}")

# %%
# Choi spectra; a nonnegative spectrum means the map is completely positive.
for p in (0.0, 0.5, 1.0):
    ev = np.linalg.eigvalsh(choi_matrix(ChannelModel("depolarizing", p, d)))
    print(f"p={p}: Choi eigenvalues {np.round(ev, 4)}")
