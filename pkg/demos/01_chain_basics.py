# %% [markdown]
# The long-memory chain
#
# A state is a window of W = floor(tau*N) + 1 nonnegative numbers. A birth
# multiplies the newest entry by (1 + 1/N); a death multiplies it by
# (1 - oldest/N^2), clamped at zero. Either way the window slides by one.

# %%
import numpy as np

from delayed_logistic import (ChainState, SimParams, enumerate_expectation, init_state,
                              make_rng, sample_jump_chain, theta_minus, theta_plus)

p = SimParams(N=10, tau=0.55, mu=0.3, T=1.0)
s = init_state(p)
print("window", s.window, "coords", s.coords())

# %% one birth then one death, and the clamp in action
s = theta_plus(s)
print("after birth", s.coords())
print("after death", theta_minus(s).coords())
print("clamped   ", theta_minus(ChainState.from_coords([8, 1, 4], N=2)).coords())

# %% [markdown]
# For tiny N the jump chain can be enumerated exactly; the Monte Carlo
# sampler should agree within a few standard errors.

# %%
p = SimParams(N=5, tau=1.0, mu=0.5, T=1.0)
exact = enumerate_expectation(p, 10, lambda st: st.x0)
final = sample_jump_chain(p, 10, 100_000, make_rng(1))[:, -1]
se = final.std(ddof=1) / np.sqrt(len(final))
print(f"E[x0 after 10 jumps] exact {exact:.5f}  MC {final.mean():.5f} +- {se:.5f}")
