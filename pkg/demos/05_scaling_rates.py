# %% [markdown]
# Convergence rates in N
#
# Log-log least squares of ensemble means against N. Jumps are of size
# order 1/N, the initial segment settles like N^(-1/2), and the martingale's
# quadratic variation carries a 1/(2N) prefactor.

# %%
from delayed_logistic import EnsembleSpec, SimParams, scaling_study

spec = EnsembleSpec(SimParams(N=500, tau=1.0, mu=0.5, T=1.0, grid_dt=0.05, seed=9), 50,
                    collect=("max_jump", "sup_initial_dev", "qv_T"))
res = scaling_study(spec, [500, 1000, 2000, 4000])
for name, fit in res.fits.items():
    print(f"{name:>16}: alpha {fit.alpha:+.3f}  (rms residual {fit.residual:.3f})")
