# %% [markdown]
# The delayed logistic equation u' = u (1 - u(t - tau)) / 2
#
# Below the critical delay the equilibrium u = 1 is stable and perturbations
# die out in damped oscillations; above it a periodic orbit takes over.

# %%
from pathlib import Path

from delayed_logistic import DdeParams, oscillation_metrics, solve_dde
from delayed_logistic.svg import Series, line_chart

out = Path("demo_output")
out.mkdir(exist_ok=True)

series = []
for tau, colour in ((1.0, "#2ca02c"), (2.5, "#1f77b4"), (3.2, "#d62728")):
    sol = solve_dde(DdeParams(tau, 2.0, 200.0))
    m = oscillation_metrics(sol.grid, sol.u, (150.0, 200.0))
    print(f"tau={tau}: amplitude {m.amplitude:.3g}, period {m.period}")
    keep = sol.grid <= 80
    series.append(Series(sol.grid[keep], sol.u[keep], f"tau={tau}", color=colour))

(out / "dde_regimes.svg").write_text(
    line_chart(series, title="delayed logistic, mu=2", ylabel="u(t)"), encoding="utf-8")
print("wrote", out / "dde_regimes.svg")
