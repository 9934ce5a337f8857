"""Fixed-step solver for the delayed logistic (Hutchinson) equation

    u'(t) = u(t) (1 - u(t - tau)) / 2,   u = mu on [-tau, 0].

Classic RK4 on a uniform grid with step ``h = tau/m``. Because ``tau`` is a
whole number of steps, the break points ``k*tau`` where the solution loses
smoothness are grid nodes, and every delayed stage value lands inside one
already computed cell, where it is read from the cubic Hermite interpolant
built on ``(u, u')`` at the nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, DomainError, ParameterError

__all__ = ["DdeParams", "DdeSolution", "solve_dde", "evaluate", "logistic_exact"]


@dataclass(frozen=True)
class DdeParams:
    """Solver configuration.

    For ``tau > 0`` the step is ``tau / steps_per_delay``; if that exceeds
    ``max_step`` the number of steps per delay is raised until it does not.
    For ``tau == 0`` the problem is a plain ODE and ``step`` sets ``h``.
    """

    tau: float
    mu: float
    T: float
    steps_per_delay: int = 64
    step: float = 0.01
    max_step: float = 0.1

    def __post_init__(self):
        if not math.isfinite(self.tau) or self.tau < 0:
            raise ParameterError("tau", "must be a nonnegative real")
        if not math.isfinite(self.mu) or self.mu < 0:
            raise ParameterError("mu", "must be a nonnegative real")
        if not math.isfinite(self.T) or self.T <= 0:
            raise ParameterError("T", "must be a positive real")
        if int(self.steps_per_delay) != self.steps_per_delay or self.steps_per_delay < 4:
            raise ParameterError("steps_per_delay", "must be an integer >= 4")
        if not self.step > 0:
            raise ParameterError("step", "must be positive")

    @property
    def m(self):
        """Steps per delay actually used."""
        return max(int(self.steps_per_delay), math.ceil(self.tau / self.max_step - 1e-12))

    @property
    def h(self):
        return self.tau / self.m if self.tau > 0 else float(self.step)


@dataclass(frozen=True)
class DdeSolution:
    tau: float
    mu: float
    T: float
    grid: np.ndarray
    u: np.ndarray
    du: np.ndarray
    params: DdeParams | None = field(default=None, compare=False)

    def eval(self, t):
        return evaluate(self, t)

    __call__ = eval


def _hermite(s0, s1, u0, u1, d0, d1, t):
    w = s1 - s0
    th = (t - s0) / w
    th2 = th * th
    th3 = th2 * th
    return ((2 * th3 - 3 * th2 + 1) * u0 + (th3 - 2 * th2 + th) * w * d0
            + (-2 * th3 + 3 * th2) * u1 + (th3 - th2) * w * d1)


def evaluate(solution: DdeSolution, t):
    """Dense output: ``mu`` on ``[-tau, 0]``, cubic Hermite on ``(0, T]``."""
    t_arr = np.asarray(t, dtype=np.float64)
    if t_arr.size and (np.any(~np.isfinite(t_arr)) or t_arr.min() < -solution.tau
                       or t_arr.max() > solution.T):
        raise DomainError(
            f"evaluation time outside [{-solution.tau!r}, {solution.T!r}]")
    g, u, du = solution.grid, solution.u, solution.du
    j = np.clip(np.searchsorted(g, t_arr, side="right") - 1, 0, len(g) - 2)
    out = _hermite(g[j], g[j + 1], u[j], u[j + 1], du[j], du[j + 1], t_arr)
    out = np.where(t_arr <= 0, solution.mu, out)
    return out if out.ndim else float(out)


def solve_dde(params: DdeParams) -> DdeSolution:
    tau, mu, T = float(params.tau), float(params.mu), float(params.T)
    h = params.h
    n_steps = max(1, math.ceil(T / h - 1e-9))
    grid = np.arange(n_steps + 1) * h
    grid[-1] = T
    u = np.empty(n_steps + 1)
    du = np.empty(n_steps + 1)
    u[0] = mu
    no_delay = tau == 0
    m = params.m if not no_delay else 0

    def rhs(x, lag):
        return 0.5 * x * (1.0 - lag)

    def lagged(k, theta):
        # value of u at s_k + theta*(s_{k+1}-s_k) - tau, read from node k - m
        j = k - m
        if j + theta <= 0:
            return mu
        if theta == 0.0:
            return u[j]
        if theta == 1.0:
            return u[j + 1]
        s0, s1 = grid[j], grid[j + 1]
        return _hermite(s0, s1, u[j], u[j + 1], du[j], du[j + 1],
                        s0 + theta * (s1 - s0))

    du[0] = rhs(mu, mu)
    for k in range(n_steps):
        hk = grid[k + 1] - grid[k]
        x = u[k]
        if no_delay:
            k1 = rhs(x, x)
            y2 = x + 0.5 * hk * k1
            k2 = rhs(y2, y2)
            y3 = x + 0.5 * hk * k2
            k3 = rhs(y3, y3)
            y4 = x + hk * k3
            k4 = rhs(y4, y4)
        else:
            # the last step may be short; its lag cell is then only partly used
            frac = hk / h
            d_mid = lagged(k, 0.5 * frac)
            d_end = lagged(k, frac)
            k1 = rhs(x, lagged(k, 0.0))
            k2 = rhs(x + 0.5 * hk * k1, d_mid)
            k3 = rhs(x + 0.5 * hk * k2, d_mid)
            k4 = rhs(x + hk * k3, d_end)
        nxt = x + hk * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not math.isfinite(nxt):
            raise DivergenceError(float(grid[k + 1]), "non-finite solution value")
        if mu > 0 and nxt <= 0:
            raise DivergenceError(float(grid[k + 1]),
                                  "solution lost positivity; reduce the step")
        u[k + 1] = nxt
        du[k + 1] = rhs(nxt, nxt if no_delay else d_end)
    return DdeSolution(tau, mu, T, grid, u, du, params)


def logistic_exact(mu, t):
    """Closed-form solution of ``u' = u(1-u)/2`` with ``u(0) = mu``."""
    g = np.exp(np.asarray(t, dtype=np.float64) / 2.0)
    out = mu * g / (1.0 + mu * (g - 1.0))
    return out if out.ndim else float(out)
