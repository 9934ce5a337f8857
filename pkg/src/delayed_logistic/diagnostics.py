"""Pathwise diagnostics of a simulated trajectory.

``Y`` and ``Z`` are piecewise constant between jumps and the lagged process
``Y(s - tau)`` is piecewise constant between the shifted jump instants, so
every time integral below is a finite sum over the merged break points. No
quadrature error enters; the decomposition identity holds to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dde import DdeSolution
from .errors import DomainError, ParameterError, PreconditionError
from .simulate import Trajectory

__all__ = [
    "DecompositionReport",
    "OscillationMetrics",
    "ReplacementError",
    "decompose",
    "replacement_error",
    "poisson_undershoot_exponent",
    "poisson_undershoot_bound",
    "clamp_term",
    "compute_H",
    "max_jump",
    "sup_initial_deviation",
    "path_suprema",
    "sup_error",
    "oscillation_metrics",
]


@dataclass(frozen=True)
class DecompositionReport:
    """Terms of the semimartingale decomposition of ``Y`` on the grid ``t >= 0``.

    ``y(t) - y(0) = drift_main + drift_replacement + drift_clamp + martingale``
    up to ``residual_check``. ``D`` is ``Y(t - tau) - Z(t)`` at the grid times.
    """

    times: np.ndarray
    y: np.ndarray
    D: np.ndarray
    drift_main: np.ndarray
    drift_replacement: np.ndarray
    drift_clamp: np.ndarray
    martingale: np.ndarray
    qv: np.ndarray
    residual_check: np.ndarray
    clamp_fired: bool
    tau: float
    T: float

    def columns(self):
        return {
            "t": self.times,
            "drift_main": self.drift_main,
            "drift_replacement": self.drift_replacement,
            "drift_clamp": self.drift_clamp,
            "martingale": self.martingale,
            "qv": self.qv,
            "residual_check": self.residual_check,
        }


class ReplacementError(NamedTuple):
    sup: float
    times: np.ndarray
    curve: np.ndarray


@dataclass(frozen=True)
class OscillationMetrics:
    amplitude: float
    period: float | None
    mean_level: float
    crossings: int


def _horizon_count(traj):
    return int(np.searchsorted(traj.jump_times, traj.params.T, side="right"))


def decompose(traj: Trajectory) -> DecompositionReport:
    if not traj.has_records:
        raise PreconditionError("decompose needs a trajectory with jump records")
    p = traj.params
    N, tau, T = p.N, p.tau, p.T
    jt = traj.jump_times
    jt_lag = jt + tau
    x0p, oldp = traj.x0_path, traj.oldest_path
    grid = traj.times[traj.positive]

    extra = [np.array([0.0, T]), jt[jt < T], jt_lag[jt_lag < T], grid]
    if tau < T:
        extra.append(np.array([tau]))
    bp = np.unique(np.concatenate(extra))
    left = bp[:-1]
    width = np.diff(bp)

    n_now = np.searchsorted(jt, left, side="right")
    x0 = x0p[n_now]
    old = oldp[n_now]
    Y = x0 / N
    Z = old / N
    # Y(s - tau): oldest coordinate before tau, lagged present afterwards
    late = left >= tau
    lag = np.where(late, x0p[np.searchsorted(jt_lag, left, side="right")] / N, Z)
    D = np.where(late, lag - Z, 0.0)
    Zt = np.maximum(0.0, Z - N)

    born = x0 * (1.0 + 1.0 / N)
    died = np.maximum(0.0, x0 * (1.0 - old / (N * N)))
    # generator on f = x_0/N, times N for the macroscopic clock
    gen = N * (0.5 * (born - x0) / N + 0.5 * (died - x0) / N)
    qv_rate = N * 0.5 * (((born - x0) / N) ** 2 + ((died - x0) / N) ** 2)

    def integral(values):
        return np.concatenate(([0.0], np.cumsum(values * width)))

    at = np.searchsorted(bp, grid)
    drift_main = 0.5 * integral(Y * (1.0 - lag))[at]
    drift_repl = 0.5 * integral(Y * D)[at]
    drift_clamp = 0.5 * integral(Y * Zt)[at]
    compensator = integral(gen)[at]
    qv = integral(qv_rate)[at]

    y_grid = x0p[np.searchsorted(jt, grid, side="right")] / N
    y_start = x0p[0] / N
    martingale = y_grid - y_start - compensator
    residual = y_grid - y_start - drift_main - drift_repl - drift_clamp - martingale

    g_now = np.searchsorted(jt, grid, side="right")
    g_late = grid >= tau
    g_lag = np.where(g_late, x0p[np.searchsorted(jt_lag, grid, side="right")],
                     oldp[g_now]) / N
    D_grid = np.where(g_late, g_lag - oldp[g_now] / N, 0.0)

    horizon = _horizon_count(traj)
    fired = bool(np.any(oldp[:horizon + 1] > float(N) * N))
    return DecompositionReport(grid, y_grid, D_grid, drift_main, drift_repl,
                               drift_clamp, martingale, qv, residual, fired, tau, T)


def replacement_error(report: DecompositionReport) -> ReplacementError:
    """Sup over grid times in ``[tau, T]`` of the integrated replacement error."""
    if report.T <= report.tau:
        raise DomainError(f"need T > tau, got T={report.T!r}, tau={report.tau!r}")
    mask = report.times >= report.tau
    curve = report.drift_replacement
    return ReplacementError(float(np.max(np.abs(curve[mask]))), report.times, curve)


def poisson_undershoot_exponent(s, tau):
    """``tau * (x - 1 - log x)`` with ``x = s/tau``."""
    if not tau > 0:
        raise DomainError("tau must be positive")
    if not s > tau:
        raise DomainError(f"bound is vacuous unless s > tau (s={s!r}, tau={tau!r})")
    x = s / tau
    return tau * (x - 1.0 - math.log(x))


def poisson_undershoot_bound(s, tau, N):
    """Chernoff bound ``exp(-N c(s, tau))`` on ``P(F(Ns) <= tau N)``."""
    if N < 1:
        raise ParameterError("N", "must be a positive integer")
    return math.exp(-N * poisson_undershoot_exponent(s, tau))


def clamp_term(traj: Trajectory):
    """``(sup over grid of Z~, integral over [0, T] of Y * Z~)`` with ``Z~ = (Z - N)+``."""
    N, T = traj.params.N, traj.params.T
    z = traj.z[traj.positive]
    sup = float(np.max(np.maximum(0.0, z - N)))
    traj.require_records()
    jt = traj.jump_times
    bp = np.unique(np.concatenate(([0.0, T], jt[jt < T])))
    idx = np.searchsorted(jt, bp[:-1], side="right")
    y = traj.x0_path[idx] / N
    zt = np.maximum(0.0, traj.oldest_path[idx] / N - N)
    return sup, float(np.sum(y * zt * np.diff(bp)))


def compute_H(traj: Trajectory) -> float:
    """``sup over [0, T] of Y + Y Z`` at jump resolution."""
    traj.require_records()
    n = _horizon_count(traj) + 1
    N = traj.params.N
    y = traj.x0_path[:n] / N
    z = traj.oldest_path[:n] / N
    return float(np.max(y + y * z))


def max_jump(traj: Trajectory) -> float:
    """Largest ``|Y(t) - Y(t-)|`` produced by a chain transition on ``[-tau, T]``.

    On ``[-tau, 0)`` the jumps of ``Y`` are those of the oldest coordinate
    during ``[0, tau)``. The seam at ``t = 0`` (where ``Y`` switches from the
    oldest coordinate to the present one) is not a transition and is excluded.
    """
    traj.require_records()
    N = traj.params.N
    n_pos = _horizon_count(traj)
    n_neg = int(np.searchsorted(traj.jump_times, traj.params.tau, side="left"))
    pos = np.abs(np.diff(traj.x0_path[:n_pos + 1]))
    neg = np.abs(np.diff(traj.oldest_path[:n_neg + 1]))
    biggest = max(pos.max(initial=0.0), neg.max(initial=0.0))
    return float(biggest) / N


def sup_initial_deviation(traj: Trajectory) -> float:
    """``sup over [-tau, 0] of |Y - mu|`` at jump resolution."""
    traj.require_records()
    n = int(np.searchsorted(traj.jump_times, traj.params.tau, side="left"))
    dev = np.abs(traj.oldest_path[:n + 1] / traj.params.N - traj.params.mu)
    return float(dev.max())


def path_suprema(traj: Trajectory):
    """``(sup Y, sup Z)`` over ``[0, T]`` at jump resolution."""
    traj.require_records()
    n = _horizon_count(traj) + 1
    N = traj.params.N
    return float(traj.x0_path[:n].max()) / N, float(traj.oldest_path[:n].max()) / N


def sup_error(traj: Trajectory, solution: DdeSolution, window=None) -> float:
    """Max over grid times of ``|Y(t_k) - u(t_k)|``.

    ``window=(a, b)`` restricts the maximum to grid times in ``[a, b]``.
    """
    p = traj.params
    if not math.isclose(p.tau, solution.tau, rel_tol=1e-12, abs_tol=0.0):
        raise DomainError(f"delay mismatch: {p.tau!r} vs {solution.tau!r}")
    if not math.isclose(p.mu, solution.mu, rel_tol=1e-12, abs_tol=1e-300):
        raise DomainError(f"initial density mismatch: {p.mu!r} vs {solution.mu!r}")
    if solution.T < p.T:
        raise DomainError(f"solution ends at {solution.T!r} before T={p.T!r}")
    t = traj.times
    mask = np.ones(len(t), dtype=bool)
    if window is not None:
        mask = (t >= window[0]) & (t <= window[1])
    return float(np.max(np.abs(traj.y[mask] - solution.eval(t[mask]))))


def oscillation_metrics(times, values, window) -> OscillationMetrics:
    """Amplitude, period and mean level of a sampled series over ``window``.

    The period is the mean spacing of upward crossings of the window mean
    (crossing instants linearly interpolated); it is ``None`` when fewer than
    three crossings occur.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    a, b = window
    if a < times[0] or b > times[-1] or a >= b:
        raise DomainError(f"window {window!r} not inside [{times[0]!r}, {times[-1]!r}]")
    mask = (times >= a) & (times <= b)
    t, v = times[mask], values[mask]
    if len(t) < 10:
        raise ParameterError("window", f"needs at least 10 samples, got {len(t)}")
    amplitude = 0.5 * float(v.max() - v.min())
    mean_level = float(np.trapezoid(v, t) / (t[-1] - t[0]))
    below = v[:-1] < mean_level
    up = np.nonzero(below & (v[1:] >= mean_level))[0]
    cross = t[up] + (mean_level - v[up]) / (v[up + 1] - v[up]) * (t[up + 1] - t[up])
    period = float(np.mean(np.diff(cross))) if len(cross) >= 3 else None
    return OscillationMetrics(amplitude, period, mean_level, len(cross))
