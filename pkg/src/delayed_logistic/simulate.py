"""Continuous-time (Poissonized) simulation of the chain.

Holding times are i.i.d. Exp(1) in microscopic time and each jump is a birth
or a death with probability 1/2. Macroscopic time is microscopic time / N and
the recorded processes are

* ``Y(t) = x_0(Nt) / N`` for ``t >= 0``,
* ``Y(t) = x_{-w}(N(t + tau)) / N`` for ``t in [-tau, 0)``,
* ``Z(t) = x_{-w}(Nt) / N`` for ``t >= 0``.

Sampling is cadlag: the value at ``t`` is the one after the last jump at or
before ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .chain import SimParams
from .errors import PreconditionError, ResourceError
from .seeding import make_rng

__all__ = ["Trajectory", "simulate", "time_grid", "DEFAULT_MAX_JUMPS", "DEFAULT_MAX_WINDOW"]

DEFAULT_MAX_JUMPS = 10**9
DEFAULT_MAX_WINDOW = 10**8


@njit(cache=True, nogil=True)
def _run_chunk(buf, head, clock, t_end, N, exps, unifs, out_t, out_up, out_x0, out_old):
    """Advance the ring buffer through one chunk of pre-drawn randomness.

    Returns ``(n_jumps, head, clock, done)``; ``done`` is set when the next
    jump time would pass ``t_end`` (that jump is not applied).
    """
    W = buf.shape[0]
    inv_n = 1.0 / N
    inv_n2 = 1.0 / (N * N)
    for i in range(exps.shape[0]):
        clock += exps[i]
        if clock > t_end:
            return i, head, clock, True
        x0 = buf[(head + W - 1) % W]
        if unifs[i] < 0.5:
            new = x0 * (1.0 + inv_n)
            out_up[i] = True
        else:
            new = x0 * (1.0 - buf[head] * inv_n2)
            if new < 0.0:
                new = 0.0
            out_up[i] = False
        buf[head] = new
        head += 1
        if head == W:
            head = 0
        out_t[i] = clock
        out_x0[i] = new
        out_old[i] = buf[head]
    return exps.shape[0], head, clock, False


def time_grid(tau, T, dt):
    """Recording grid on ``[-tau, T]``: multiples of ``dt`` plus the endpoints.

    Multiples are computed as ``k*dt`` rounded to 12 decimals so that e.g.
    ``3*0.1`` is stored as ``0.3``.
    """
    k_lo = math.ceil(-tau / dt - 1e-9)
    k_hi = math.floor(T / dt + 1e-9)
    ks = np.arange(k_lo, k_hi + 1)
    pts = np.round(ks * dt, 12)
    tol = 1e-6 * dt
    pts = pts[(pts > -tau + tol) & (pts < T - tol)]
    return np.unique(np.concatenate(([-tau, 0.0, T], pts)))


@dataclass
class Trajectory:
    """Sampled path of ``Y`` (and ``Z`` for ``t >= 0``) on a time grid.

    The records run to time ``max(T, tau)`` since ``Y`` on ``[-tau, 0)`` is
    read from the oldest coordinate during ``[0, tau)``.

    When jump records are kept, ``x0_path[n]`` and ``oldest_path[n]`` are the
    present and oldest coordinates (microscopic units) after ``n`` jumps, with
    ``n = 0`` the initial state, ``jump_times[n-1]`` the macroscopic instant
    of jump ``n`` and ``jump_up[n-1]`` its direction.
    """

    params: SimParams
    times: np.ndarray
    y: np.ndarray
    z: np.ndarray
    jump_count: int  # jumps with time <= T
    jump_times: np.ndarray | None = None
    jump_up: np.ndarray | None = None
    x0_path: np.ndarray | None = None
    oldest_path: np.ndarray | None = None

    @classmethod
    def from_records(cls, params, jump_times, jump_up, x0_path, oldest_path,
                     keep_records=True):
        """Build a trajectory (grid included) from per-jump records."""
        jump_times = np.asarray(jump_times, dtype=np.float64)
        x0_path = np.asarray(x0_path, dtype=np.float64)
        oldest_path = np.asarray(oldest_path, dtype=np.float64)
        if jump_up is None:
            jump_up = np.diff(x0_path) > 0
        jump_up = np.asarray(jump_up, dtype=bool)
        n = len(jump_times)
        if len(x0_path) != n + 1 or len(oldest_path) != n + 1 or len(jump_up) != n:
            raise PreconditionError("records need n jump times and n+1 states")
        in_horizon = int(np.searchsorted(jump_times, params.T, side="right"))
        traj = cls(params, time_grid(params.tau, params.T, params.grid_dt),
                   np.empty(0), np.empty(0), in_horizon, jump_times, jump_up,
                   x0_path, oldest_path)
        t = traj.times
        traj.y = traj.y_at(t)
        traj.z = np.full(len(t), np.nan)
        pos = t >= 0
        traj.z[pos] = traj.z_at(t[pos])
        if not keep_records:
            traj.jump_times = traj.jump_up = traj.x0_path = traj.oldest_path = None
        return traj

    @property
    def has_records(self):
        return self.jump_times is not None

    def require_records(self):
        if not self.has_records:
            raise PreconditionError(
                "trajectory was simulated without jump records; "
                "pass record_jumps=True to simulate")

    def _count(self, t):
        return np.searchsorted(self.jump_times, t, side="right")

    def z_at(self, s):
        """``Z(s)`` for ``s >= 0`` from the jump records."""
        self.require_records()
        s = np.asarray(s, dtype=np.float64)
        return self.oldest_path[self._count(s)] / self.params.N

    def y_at(self, t):
        """``Y(t)`` for ``t`` in ``[-tau, T]`` from the jump records."""
        self.require_records()
        t = np.asarray(t, dtype=np.float64)
        N = self.params.N
        neg = t < 0
        shifted = np.where(neg, t + self.params.tau, t)
        idx = self._count(shifted)
        return np.where(neg, self.oldest_path[idx], self.x0_path[idx]) / N

    @property
    def positive(self):
        """Mask of grid times ``t >= 0``."""
        return self.times >= 0


def simulate(params: SimParams, rng=None, record_jumps=True,
             max_jumps=DEFAULT_MAX_JUMPS, max_window=DEFAULT_MAX_WINDOW) -> Trajectory:
    """Simulate the chain up to macroscopic time ``params.T``.

    ``rng`` defaults to a fresh generator seeded from ``params.seed``; the
    result is then a pure function of ``params``.
    """
    W = params.window
    N = params.N
    # Y on [-tau, 0) reads the oldest coordinate up to time N*tau
    t_end = N * max(params.T, params.tau)
    if W > max_window:
        raise ResourceError(f"window size {W} exceeds limit {max_window}")
    if t_end > max_jumps:
        raise ResourceError(
            f"expected jump count {t_end:.3g} exceeds limit {max_jumps}")
    if rng is None:
        rng = make_rng(params.seed)

    chunk = int(math.ceil(t_end + 6.0 * math.sqrt(t_end))) + 64
    buf = np.full(W, params.mu * N)
    head = 0
    clock = 0.0
    times, ups, x0s, olds = [], [], [], []
    done = False
    while not done:
        exps = rng.standard_exponential(chunk)
        unifs = rng.random(chunk)
        out_t = np.empty(chunk)
        out_up = np.empty(chunk, dtype=np.bool_)
        out_x0 = np.empty(chunk)
        out_old = np.empty(chunk)
        n, head, clock, done = _run_chunk(buf, head, clock, t_end, float(N), exps,
                                          unifs, out_t, out_up, out_x0, out_old)
        times.append(out_t[:n])
        ups.append(out_up[:n])
        x0s.append(out_x0[:n])
        olds.append(out_old[:n])

    start = np.array([params.mu * N])
    return Trajectory.from_records(
        params,
        np.concatenate(times) / N,
        np.concatenate(ups),
        np.concatenate([start] + x0s),
        np.concatenate([start] + olds),
        keep_records=record_jumps,
    )
