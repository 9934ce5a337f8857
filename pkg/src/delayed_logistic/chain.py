"""Window state of the long-memory chain and its two transitions.

The chain lives on vectors ``x = (x_{-w}, ..., x_0)`` with ``w = floor(tau*N)``.
Each transition drops the oldest coordinate, shifts the window left and
writes a new present value:

* birth (``theta_plus``):  ``x_0 -> x_0 * (1 + 1/N)``
* death (``theta_minus``): ``x_0 -> max(0, x_0 * (1 - x_{-w} / N**2))``

Both happen with probability 1/2. The window is stored as a ring buffer, so a
transition costs one write and one head increment regardless of ``w``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import CapacityError, ParameterError

__all__ = [
    "OutsideTheoremWarning",
    "SimParams",
    "ChainState",
    "window_size",
    "init_state",
    "theta_plus",
    "theta_minus",
    "generator_drift",
    "enumerate_expectation",
    "sample_jump_chain",
    "MAX_ENUMERATION_JUMPS",
]

MAX_ENUMERATION_JUMPS = 24
_SEED_LIMIT = 1 << 64


class OutsideTheoremWarning(UserWarning):
    """Initial density outside (0, 1), where the limit theorem is stated."""


def window_size(tau, N):
    """Return ``floor(tau*N) + 1``.

    The product is taken on the decimal value of ``tau`` so that inputs such
    as ``tau=0.57, N=100`` give 58 rather than the 57 that binary rounding
    of ``0.57*100`` would produce.
    """
    return math.floor(Fraction(repr(float(tau))) * int(N)) + 1


@dataclass(frozen=True)
class SimParams:
    """Parameters of one simulation run.

    ``tau``, ``mu``, ``T`` and ``grid_dt`` are macroscopic (time and density
    units); the chain itself runs for microscopic time ``N*T``.
    """

    N: int
    tau: float
    mu: float
    T: float
    grid_dt: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ParameterError("N", f"must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        for name in ("tau", "T", "grid_dt"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0:
                raise ParameterError(name, f"must be a positive real, got {value!r}")
            object.__setattr__(self, name, value)
        mu = float(self.mu)
        if not math.isfinite(mu) or mu < 0:
            raise ParameterError("mu", f"must be a nonnegative real, got {mu!r}")
        object.__setattr__(self, "mu", mu)
        if self.grid_dt > self.T:
            raise ParameterError("grid_dt", f"must not exceed T={self.T!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < _SEED_LIMIT:
            raise ParameterError("seed", "must be an unsigned 64-bit integer")
        object.__setattr__(self, "seed", int(self.seed))
        if not 0 < mu < 1:
            warnings.warn(
                f"mu={mu!r} lies outside (0, 1); the scaling limit is only "
                "established there",
                OutsideTheoremWarning,
                stacklevel=3,
            )

    @property
    def window(self):
        return window_size(self.tau, self.N)

    def replace(self, **changes):
        fields = dict(N=self.N, tau=self.tau, mu=self.mu, T=self.T,
                      grid_dt=self.grid_dt, seed=self.seed)
        fields.update(changes)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OutsideTheoremWarning)
            return SimParams(**fields)


class ChainState:
    """Ring buffer holding the window ``(x_{-w}, ..., x_0)``.

    ``entries[head]`` is the oldest coordinate ``x_{-w}`` and the present
    value ``x_0`` sits just before it (cyclically).
    """

    __slots__ = ("entries", "head", "N")

    def __init__(self, entries, head, N):
        self.entries = np.asarray(entries, dtype=np.float64)
        self.head = int(head) % len(self.entries)
        self.N = int(N)

    @classmethod
    def from_coords(cls, coords, N):
        """Build a state from logically ordered ``(x_{-w}, ..., x_0)``."""
        return cls(np.array(coords, dtype=np.float64), 0, N)

    @property
    def window(self):
        return len(self.entries)

    @property
    def x0(self):
        return float(self.entries[self.head - 1])

    @property
    def oldest(self):
        return float(self.entries[self.head])

    def coord(self, j):
        """Value of ``x_j`` for ``j`` in ``{-w, ..., 0}``."""
        w = self.window
        if not -(w - 1) <= j <= 0:
            raise IndexError(f"coordinate {j} outside window of size {w}")
        return float(self.entries[(self.head + w - 1 + j) % w])

    def coords(self):
        """Logically ordered copy ``(x_{-w}, ..., x_0)``."""
        return np.concatenate((self.entries[self.head:], self.entries[:self.head]))

    def copy(self):
        return ChainState(self.entries.copy(), self.head, self.N)

    def step(self, up, naive=False):
        """Apply one transition in place (birth if ``up`` else death).

        ``naive=True`` performs the O(W) physical shift instead of advancing
        the head. It exists only as a differential check on the ring buffer.
        """
        x0 = self.x0
        if up:
            new = x0 * (1.0 + 1.0 / self.N)
        else:
            new = max(0.0, x0 * (1.0 - self.oldest / (self.N * self.N)))
        if naive:
            ordered = self.coords()
            ordered[:-1] = ordered[1:]
            ordered[-1] = new
            self.entries = ordered
            self.head = 0
        else:
            self.entries[self.head] = new
            self.head = (self.head + 1) % self.window
        return self

    def __eq__(self, other):
        if not isinstance(other, ChainState):
            return NotImplemented
        return self.N == other.N and np.array_equal(self.coords(), other.coords())

    def __repr__(self):
        return f"ChainState(N={self.N}, coords={self.coords().tolist()!r})"


def init_state(params: SimParams) -> ChainState:
    """All ``W`` coordinates equal to ``mu*N``."""
    return ChainState(np.full(params.window, params.mu * params.N), 0, params.N)


def theta_plus(state: ChainState) -> ChainState:
    return state.copy().step(True)


def theta_minus(state: ChainState) -> ChainState:
    return state.copy().step(False)


def generator_drift(state: ChainState) -> float:
    """Generator applied to ``f(x) = x_0 / N``, death branch clamped at 0."""
    N = state.N
    x0 = state.x0
    up = x0 * (1.0 + 1.0 / N)
    down = max(0.0, x0 * (1.0 - state.oldest / (N * N)))
    return 0.5 * (up - x0) / N + 0.5 * (down - x0) / N


def enumerate_expectation(params: SimParams, n: int,
                          observable: Callable[[ChainState], float]) -> float:
    """Exact mean of ``observable`` after ``n`` steps of the discrete chain.

    Walks all ``2**n`` birth/death words depth first.
    """
    if n < 0:
        raise ParameterError("n", "must be nonnegative")
    if n > MAX_ENUMERATION_JUMPS:
        raise CapacityError(
            f"n={n} exceeds the enumeration limit of {MAX_ENUMERATION_JUMPS} jumps")
    values = []

    def walk(state, depth):
        if depth == n:
            values.append(float(observable(state)))
            return
        walk(theta_plus(state), depth + 1)
        walk(theta_minus(state), depth + 1)

    walk(init_state(params), 0)
    return math.fsum(values) / 2.0 ** n


def sample_jump_chain(params: SimParams, n: int, replicas: int,
                      rng: np.random.Generator) -> np.ndarray:
    """Run ``replicas`` independent copies of the discrete chain for ``n`` steps.

    All copies share the ring head (it advances once per step whatever the
    direction), so the update is vectorised across replicas. Returns the
    logically ordered windows, shape ``(replicas, W)``.
    """
    W = params.window
    N = params.N
    buf = np.full((replicas, W), params.mu * N)
    head = 0
    for _ in range(n):
        up = rng.random(replicas) < 0.5
        x0 = buf[:, head - 1]
        born = x0 * (1.0 + 1.0 / N)
        died = np.maximum(0.0, x0 * (1.0 - buf[:, head] / (N * N)))
        buf[:, head] = np.where(up, born, died)
        head = (head + 1) % W
    return np.concatenate((buf[:, head:], buf[:, :head]), axis=1)
