"""Seeded replica ensembles and power-law fits in N.

Replica ``i`` at scaling parameter ``N`` is simulated with seed
``replica_seed(master, N, i)``. Results are written into a slot per replica
and reduced in index order, so the statistics do not depend on how many
worker threads ran the replicas.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .chain import SimParams
from .dde import DdeParams, solve_dde
from .diagnostics import (compute_H, decompose, max_jump, path_suprema,
                          replacement_error, sup_error, sup_initial_deviation,
                          clamp_term)
from .errors import ParameterError, ReplicaError
from .seeding import RNG_ALGORITHM, replica_seed
from .simulate import simulate

__all__ = [
    "METRICS",
    "EnsembleSpec",
    "MetricSummary",
    "EnsembleStats",
    "PowerFit",
    "SweepResult",
    "default_workers",
    "replica_metrics",
    "run_ensemble",
    "fit_power_law",
    "scaling_study",
]

METRICS = ("sup_error", "sup_I_N", "martingale_T", "sup_martingale", "qv_T",
           "sup_initial_dev", "max_jump", "H_T", "sup_clamp", "moments")

_NEEDS_DECOMPOSITION = {"sup_I_N", "martingale_T", "sup_martingale", "qv_T"}


def default_workers():
    """Worker count: ``DLL_WORKERS`` if set, else the number of logical CPUs."""
    env = os.environ.get("DLL_WORKERS")
    if env:
        n = int(env)
        if n < 1:
            raise ParameterError("DLL_WORKERS", "must be a positive integer")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class EnsembleSpec:
    """What to run and which per-replica metrics to collect.

    ``moments`` lists the powers ``p`` for the ``sup_y^p`` / ``sup_z^p``
    metrics (collected when ``"moments"`` is in ``collect``). The DDE
    reference is built from ``base`` when not supplied.
    """

    base: SimParams
    replicas: int
    collect: tuple = ("sup_error",)
    dde_ref: DdeParams | None = None
    moments: tuple = (1, 2, 4)
    keep_paths: bool = False

    def __post_init__(self):
        if int(self.replicas) != self.replicas or self.replicas < 1:
            raise ParameterError("replicas", "must be a positive integer")
        unknown = set(self.collect) - set(METRICS)
        if unknown:
            raise ParameterError("collect", f"unknown metrics {sorted(unknown)}")
        if self.dde_ref is not None:
            ref, b = self.dde_ref, self.base
            if ref.tau != b.tau or ref.mu != b.mu or ref.T < b.T:
                raise ParameterError("dde_ref", "must match base tau, mu and cover T")

    def reference(self):
        ref = self.dde_ref or DdeParams(self.base.tau, self.base.mu, self.base.T)
        return solve_dde(ref)

    def metric_names(self):
        names = []
        for m in self.collect:
            if m == "moments":
                names += [f"sup_y^{p}" for p in self.moments]
                names += [f"sup_z^{p}" for p in self.moments]
            else:
                names.append(m)
        return names

    def with_N(self, N):
        return replace(self, base=self.base.replace(N=N), dde_ref=self.dde_ref)


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    variance: float
    stderr: float
    min: float
    max: float
    values: np.ndarray | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_values(cls, values, keep=True):
        v = np.asarray(values, dtype=np.float64)
        var = float(np.var(v, ddof=1)) if len(v) > 1 else 0.0
        return cls(float(np.mean(v)), var, float(np.sqrt(var / len(v))),
                   float(v.min()), float(v.max()), v if keep else None)


@dataclass
class EnsembleStats:
    metrics: dict
    provenance: dict
    seeds: list
    times: np.ndarray | None = None
    paths: np.ndarray | None = None

    def __getitem__(self, name):
        return self.metrics[name]

    def mean_path(self):
        return None if self.paths is None else self.paths.mean(axis=0)


def replica_metrics(spec: EnsembleSpec, seed: int, reference=None):
    """Simulate one replica and return ``(metrics, trajectory)``."""
    params = spec.base.replace(seed=seed)
    traj = simulate(params)
    out = {}
    collect = set(spec.collect)
    if collect & _NEEDS_DECOMPOSITION:
        rep = decompose(traj)
        if "sup_I_N" in collect:
            out["sup_I_N"] = replacement_error(rep).sup
        if "martingale_T" in collect:
            out["martingale_T"] = float(rep.martingale[-1])
        if "sup_martingale" in collect:
            out["sup_martingale"] = float(np.max(np.abs(rep.martingale)))
        if "qv_T" in collect:
            out["qv_T"] = float(rep.qv[-1])
    if "sup_error" in collect:
        out["sup_error"] = sup_error(traj, reference if reference is not None
                                     else spec.reference())
    if "sup_initial_dev" in collect:
        out["sup_initial_dev"] = sup_initial_deviation(traj)
    if "max_jump" in collect:
        out["max_jump"] = max_jump(traj)
    if "H_T" in collect:
        out["H_T"] = compute_H(traj)
    if "sup_clamp" in collect:
        out["sup_clamp"] = clamp_term(traj)[0]
    if "moments" in collect:
        sy, sz = path_suprema(traj)
        for p in spec.moments:
            out[f"sup_y^{p}"] = sy ** p
            out[f"sup_z^{p}"] = sz ** p
    return out, traj


def run_ensemble(spec: EnsembleSpec, workers=None, keep_values=True) -> EnsembleStats:
    workers = workers or default_workers()
    master = spec.base.seed
    N = spec.base.N
    seeds = [replica_seed(master, N, i) for i in range(spec.replicas)]
    reference = spec.reference() if "sup_error" in spec.collect else None
    slots = [None] * spec.replicas

    def job(i):
        try:
            metrics, traj = replica_metrics(spec, seeds[i], reference)
        except Exception as exc:
            raise ReplicaError(i, seeds[i], exc) from exc
        slots[i] = (metrics, traj.y.copy() if spec.keep_paths else None,
                    traj.times if spec.keep_paths else None)

    if workers == 1:
        for i in range(spec.replicas):
            job(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for fut in [pool.submit(job, i) for i in range(spec.replicas)]:
                fut.result()

    names = spec.metric_names()
    metrics = {name: MetricSummary.from_values([s[0][name] for s in slots], keep_values)
               for name in names}
    b = spec.base
    provenance = dict(master_seed=master, replicas=spec.replicas, N=b.N, tau=b.tau,
                      mu=b.mu, T=b.T, grid_dt=b.grid_dt, rng=RNG_ALGORITHM)
    stats = EnsembleStats(metrics, provenance, seeds)
    if spec.keep_paths:
        stats.times = slots[0][2]
        stats.paths = np.vstack([s[1] for s in slots])
    return stats


@dataclass(frozen=True)
class PowerFit:
    """Least-squares line ``log(value) = alpha * log(N) + intercept``.

    ``alpha`` is ``None`` when some value is not positive (no log).
    ``residual`` is the root-mean-square of the fit residuals in log space.
    """

    alpha: float | None
    intercept: float | None
    residual: float | None


def fit_power_law(N_values, values) -> PowerFit:
    x = np.log(np.asarray(N_values, dtype=np.float64))
    v = np.asarray(values, dtype=np.float64)
    if len(x) < 3:
        raise ParameterError("N_list", "need at least 3 values of N")
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        return PowerFit(None, None, None)
    y = np.log(v)
    A = np.vstack([x, np.ones_like(x)]).T
    (alpha, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (alpha * x + intercept)
    return PowerFit(float(alpha), float(intercept), float(np.sqrt(np.mean(resid ** 2))))


@dataclass
class SweepResult:
    N_values: list
    stats: list
    fits: dict

    def means(self, metric):
        return [s[metric].mean for s in self.stats]


def scaling_study(spec: EnsembleSpec, N_list, workers=None) -> SweepResult:
    N_list = [int(n) for n in N_list]
    if len(N_list) < 3:
        raise ParameterError("N_list", "need at least 3 values of N")
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ParameterError("N_list", "must be strictly increasing")
    stats = [run_ensemble(spec.with_N(N), workers=workers) for N in N_list]
    fits = {name: fit_power_law(N_list, [s[name].mean for s in stats])
            for name in spec.metric_names()}
    return SweepResult(N_list, stats, fits)
