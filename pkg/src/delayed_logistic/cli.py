"""Command-line front end (``dll``).

Every command writes its data files plus a ``key=value`` manifest that
``dll --manifest FILE`` replays.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .chain import SimParams
from .dde import DdeParams, solve_dde
from .diagnostics import decompose
from .errors import ParameterError
from .montecarlo import METRICS, EnsembleSpec, run_ensemble, scaling_study
from .output import columns_to_rows, read_manifest, write_csv, write_manifest
from .seeding import RNG_ALGORITHM
from .simulate import simulate, time_grid
from .svg import Band, Series, line_chart

SWEEP_METRICS = tuple(m for m in METRICS if m != "moments")


class UsageError(Exception):
    pass


def _add_sim_flags(p, with_N=True):
    if with_N:
        p.add_argument("--N", type=int, default=1000, help="scaling parameter")
    p.add_argument("--tau", type=float, default=1.0, help="delay")
    p.add_argument("--mu", type=float, default=0.5, help="initial density")
    p.add_argument("--T", type=float, default=5.0, help="time horizon")
    p.add_argument("--dt", type=float, default=0.01, help="recording step")
    p.add_argument("--seed", type=int, default=0, help="master seed")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dll", description="Long-memory chain and delayed logistic equation toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--manifest", metavar="FILE", help="replay a run manifest")
    parser.add_argument("--out", help="output override when replaying a manifest")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("simulate", help="simulate one trajectory")
    _add_sim_flags(p)
    p.add_argument("--out", required=True, help="trajectory CSV path")

    p = sub.add_parser("solve", help="solve the delayed logistic equation")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--T", type=float, default=5.0)
    p.add_argument("--dt", type=float, default=0.01, help="output sampling step")
    p.add_argument("--steps-per-delay", type=int, default=64)
    p.add_argument("--step", type=float, default=0.01, help="step when tau = 0")
    p.add_argument("--svg", help="optional chart path")
    p.add_argument("--out", required=True, help="solution CSV path")

    p = sub.add_parser("compare", help="ensemble versus DDE reference")
    _add_sim_flags(p)
    p.add_argument("--replicas", type=int, default=20)
    p.add_argument("--steps-per-delay", type=int, default=64)
    p.add_argument("--svg", help="optional chart path")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("decompose", help="semimartingale decomposition of one path")
    _add_sim_flags(p)
    p.add_argument("--out", required=True, help="decomposition CSV path")

    p = sub.add_parser("sweep", help="scaling study over N")
    _add_sim_flags(p, with_N=False)
    p.add_argument("--N-list", required=True, help="comma-separated N values")
    p.add_argument("--metric", required=True, choices=SWEEP_METRICS)
    p.add_argument("--replicas", type=int, default=20)
    p.add_argument("--steps-per-delay", type=int, default=64)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _sim_params(a, N=None):
    return SimParams(N=a.N if N is None else N, tau=a.tau, mu=a.mu, T=a.T,
                     grid_dt=a.dt, seed=a.seed)


def cmd_simulate(a):
    traj = simulate(_sim_params(a))
    rows = [(t, y, z if t >= 0 else None) for t, y, z in
            zip(traj.times.tolist(), traj.y.tolist(), traj.z.tolist())]
    write_csv(a.out, ["t", "y", "z"], rows)
    return [a.out], a.out + ".manifest"


def cmd_solve(a):
    sol = solve_dde(DdeParams(a.tau, a.mu, a.T, steps_per_delay=a.steps_per_delay,
                              step=a.step))
    t = time_grid(a.tau, a.T, a.dt)
    u = sol.eval(t)
    write_csv(a.out, ["t", "u"], zip(t.tolist(), np.asarray(u).tolist()))
    outputs = [a.out]
    if a.svg:
        Path(a.svg).write_text(line_chart(
            [Series(t, u, "delayed logistic")],
            title=f"tau={a.tau:g}, mu={a.mu:g}", ylabel="u(t)"), encoding="utf-8")
        outputs.append(a.svg)
    return outputs, a.out + ".manifest"


def cmd_compare(a):
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    base = _sim_params(a)
    ref = DdeParams(a.tau, a.mu, a.T, steps_per_delay=a.steps_per_delay)
    spec = EnsembleSpec(base, a.replicas, collect=("sup_error",), dde_ref=ref,
                        keep_paths=True)
    stats = run_ensemble(spec)
    sup = stats["sup_error"]
    write_csv(out / "replicas.csv", ["replica", "seed", "sup_error"],
              [(i, s, v) for i, (s, v) in enumerate(zip(stats.seeds, sup.values.tolist()))])
    write_csv(out / "summary.csv", ["metric", "mean", "variance", "stderr", "min", "max"],
              [("sup_error", sup.mean, sup.variance, sup.stderr, sup.min, sup.max)])
    t = stats.times
    dde = np.asarray(solve_dde(ref).eval(t))
    mean, lo, hi = stats.paths.mean(axis=0), stats.paths.min(axis=0), stats.paths.max(axis=0)
    write_csv(out / "paths.csv", ["t", "dde", "mean", "min", "max"],
              zip(t.tolist(), dde.tolist(), mean.tolist(), lo.tolist(), hi.tolist()))
    outputs = [str(out / n) for n in ("replicas.csv", "summary.csv", "paths.csv")]
    if a.svg:
        chart = line_chart(
            [Series(t, dde, "DDE solution", color="#d62728", dashed=True),
             Series(t, mean, f"ensemble mean (R={a.replicas})", color="#1f77b4")],
            bands=[Band(t, lo, hi, "replica min/max")],
            title=f"N={a.N}, tau={a.tau:g}, mu={a.mu:g}", ylabel="Y(t)")
        Path(a.svg).write_text(chart, encoding="utf-8")
        outputs.append(a.svg)
    return outputs, str(out / "manifest.txt")


def cmd_decompose(a):
    rep = decompose(simulate(_sim_params(a)))
    header, rows = columns_to_rows(rep.columns())
    write_csv(a.out, header, rows)
    return [a.out], a.out + ".manifest"


def _parse_N_list(text):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--N-list: {exc}") from None
    if len(values) < 3:
        raise UsageError("--N-list needs at least 3 values")
    return values


def cmd_sweep(a):
    N_list = _parse_N_list(a.N_list)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    base = _sim_params(a, N=N_list[0])
    ref = DdeParams(a.tau, a.mu, a.T, steps_per_delay=a.steps_per_delay)
    spec = EnsembleSpec(base, a.replicas, collect=(a.metric,), dde_ref=ref)
    res = scaling_study(spec, N_list)
    rows = []
    for N, st in zip(res.N_values, res.stats):
        m = st[a.metric]
        rows.append((N, m.mean, m.variance, m.stderr, m.min, m.max))
    write_csv(out / "sweep.csv", ["N", "mean", "variance", "stderr", "min", "max"], rows)
    fit = res.fits[a.metric]
    write_csv(out / "fit.csv", ["metric", "alpha", "intercept", "residual"],
              [(a.metric, fit.alpha, fit.intercept, fit.residual)])
    return [str(out / "sweep.csv"), str(out / "fit.csv")], str(out / "manifest.txt")


COMMANDS = {
    "simulate": cmd_simulate,
    "solve": cmd_solve,
    "compare": cmd_compare,
    "decompose": cmd_decompose,
    "sweep": cmd_sweep,
}


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise UsageError(f"unknown command {command!r}")


def _manifest_args(parser, a):
    entries = {}
    for action in _subparser(parser, a.command)._actions:
        if not action.option_strings or action.dest == "help":
            continue
        value = getattr(a, action.dest, None)
        if value is not None:
            entries[f"arg.{action.option_strings[0].lstrip('-')}"] = value
    return entries


def _replay_argv(parser, manifest, out_override):
    entries = read_manifest(manifest)
    command = entries.get("command")
    if command not in COMMANDS:
        raise UsageError(f"manifest {manifest} names no known command")
    argv = [command]
    for key in sorted(entries):
        if key.startswith("arg."):
            name = key[4:]
            value = out_override if (name == "out" and out_override) else entries[key]
            argv += [f"--{name}", value]
    return argv


def run(argv, parser=None):
    parser = parser or build_parser()
    a = parser.parse_args(argv)
    if a.manifest:
        return run(_replay_argv(parser, a.manifest, a.out), parser)
    if a.command is None:
        parser.print_usage(sys.stderr)
        raise UsageError("a command or --manifest is required")
    started = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    outputs, manifest_path = COMMANDS[a.command](a)
    entries = _manifest_args(parser, a)
    entries.update(command=a.command, tool_version=__version__, rng=RNG_ALGORITHM,
                   master_seed=getattr(a, "seed", ""), start_time=started,
                   end_time=time.strftime("%Y-%m-%dT%H:%M:%S%z"),
                   outputs=",".join(str(o) for o in outputs))
    write_manifest(manifest_path, entries)
    return outputs + [manifest_path]


def main(argv=None):
    try:
        run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (UsageError, ParameterError) as exc:
        print(f"dll: usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"dll: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
