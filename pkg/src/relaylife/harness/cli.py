"""Command-line interface: ``relaylife {assign,simulate,sweep,oracle}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from .. import __version__
from ..assignment import STRATEGIES, assign
from .config import FIGURES, ExperimentSpec, figure_spec, parse_overrides, read_config
from .experiment import format_csv, run_experiment
from .oracle import cross_check
from .topology import generate_topology, read_topology

log = logging.getLogger("relaylife")


def _spec_from_args(args, fig=None) -> ExperimentSpec:
    overrides = read_config(args.config) if args.config else {}
    overrides.update(parse_overrides(args.set or []))
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.topologies is not None:
        overrides["n_topologies"] = args.topologies
    if fig is not None:
        return figure_spec(fig, **overrides)
    return ExperimentSpec(**overrides)


def _progress(done, total):
    if done == total or done % max(1, total // 20) == 0:
        log.info("%d/%d topologies", done, total)


def _write(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
        log.info("wrote %s", path)


def cmd_assign(args) -> int:
    spec = _spec_from_args(args)
    topology = read_topology(args.topology)
    result = assign(topology, spec.params, args.strategy, spec.ser_target, spec.srs_order)
    print(f"# strategy={result.strategy} ser_target={spec.ser_target!r}")
    if result.certified is not None:
        print(f"# certified={int(result.certified)}")
    print("source relay ps_w pr_w weight")
    for p in result.pairs:
        print(f"{p.source} {p.relay} {p.ps!r} {p.pr!r} {p.weight!r}")
    return 0


def cmd_simulate(args) -> int:
    spec = _spec_from_args(args, args.fig)
    rows = run_experiment(spec, progress=_progress)
    meta = {"relaylife": __version__, "figure": args.fig or "custom"}
    _write(format_csv(rows, meta), args.output)
    return 0


def cmd_sweep(args) -> int:
    figs = sorted(FIGURES) if args.fig == "all" else [args.fig]
    os.makedirs(args.out_dir, exist_ok=True)
    for fig in figs:
        spec = _spec_from_args(args, fig)
        log.info("figure %s: %s over %s", fig, spec.sweep, spec.sweep_values)
        rows = run_experiment(spec, progress=_progress)
        meta = {"relaylife": __version__, "figure": fig}
        _write(format_csv(rows, meta), os.path.join(args.out_dir, f"fig{fig}.csv"))
    return 0


def cmd_oracle(args) -> int:
    spec = _spec_from_args(args)
    if args.topology:
        topologies = [read_topology(args.topology)]
    else:
        topologies = [
            generate_topology(spec.seed, i, args.sources, args.relays,
                              area_side=spec.area_side, bs_position=spec.bs_position,
                              energy=spec.initial_energy)
            for i in range(args.trials)
        ]
    rng = np.random.default_rng(spec.seed)
    failures = 0
    for i, topo in enumerate(topologies):
        if args.random_energy:
            topo = topo.with_energies(rng.uniform(0.5, 1.5, topo.n_sources) * spec.initial_energy,
                                      rng.uniform(0.5, 1.5, topo.n_relays) * spec.initial_energy)
        checks = cross_check(topo, spec.params, spec.ser_target)
        failures += sum(not ok for ok in checks.values())
        line = " ".join(f"{k}={'ok' if ok else 'MISMATCH'}" for k, ok in checks.items())
        print(f"topology {i}: {line}")
    print(f"{len(topologies)} topologies, {failures} mismatches")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relaylife", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value experiment config file")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    common.add_argument("--seed", type=int, default=None,
                        help="master seed (default: $RELAYLIFE_SEED, else 0)")
    common.add_argument("--topologies", type=int, default=None, help="number of random topologies")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assign", parents=[common], help="assign relays and powers for one topology")
    p.add_argument("topology", help="topology file")
    p.add_argument("--strategy", default="GLM-MBM", choices=[str(s) for s in STRATEGIES])
    p.set_defaults(func=cmd_assign)

    p = sub.add_parser("simulate", parents=[common], help="run one experiment and emit CSV")
    p.add_argument("--fig", choices=sorted(FIGURES), help="start from a figure preset")
    p.add_argument("-o", "--output", default="-", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common], help="reproduce the figure sweeps")
    p.add_argument("--fig", default="all", choices=sorted(FIGURES) + ["all"])
    p.add_argument("--out-dir", default="results")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", parents=[common], help="cross-check solvers by exhaustive search")
    p.add_argument("topology", nargs="?", help="topology file (default: random small networks)")
    p.add_argument("--sources", type=int, default=3)
    p.add_argument("--relays", type=int, default=5)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--random-energy", action="store_true",
                   help="randomise residual energies to exercise non-uniform states")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
