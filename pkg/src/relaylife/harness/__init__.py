"""Topology generation, experiment sweeps, exhaustive oracles and the CLI."""
from .config import ExperimentSpec, figure_spec
from .experiment import ResultRow, format_csv, parse_csv, run_experiment
from .oracle import oracle_assign
from .topology import generate_topology, read_topology, write_topology

__all__ = [
    "ExperimentSpec",
    "ResultRow",
    "figure_spec",
    "format_csv",
    "generate_topology",
    "oracle_assign",
    "parse_csv",
    "read_topology",
    "run_experiment",
    "write_topology",
]
