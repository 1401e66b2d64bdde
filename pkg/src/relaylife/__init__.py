"""Lifetime-aware relay selection and power allocation for multi-user AF networks."""
from .assignment import STRATEGIES, Algorithm, Assignment, Strategy, assign, build_weight_matrix, priority_metric, srs_select
from .channel import InvalidTopologyError, PairCoefficients, SystemParams, Topology, end_to_end_ser, link_variance, ser_coefficients
from .estimators import LifetimeSimulator, RelayAssigner
from .lifetime import LifetimeResult, SimConfig, energy_metrics, run_lifetime
from .matching import (
    BottleneckResult,
    Matching,
    MbmResult,
    WeightMatrix,
    bottleneck_matching,
    hungarian_min_weight,
    maximum_matching,
    minimum_bottleneck_matching,
    unique_bottleneck_edge_test,
)
from .power import PairAllocation, PairContext, Policy, glm_allocate, mwtp_allocate, pair_weight

__version__ = "0.1.0"
