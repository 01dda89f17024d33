"""Distributed link scheduling via bounded-size augmentations of a matching."""

from .baseline import maximal_matching
from .decompose import (
    DifferenceComponent,
    build_target_set,
    decompose_cycle,
    decompose_path,
    path_offset_candidates,
    symmetric_difference_components,
)
from .graph import (
    Augmentation,
    Graph,
    Matching,
    apply_augmentation,
    augment_all,
    augmentation_gain,
    augmentation_size,
    are_disjoint,
    dump_graph,
    is_matching,
    load_graph,
    matching_weight,
    parse_graph,
)
from .harness import (
    ExperimentConfig,
    MetricsRow,
    build_grid,
    classify_stability,
    overhead_fraction,
    read_metrics,
    run_simulation,
    run_sweep,
    write_metrics,
)
from .oracle import (
    OracleResult,
    delta_lower_bound,
    enumerate_matchings,
    lyapunov_value,
    max_weight_matching,
)
from .protocol import (
    AugmentationBuild,
    ControlOutcome,
    NodeState,
    PhaseMessage,
    Trace,
    apply_switch_decisions,
    elect_seeds,
    mask_zero_queues,
    run_control_part,
    serialize_trace,
)
from .traffic import (
    PRESETS,
    ArrivalProcess,
    grid_load_vector,
    make_arrivals,
    sample_arrivals,
    step_queues,
)

__all__ = [
    "ArrivalProcess",
    "Augmentation",
    "AugmentationBuild",
    "ControlOutcome",
    "DifferenceComponent",
    "ExperimentConfig",
    "Graph",
    "Matching",
    "MetricsRow",
    "NodeState",
    "OracleResult",
    "PRESETS",
    "PhaseMessage",
    "Trace",
    "apply_augmentation",
    "apply_switch_decisions",
    "are_disjoint",
    "augment_all",
    "augmentation_gain",
    "augmentation_size",
    "build_grid",
    "build_target_set",
    "classify_stability",
    "decompose_cycle",
    "decompose_path",
    "delta_lower_bound",
    "dump_graph",
    "elect_seeds",
    "enumerate_matchings",
    "grid_load_vector",
    "is_matching",
    "load_graph",
    "lyapunov_value",
    "make_arrivals",
    "mask_zero_queues",
    "matching_weight",
    "max_weight_matching",
    "maximal_matching",
    "overhead_fraction",
    "parse_graph",
    "path_offset_candidates",
    "read_metrics",
    "run_control_part",
    "run_simulation",
    "run_sweep",
    "sample_arrivals",
    "serialize_trace",
    "step_queues",
    "symmetric_difference_components",
    "write_metrics",
]
