"""Graph transduction game classifier.

Semi-supervised classification by propagating labels over a kNN similarity
graph with multi-population replicator dynamics, plus nearest-neighbor
baselines and a leave-one-out evaluation protocol.
"""

from ._core import (
    SIGMA_FLOOR,
    UNLABELED,
    AccuracyReport,
    ConfigError,
    FormatError,
    GameConfig,
    GameResult,
    InputError,
    LabelAssignment,
    ProtocolSplit,
    SimilarityGraph,
    TrainingMember,
    TrainingSet,
    accumulated_nn_classify,
    build_splits,
    build_splits_generalized,
    euclidean_distance_matrix,
    expected_payoff,
    extract_labels,
    init_strategy_space,
    knn_neighborhoods,
    local_scales,
    nn_classify,
    three_per_class_applies,
    payoff_vector,
    replicator_step,
    run_game,
    run_protocol,
    similarity_from_distance,
    symmetrize_max,
    synthetic_blobs,
)

__version__ = "0.1.0"

__all__ = [
    "SIGMA_FLOOR",
    "UNLABELED",
    "AccuracyReport",
    "ConfigError",
    "FormatError",
    "GameConfig",
    "GameResult",
    "InputError",
    "LabelAssignment",
    "ProtocolSplit",
    "SimilarityGraph",
    "TrainingMember",
    "TrainingSet",
    "accumulated_nn_classify",
    "build_splits",
    "build_splits_generalized",
    "euclidean_distance_matrix",
    "expected_payoff",
    "extract_labels",
    "init_strategy_space",
    "knn_neighborhoods",
    "local_scales",
    "nn_classify",
    "three_per_class_applies",
    "payoff_vector",
    "replicator_step",
    "run_game",
    "run_protocol",
    "similarity_from_distance",
    "symmetrize_max",
    "synthetic_blobs",
]
