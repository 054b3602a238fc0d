"""Causal direction of bivariate numeric data from conditional-distribution
geometry: deviation-from-anticipated-joint scoring and gradient
sign-change counting, with a full-factorial tuner and screening."""

from .aag import AnticipatedJoint, DualResponse, anticipated_joint, decode_slice, dual_response
from .classify import (
    AAG,
    DECISIVE,
    INDECISIVE,
    METHODS,
    HyperParams,
    ScreeningFeatures,
    classify,
    classify_aag,
    classify_monotonicity,
    screen,
    screening_features,
)
from .config import RunConfig, load_config, make_design, make_hyperparams
from .density import (
    GIVEN_X,
    GIVEN_Y,
    ConditionalSlices,
    GridDistribution,
    Marginals,
    conditionals,
    fit_joint,
    grid_coords,
    marginals,
    transpose,
    write_grid_csv,
)
from .direction import UNDECIDED, X_TO_Y, Y_TO_X, DirectionDecision, flip
from .errors import (
    ConfigError,
    CoverageError,
    DegenerateDataError,
    DimensionError,
    PaircauseError,
    PairFormatError,
    ParameterError,
    ScoringError,
)
from .evalbench import (
    DoeDesign,
    PairOutcome,
    RunRecord,
    SweepStats,
    accuracy,
    accuracy_map,
    best_run,
    evaluate_combo,
    roc_auc,
    run_doe,
    sweep_stats,
)
from .ingest import (
    DEFAULT_EXCLUDED_IDS,
    PairMeta,
    PairSample,
    format_meta,
    generate_synthetic,
    load_benchmark,
    load_meta,
    load_pair,
    normalize,
    select_pairs,
    swap_pair,
)
from .metrics import METRIC_KINDS, LevelMask, delta_max, deviation, jaccard_index, level_mask
from .monotonicity import (
    MONOTONICITY,
    WEIGHTED,
    ZONE,
    GradientField,
    MonotonicityResult,
    gradient_field,
    monotonicity_decide,
    monotonicity_indexes,
)

__version__ = "0.1.0"
