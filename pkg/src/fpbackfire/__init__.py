"""Backfiring size conversion with calibrated fuzzy-level ratios.

Convert between function points and SLOC through per-language conversion
ratios, group language levels into fuzzy levels with triangular membership
functions, calibrate each level's ratio from project data under clamp
constraints, and evaluate calibrated against default ratios with
MMRE/MMER/PRED across seven experiment protocols.
"""

from .calibration import (
    CalibratedWeights,
    TrainingConfig,
    calibrated_conversion_table,
    initial_weights,
    predict,
    train,
)
from .conversion import (
    DEFAULT_PROGRAMMING_TABLE,
    LanguageEntry,
    ProgrammingTable,
    ProjectRecord,
    backfire,
    default_programming_table,
    level_for_language,
    load_programming_table,
    reverse_backfire,
)
from .dataio import (
    CurvePoint,
    emit_curve,
    generate_synthetic_dataset,
    read_projects_csv,
    read_report_csv,
    read_weights_csv,
    write_curve_csv,
    write_projects_csv,
    write_report_csv,
    write_weights_csv,
)
from .errors import (
    BackfireError,
    ConfigurationError,
    EmptyDatasetError,
    IncompatibleReportError,
    InvalidRatioError,
    OutOfRangeError,
    ParseError,
    RecordValidationError,
    StaleWeightsError,
    UndefinedMetricError,
    UnknownExperimentError,
    UnknownLanguageError,
)
from .experiments import (
    DEFAULT_EXPERIMENT_SEEDS,
    ExperimentResult,
    LeveledRecord,
    SplitSpec,
    assign_levels,
    run_all,
    run_experiment,
    split_by_size,
    split_random_stratified,
)
from .fuzzy import (
    FuzzyLevel,
    FuzzyLevelSet,
    MembershipFunction,
    assign_fuzzy_level,
    build_fuzzy_levels,
    default_fuzzy_levels,
    fuzzify,
    infer_ratio,
    load_fuzzy_levels,
    one_hot,
)
from .metrics import (
    EvaluationReport,
    Improvement,
    ImprovementRow,
    evaluate,
    improvement,
    mer,
    mre,
)

__version__ = "0.1.0"
