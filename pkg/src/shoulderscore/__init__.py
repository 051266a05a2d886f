"""Shoulder-pose compliance scoring and evaluation toolkit."""

from .core import (
    DEFAULT_CONFIG,
    LEFT_SHOULDER_INDEX,
    RIGHT_SHOULDER_INDEX,
    Landmark,
    ScoreConfig,
    ScoreStatus,
    ShoulderObservation,
    ShoulderScore,
    ValidationError,
    combined_score,
    evaluate_pose,
    horizontal_score,
    shoulder_tilt_score,
)
from .dataio import (
    LabeledSample,
    SampleRecord,
    compliance_label_for_yaw,
    generate_synthetic_fixture,
    join_samples,
    parse_labels,
    parse_landmark_records,
    records_from_samples,
)
from .edc import EdcCurve, EdcPoint, edc_curve, oracle_curve
from .metrics import (
    ConfusionMatrix,
    ErrorHistogram,
    EvaluationReport,
    Rates,
    RegressionReport,
    ScoredSample,
    ScoreMetric,
    classify,
    error_histogram,
    evaluate_samples,
    rates,
    regression_report,
    score_labeled_samples,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "LEFT_SHOULDER_INDEX",
    "RIGHT_SHOULDER_INDEX",
    "Landmark",
    "ScoreConfig",
    "ScoreStatus",
    "ShoulderObservation",
    "ShoulderScore",
    "ValidationError",
    "combined_score",
    "evaluate_pose",
    "horizontal_score",
    "shoulder_tilt_score",
    "LabeledSample",
    "SampleRecord",
    "compliance_label_for_yaw",
    "generate_synthetic_fixture",
    "join_samples",
    "parse_labels",
    "parse_landmark_records",
    "records_from_samples",
    "EdcCurve",
    "EdcPoint",
    "edc_curve",
    "oracle_curve",
    "ConfusionMatrix",
    "ErrorHistogram",
    "EvaluationReport",
    "Rates",
    "RegressionReport",
    "ScoredSample",
    "ScoreMetric",
    "classify",
    "error_histogram",
    "evaluate_samples",
    "rates",
    "regression_report",
    "score_labeled_samples",
    "__version__",
]
