"""Regression and threshold-classification comparison of scores vs labels.

All reductions run on compensated (exact) summation so that results do not
depend on how the sample list is partitioned: splitting the input into chunks
and merging partial sums agrees with the single-pass result to well below
1e-12, which makes parallel evaluation safe.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .core import ScoreConfig, DEFAULT_CONFIG, ShoulderScore, ValidationError, evaluate_pose
from .dataio import LabeledSample

__all__ = [
    "ScoreMetric",
    "ScoredSample",
    "RegressionReport",
    "ConfusionMatrix",
    "Rates",
    "ErrorHistogram",
    "EvaluationReport",
    "select_score",
    "score_labeled_samples",
    "regression_report",
    "classify",
    "rates",
    "error_histogram",
    "evaluate_samples",
]


class ScoreMetric(str, Enum):
    """Which core score column is compared against the manual label."""

    HORIZONTAL = "horizontal"
    TILT = "tilt"
    COMBINED = "combined"


@dataclass(frozen=True, slots=True)
class ScoredSample:
    image_id: str
    label: float
    score: float


@dataclass(frozen=True)
class RegressionReport:
    """Agreement statistics; ``pearson_r`` is None when either side has zero
    variance (correlation undefined)."""

    n: int
    pearson_r: float | None
    mae: float
    rmse: float


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts at threshold tau with compliant (label >= tau) as positive class."""

    tp: int
    tn: int
    fp: int
    fn: int
    tau: float
    metric_used: ScoreMetric

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class Rates:
    """fnr = fn/(fn+tp), fpr = fp/(fp+tn); None when the denominator is zero."""

    fpr: float | None
    fnr: float | None


@dataclass(frozen=True)
class ErrorHistogram:
    bin_width: float
    counts: tuple[int, ...]
    threshold_marker: float = 0.2

    @property
    def edges(self) -> tuple[float, ...]:
        return tuple(i * self.bin_width for i in range(len(self.counts) + 1))


def select_score(result: ShoulderScore, metric: ScoreMetric) -> float:
    if metric is ScoreMetric.HORIZONTAL:
        return result.horizontal_score
    if metric is ScoreMetric.TILT:
        return result.tilt_score
    return result.combined_score


def score_labeled_samples(
    samples: Iterable[LabeledSample],
    cfg: ScoreConfig = DEFAULT_CONFIG,
    metric: ScoreMetric = ScoreMetric.HORIZONTAL,
) -> list[ScoredSample]:
    """Run the scoring core over labeled samples and pick one score column."""
    return [
        ScoredSample(s.image_id, s.manual_label, select_score(evaluate_pose(s.observation, cfg), metric))
        for s in samples
    ]


def _pairs(samples: Iterable) -> list[tuple[float, float]]:
    pairs = []
    for item in samples:
        if isinstance(item, ScoredSample):
            label, score = item.label, item.score
        else:
            label, score = item
        label, score = float(label), float(score)
        if not (math.isfinite(label) and math.isfinite(score)):
            raise ValidationError(f"non-finite sample ({label!r}, {score!r})")
        pairs.append((label, score))
    return pairs


@dataclass(frozen=True)
class _Moments:
    n: int
    sx: float
    sy: float
    sxx: float
    syy: float
    sxy: float
    abs_err: float
    sq_err: float
    xmin: float
    xmax: float
    ymin: float
    ymax: float


def _chunk_moments(pairs: Sequence[tuple[float, float]]) -> _Moments:
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    diffs = [x - y for x, y in pairs]
    return _Moments(
        n=len(pairs),
        sx=math.fsum(xs),
        sy=math.fsum(ys),
        sxx=math.fsum(x * x for x in xs),
        syy=math.fsum(y * y for y in ys),
        sxy=math.fsum(x * y for x, y in pairs),
        abs_err=math.fsum(abs(d) for d in diffs),
        sq_err=math.fsum(d * d for d in diffs),
        xmin=min(xs),
        xmax=max(xs),
        ymin=min(ys),
        ymax=max(ys),
    )


def _merge_moments(parts: Sequence[_Moments]) -> _Moments:
    return _Moments(
        n=sum(p.n for p in parts),
        sx=math.fsum(p.sx for p in parts),
        sy=math.fsum(p.sy for p in parts),
        sxx=math.fsum(p.sxx for p in parts),
        syy=math.fsum(p.syy for p in parts),
        sxy=math.fsum(p.sxy for p in parts),
        abs_err=math.fsum(p.abs_err for p in parts),
        sq_err=math.fsum(p.sq_err for p in parts),
        xmin=min(p.xmin for p in parts),
        xmax=max(p.xmax for p in parts),
        ymin=min(p.ymin for p in parts),
        ymax=max(p.ymax for p in parts),
    )


def regression_report(samples: Iterable, chunks: int = 1) -> RegressionReport:
    """Pearson r, MAE and RMSE of (label, score) pairs.

    ``chunks`` > 1 partitions the reduction and evaluates the parts on a
    thread pool; the merged result is partitioning-independent.
    """
    pairs = _pairs(samples)
    n = len(pairs)
    if n < 2:
        raise ValidationError(f"regression needs at least 2 samples, got {n}")
    if chunks < 1:
        raise ValidationError(f"chunks must be >= 1, got {chunks}")
    if chunks == 1:
        moments = _chunk_moments(pairs)
    else:
        chunks = min(chunks, n)
        size = -(-n // chunks)
        parts = [pairs[i : i + size] for i in range(0, n, size)]
        with ThreadPoolExecutor(max_workers=len(parts)) as pool:
            moments = _merge_moments(list(pool.map(_chunk_moments, parts)))

    pearson: float | None
    if moments.xmin == moments.xmax or moments.ymin == moments.ymax:
        pearson = None
    else:
        var_x = n * moments.sxx - moments.sx * moments.sx
        var_y = n * moments.syy - moments.sy * moments.sy
        if var_x <= 0.0 or var_y <= 0.0:
            pearson = None
        else:
            cov = n * moments.sxy - moments.sx * moments.sy
            pearson = min(1.0, max(-1.0, cov / math.sqrt(var_x * var_y)))
    return RegressionReport(
        n=n,
        pearson_r=pearson,
        mae=moments.abs_err / n,
        rmse=math.sqrt(moments.sq_err / n),
    )


def classify(
    samples: Iterable,
    tau: float = 0.8,
    metric_used: ScoreMetric = ScoreMetric.HORIZONTAL,
) -> ConfusionMatrix:
    """Count the four confusion cells at threshold tau.

    Boundary convention: label >= tau is compliant, score >= tau is accepted.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValidationError(f"tau must be in [0, 1], got {tau!r}")
    pairs = _pairs(samples)
    if not pairs:
        raise ValidationError("cannot classify an empty sample list")
    tp = tn = fp = fn = 0
    for label, score in pairs:
        if label >= tau:
            if score >= tau:
                tp += 1
            else:
                fn += 1
        else:
            if score >= tau:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, tn=tn, fp=fp, fn=fn, tau=tau, metric_used=metric_used)


def rates(matrix: ConfusionMatrix) -> Rates:
    fn_den = matrix.fn + matrix.tp
    fp_den = matrix.fp + matrix.tn
    return Rates(
        fpr=matrix.fp / fp_den if fp_den else None,
        fnr=matrix.fn / fn_den if fn_den else None,
    )


def error_histogram(
    samples: Iterable, bin_width: float = 0.05, threshold_marker: float = 0.2
) -> ErrorHistogram:
    """Histogram of |label - score| over bins [0, w), [w, 2w), ... covering [0, 1].

    An error of exactly 1.0 lands in the last bin.
    """
    if not (math.isfinite(bin_width) and 0.0 < bin_width <= 1.0):
        raise ValidationError(f"bin_width must be in (0, 1], got {bin_width!r}")
    pairs = _pairs(samples)
    n_bins = int(math.floor(1.0 / bin_width + 1e-9))
    if n_bins * bin_width < 1.0 - 1e-9:
        n_bins += 1
    counts = [0] * n_bins
    for label, score in pairs:
        err = abs(label - score)
        idx = min(n_bins - 1, int(math.floor(err / bin_width + 1e-9)))
        counts[idx] += 1
    return ErrorHistogram(
        bin_width=bin_width, counts=tuple(counts), threshold_marker=threshold_marker
    )


@dataclass(frozen=True)
class EvaluationReport:
    """Combined regression + classification report for one metric column."""

    regression: RegressionReport
    matrix: ConfusionMatrix
    rates: Rates

    def to_dict(self) -> dict:
        return {
            "n": self.regression.n,
            "pearson_r": self.regression.pearson_r,
            "mae": self.regression.mae,
            "rmse": self.regression.rmse,
            "tp": self.matrix.tp,
            "tn": self.matrix.tn,
            "fp": self.matrix.fp,
            "fn": self.matrix.fn,
            "fpr": self.rates.fpr,
            "fnr": self.rates.fnr,
            "tau": self.matrix.tau,
            "metric_used": self.matrix.metric_used.value,
        }

    def to_json(self) -> str:
        # json emits floats via repr: full round-trip precision
        return json.dumps(self.to_dict(), indent=2) + "\n"


def evaluate_samples(
    samples: Sequence[ScoredSample],
    tau: float = 0.8,
    metric_used: ScoreMetric = ScoreMetric.HORIZONTAL,
) -> EvaluationReport:
    matrix = classify(samples, tau, metric_used)
    return EvaluationReport(
        regression=regression_report(samples),
        matrix=matrix,
        rates=rates(matrix),
    )
