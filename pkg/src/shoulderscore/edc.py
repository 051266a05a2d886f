"""Error-versus-discard analysis of a quality score against human labels.

The empirical curve discards samples from worst score upward and tracks the
false-negative rate of the surviving population; the oracle curve discards
every false negative first and is the lower bound any discard order can
achieve for this error definition. Discarded samples leave both numerator
and denominator. When no compliant samples survive, the rate is undefined
and reported as None (never conflated with a perfect 0).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, TextIO

from .core import ValidationError
from .metrics import ScoredSample, ScoreMetric

__all__ = [
    "CurveKind",
    "EdcPoint",
    "EdcCurve",
    "edc_curve",
    "oracle_curve",
    "curve_to_csv",
    "write_curve",
    "parse_curve_points",
    "read_curve_points",
]


class CurveKind(str, Enum):
    EMPIRICAL = "empirical"
    ORACLE = "oracle"


@dataclass(frozen=True, slots=True)
class EdcPoint:
    discarded_count: int
    discard_fraction: float
    fnr_remaining: float | None


@dataclass(frozen=True)
class EdcCurve:
    points: tuple[EdcPoint, ...]
    kind: CurveKind
    tau: float
    metric_used: ScoreMetric


def _walk(ordered: Sequence[ScoredSample], tau: float) -> tuple[EdcPoint, ...]:
    # one pass: remove samples in the given order, keeping survivor FN/TP counts
    n = len(ordered)
    fn = sum(1 for s in ordered if s.label >= tau and s.score < tau)
    tp = sum(1 for s in ordered if s.label >= tau and s.score >= tau)
    points = []
    for k, sample in enumerate(ordered):
        compliant = fn + tp
        points.append(
            EdcPoint(
                discarded_count=k,
                discard_fraction=k / n,
                fnr_remaining=fn / compliant if compliant else None,
            )
        )
        if sample.label >= tau:
            if sample.score < tau:
                fn -= 1
            else:
                tp -= 1
    return tuple(points)


def _validated(samples: Iterable[ScoredSample], tau: float) -> list[ScoredSample]:
    if not 0.0 <= tau <= 1.0:
        raise ValidationError(f"tau must be in [0, 1], got {tau!r}")
    samples = list(samples)
    if not samples:
        raise ValidationError("cannot build a discard curve from an empty sample list")
    return samples


def edc_curve(
    samples: Iterable[ScoredSample],
    tau: float = 0.8,
    metric_used: ScoreMetric = ScoreMetric.HORIZONTAL,
) -> EdcCurve:
    """Survivor FNR at every discard count k = 0 .. n-1, discarding lowest
    scores first (ties broken by image_id for determinism)."""
    samples = _validated(samples, tau)
    ordered = sorted(samples, key=lambda s: (s.score, s.image_id))
    return EdcCurve(_walk(ordered, tau), CurveKind.EMPIRICAL, tau, metric_used)


def oracle_curve(
    samples: Iterable[ScoredSample],
    tau: float = 0.8,
    metric_used: ScoreMetric = ScoreMetric.HORIZONTAL,
) -> EdcCurve:
    """Lower-bound curve: all false negatives are discarded first (ties by
    image_id), then the rest by ascending score; reaches 0 at k = FN whenever
    compliant samples remain."""
    samples = _validated(samples, tau)
    false_negatives = sorted(
        (s for s in samples if s.label >= tau and s.score < tau),
        key=lambda s: s.image_id,
    )
    rest = sorted(
        (s for s in samples if not (s.label >= tau and s.score < tau)),
        key=lambda s: (s.score, s.image_id),
    )
    return EdcCurve(_walk(false_negatives + rest, tau), CurveKind.ORACLE, tau, metric_used)


def curve_to_csv(curve: EdcCurve) -> str:
    out = io.StringIO()
    write_curve(curve, out)
    return out.getvalue()


def write_curve(curve: EdcCurve, fp: TextIO) -> None:
    fp.write("discarded_count,discard_fraction,fnr_remaining\n")
    for p in curve.points:
        fnr = "" if p.fnr_remaining is None else repr(p.fnr_remaining)
        fp.write(f"{p.discarded_count},{p.discard_fraction!r},{fnr}\n")


def parse_curve_points(stream: str | Iterable[str] | TextIO) -> list[EdcPoint]:
    """Read back a curve file written by ``write_curve``."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header != ["discarded_count", "discard_fraction", "fnr_remaining"]:
        raise ValidationError(
            "curve file must start with header "
            f"'discarded_count,discard_fraction,fnr_remaining', got {header!r}"
        )
    points = []
    for row in reader:
        if not row:
            continue
        if len(row) != 3:
            raise ValidationError(f"line {reader.line_num}: expected 3 fields, got {len(row)}")
        try:
            count = int(row[0])
            fraction = float(row[1])
            fnr = None if row[2] == "" else float(row[2])
        except ValueError as exc:
            raise ValidationError(f"line {reader.line_num}: {exc}") from None
        points.append(EdcPoint(count, fraction, fnr))
    if not points:
        raise ValidationError("curve file contains no points")
    return points


def read_curve_points(path) -> list[EdcPoint]:
    with open(path, encoding="utf-8") as fp:
        return parse_curve_points(fp)
