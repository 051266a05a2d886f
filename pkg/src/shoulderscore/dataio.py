"""Ingestion of pose-landmark records and manual compliance labels.

Wire formats (see README):

* Landmark records: UTF-8 JSON Lines, one record per line with ``image_id``
  (string), optional ``source`` (string) and optional ``landmarks`` (array of
  ``{index, x, y, z, visibility}`` objects). Full 33-point dumps are accepted;
  only the shoulder indices 11 and 12 are ever read.
* Label file: UTF-8 CSV with header ``image_id,label``, labels in [0, 1].

A record without both shoulder indices yields an absent observation rather
than sentinel coordinates, so downstream scoring reports missing landmarks
instead of silently treating the pose as degenerate.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .core import (
    LEFT_SHOULDER_INDEX,
    RIGHT_SHOULDER_INDEX,
    Landmark,
    ShoulderObservation,
    ValidationError,
)

__all__ = [
    "SampleRecord",
    "LabeledSample",
    "parse_landmark_records",
    "read_landmark_records",
    "format_landmark_record",
    "write_landmark_records",
    "parse_labels",
    "read_labels",
    "write_labels",
    "join_samples",
    "generate_synthetic_fixture",
    "records_from_samples",
    "compliance_label_for_yaw",
]

logger = logging.getLogger(__name__)

LABEL_GRID_STEP = 0.1
_GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SampleRecord:
    """One parsed landmark record; ``landmarks`` is None when the detector failed."""

    image_id: str
    landmarks: dict[int, Landmark] | None = None
    source: str | None = None

    def shoulder_observation(self) -> ShoulderObservation | None:
        """Extract the shoulder pair, or None if either index is absent."""
        if not self.landmarks:
            return None
        left = self.landmarks.get(LEFT_SHOULDER_INDEX)
        right = self.landmarks.get(RIGHT_SHOULDER_INDEX)
        if left is None or right is None:
            return None
        return ShoulderObservation(left, right)


@dataclass(frozen=True)
class LabeledSample:
    """A record joined with its human compliance label."""

    image_id: str
    observation: ShoulderObservation | None
    manual_label: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.manual_label <= 1.0:
            raise ValidationError(
                f"manual_label must be in [0, 1], got {self.manual_label!r}"
            )


def _lines(stream: str | Iterable[str] | TextIO) -> Iterable[str]:
    if isinstance(stream, str):
        return io.StringIO(stream)
    return stream


def _parse_landmark_entry(entry: object, where: str) -> tuple[int, Landmark]:
    if not isinstance(entry, dict):
        raise ValidationError(f"{where} must be an object, got {type(entry).__name__}")
    try:
        index = entry["index"]
    except KeyError:
        raise ValidationError(f"{where}.index is missing") from None
    if not isinstance(index, int) or isinstance(index, bool) or index < 0:
        raise ValidationError(f"{where}.index must be a non-negative integer")
    values = {}
    for field in ("x", "y", "z", "visibility"):
        if field not in entry:
            raise ValidationError(f"{where}.{field} is missing")
        value = entry[field]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValidationError(f"{where}.{field} must be a number")
        values[field] = float(value)
    try:
        point = Landmark(**values)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None
    return index, point


def parse_landmark_records(stream: str | Iterable[str] | TextIO) -> list[SampleRecord]:
    """Parse JSON Lines landmark records, preserving file order.

    Raises ValidationError naming the offending line and field on any
    malformed input or duplicate image_id.
    """
    records: list[SampleRecord] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(_lines(stream), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise ValidationError(f"line {lineno}: record must be a JSON object")
        image_id = obj.get("image_id")
        if not isinstance(image_id, str) or not image_id:
            raise ValidationError(f"line {lineno}: image_id must be a non-empty string")
        if image_id in seen:
            raise ValidationError(f"line {lineno}: duplicate image_id {image_id!r}")
        seen.add(image_id)
        source = obj.get("source")
        if source is not None and not isinstance(source, str):
            raise ValidationError(f"line {lineno}: source must be a string")
        landmarks: dict[int, Landmark] | None = None
        if "landmarks" in obj and obj["landmarks"] is not None:
            raw_list = obj["landmarks"]
            if not isinstance(raw_list, list):
                raise ValidationError(f"line {lineno}: landmarks must be an array")
            landmarks = {}
            for i, entry in enumerate(raw_list):
                try:
                    index, point = _parse_landmark_entry(entry, f"landmarks[{i}]")
                except ValidationError as exc:
                    raise ValidationError(f"line {lineno}: {exc}") from None
                if index in landmarks:
                    raise ValidationError(
                        f"line {lineno}: duplicate landmark index {index}"
                    )
                landmarks[index] = point
        records.append(SampleRecord(image_id=image_id, landmarks=landmarks, source=source))
    return records


def read_landmark_records(path) -> list[SampleRecord]:
    with open(path, encoding="utf-8") as fp:
        return parse_landmark_records(fp)


def format_landmark_record(record: SampleRecord) -> str:
    """Canonical single-line JSON form: fixed key order, landmarks sorted by index."""
    obj: dict[str, object] = {"image_id": record.image_id}
    if record.source is not None:
        obj["source"] = record.source
    if record.landmarks is not None:
        obj["landmarks"] = [
            {
                "index": index,
                "x": point.x,
                "y": point.y,
                "z": point.z,
                "visibility": point.visibility,
            }
            for index, point in sorted(record.landmarks.items())
        ]
    return json.dumps(obj, separators=(", ", ": "))


def write_landmark_records(records: Iterable[SampleRecord], fp: TextIO) -> None:
    for record in records:
        fp.write(format_landmark_record(record))
        fp.write("\n")


def parse_labels(stream: str | Iterable[str] | TextIO) -> dict[str, float]:
    """Parse the ``image_id,label`` CSV into a mapping.

    Labels off the 0.1 rater grid are accepted with a logged warning; labels
    outside [0, 1] or duplicate ids raise ValidationError.
    """
    reader = csv.reader(_lines(stream))
    labels: dict[str, float] = {}
    header_seen = False
    for row in reader:
        if not row:
            continue
        if not header_seen:
            if [cell.strip() for cell in row] != ["image_id", "label"]:
                raise ValidationError(
                    f"label file must start with header 'image_id,label', got {','.join(row)!r}"
                )
            header_seen = True
            continue
        lineno = reader.line_num
        if len(row) != 2:
            raise ValidationError(f"line {lineno}: expected 2 fields, got {len(row)}")
        image_id, raw_label = row[0].strip(), row[1].strip()
        if not image_id:
            raise ValidationError(f"line {lineno}: empty image_id")
        if image_id in labels:
            raise ValidationError(f"line {lineno}: duplicate image_id {image_id!r}")
        try:
            value = float(raw_label)
        except ValueError:
            raise ValidationError(
                f"line {lineno}: label is not a number: {raw_label!r}"
            ) from None
        if not 0.0 <= value <= 1.0:
            raise ValidationError(f"line {lineno}: label {value!r} outside [0, 1]")
        if abs(value * 10.0 - round(value * 10.0)) > _GRID_TOLERANCE:
            logger.warning("label for %s is off the 0.1 grid: %s", image_id, value)
        labels[image_id] = value
    if not header_seen:
        raise ValidationError("label file is empty (missing header)")
    return labels


def read_labels(path) -> dict[str, float]:
    with open(path, encoding="utf-8") as fp:
        return parse_labels(fp)


def write_labels(labels: dict[str, float], fp: TextIO) -> None:
    fp.write("image_id,label\n")
    for image_id, value in labels.items():
        fp.write(f"{image_id},{value!r}\n")


def join_samples(
    records: Iterable[SampleRecord], labels: dict[str, float]
) -> list[LabeledSample]:
    """Inner-join records with labels, ordered by image_id ascending.

    Unmatched entries on either side are reported as warnings with counts;
    an empty join raises ValidationError.
    """
    records = list(records)
    record_ids = {r.image_id for r in records}
    joined = [
        LabeledSample(r.image_id, r.shoulder_observation(), labels[r.image_id])
        for r in records
        if r.image_id in labels
    ]
    unlabeled = len(records) - len(joined)
    unmatched_labels = sum(1 for image_id in labels if image_id not in record_ids)
    if unlabeled:
        logger.warning("%d record(s) without a label were skipped", unlabeled)
    if unmatched_labels:
        logger.warning("%d label(s) have no matching record", unmatched_labels)
    if not joined:
        raise ValidationError("join produced no samples: nothing to evaluate")
    joined.sort(key=lambda s: s.image_id)
    return joined


def compliance_label_for_yaw(yaw_deg: float) -> float:
    """Rater-style label for a known yaw: cos(yaw) rounded to the 0.1 grid."""
    return round(10.0 * math.cos(math.radians(yaw_deg))) / 10.0


def generate_synthetic_fixture(
    seed: int, count: int, noise_fraction: float = 0.25
) -> list[LabeledSample]:
    """Deterministic synthetic dataset: shoulder pairs over yaw 0-90 degrees
    and roll 0-30 degrees with visibility noise and grid labels.

    The label is cos(true yaw) rounded to the 0.1 grid; a seeded
    ``noise_fraction`` of the samples gets one grid step of rater noise.
    Identical (seed, count, noise_fraction) always produce identical output.
    """
    if count < 1:
        raise ValidationError(f"count must be >= 1, got {count}")
    if not 0.0 <= noise_fraction <= 1.0:
        raise ValidationError(f"noise_fraction must be in [0, 1], got {noise_fraction}")
    rng = np.random.default_rng(seed)
    width = len(str(count - 1))
    samples: list[LabeledSample] = []
    for i in range(count):
        yaw_deg = float(rng.uniform(0.0, 90.0))
        roll_deg = float(rng.uniform(0.0, 30.0))
        span = float(rng.uniform(0.18, 0.42))
        cx = float(rng.uniform(0.40, 0.60))
        cy = float(rng.uniform(0.40, 0.60))
        cz = float(rng.uniform(-0.05, 0.05))
        yaw_sign = 1.0 if rng.random() < 0.5 else -1.0
        roll_sign = 1.0 if rng.random() < 0.5 else -1.0
        dx = span * math.cos(math.radians(yaw_deg))
        dz = yaw_sign * span * math.sin(math.radians(yaw_deg))
        dy = roll_sign * dx * math.tan(math.radians(roll_deg))
        # the away-turned shoulder loses confidence as the yaw grows
        v_near = float(np.clip(rng.normal(0.97, 0.02), 0.0, 1.0))
        v_far = float(
            np.clip(
                rng.normal(0.97, 0.02) - (yaw_deg / 90.0) * rng.uniform(0.0, 0.6),
                0.0,
                1.0,
            )
        )
        if yaw_sign >= 0.0:
            v_left, v_right = v_near, v_far
        else:
            v_left, v_right = v_far, v_near
        left = Landmark(cx + dx / 2.0, cy + dy / 2.0, cz + dz / 2.0, v_left)
        right = Landmark(cx - dx / 2.0, cy - dy / 2.0, cz - dz / 2.0, v_right)
        grid = int(round(10.0 * math.cos(math.radians(yaw_deg))))
        if rng.random() < noise_fraction:
            grid += 1 if rng.random() < 0.5 else -1
            grid = min(10, max(0, grid))
        samples.append(
            LabeledSample(
                image_id=f"synth-{i:0{width}d}",
                observation=ShoulderObservation(left, right),
                manual_label=grid / 10.0,
            )
        )
    return samples


def records_from_samples(
    samples: Iterable[LabeledSample], source: str = "synthetic"
) -> list[SampleRecord]:
    """Re-express labeled samples as landmark records (for fixture files)."""
    records = []
    for sample in samples:
        landmarks: dict[int, Landmark] | None = None
        if sample.observation is not None:
            landmarks = {
                LEFT_SHOULDER_INDEX: sample.observation.left,
                RIGHT_SHOULDER_INDEX: sample.observation.right,
            }
        records.append(
            SampleRecord(image_id=sample.image_id, landmarks=landmarks, source=source)
        )
    return records
