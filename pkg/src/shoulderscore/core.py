"""Closed-form shoulder posture scoring from a pair of 3D pose landmarks.

Two unit-interval scores are computed from the left/right shoulder points of
a 33-landmark pose skeleton (indices 11 and 12):

* ``horizontal_score`` - cosine of the shoulder yaw angle (depth gap vs.
  horizontal gap), discounted by how asymmetric the two landmark confidences
  are. 1.0 means the shoulder line is square to the camera.
* ``shoulder_tilt_score`` - linear mapping of the in-plane roll angle of the
  shoulder line. 1.0 means level shoulders, 0.0 a vertical shoulder line.

``evaluate_pose`` combines both via their geometric mean and applies the
gating rules: missing landmarks, landmarks below the confidence floor, and
degenerate (near-coincident) geometry all yield a score of 0 with a status
telling the caller why.

All functions are pure and thread-safe; everything is computed with scalar
math on the caller's thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "LEFT_SHOULDER_INDEX",
    "RIGHT_SHOULDER_INDEX",
    "ValidationError",
    "Landmark",
    "ShoulderObservation",
    "ScoreConfig",
    "ScoreStatus",
    "ShoulderScore",
    "horizontal_score",
    "shoulder_tilt_score",
    "combined_score",
    "evaluate_pose",
]

# Landmark indices of the shoulders in the common 33-point pose topology.
LEFT_SHOULDER_INDEX = 11
RIGHT_SHOULDER_INDEX = 12

_HALF_PI = math.pi / 2.0


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def _finite(value: float, field: str) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{field} is not a number: {value!r}") from exc
    if not math.isfinite(value):
        raise ValidationError(f"{field} must be finite, got {value!r}")
    return value


@dataclass(frozen=True, slots=True)
class Landmark:
    """One pose point: image-normalized x/y, estimator-scale z, confidence.

    Coordinates must be finite; the confidence is clamped into [0, 1] on
    construction (estimators occasionally emit values slightly outside).
    """

    x: float
    y: float
    z: float
    visibility: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _finite(self.x, "x"))
        object.__setattr__(self, "y", _finite(self.y, "y"))
        object.__setattr__(self, "z", _finite(self.z, "z"))
        v = self.visibility
        try:
            v = float(v)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"visibility is not a number: {v!r}") from exc
        if math.isnan(v):
            raise ValidationError("visibility must not be NaN")
        object.__setattr__(self, "visibility", min(1.0, max(0.0, v)))


@dataclass(frozen=True, slots=True)
class ShoulderObservation:
    """The left/right shoulder landmark pair extracted from one pose record."""

    left: Landmark
    right: Landmark


@dataclass(frozen=True, slots=True)
class ScoreConfig:
    """Scoring knobs.

    epsilon: length guard below which shoulder geometry counts as degenerate.
    min_visibility: per-landmark confidence floor; below it the pose is not
        scored at all.
    tau: compliance threshold used by downstream classification and the UI.
    """

    epsilon: float = 1e-6
    min_visibility: float = 0.5
    tau: float = 0.8

    def __post_init__(self) -> None:
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValidationError(f"epsilon must be > 0, got {self.epsilon!r}")
        if not 0.0 <= self.min_visibility <= 1.0:
            raise ValidationError(
                f"min_visibility must be in [0, 1], got {self.min_visibility!r}"
            )
        if not 0.0 <= self.tau <= 1.0:
            raise ValidationError(f"tau must be in [0, 1], got {self.tau!r}")


DEFAULT_CONFIG = ScoreConfig()


class ScoreStatus(str, Enum):
    OK = "ok"
    MISSING_LANDMARKS = "missing_landmarks"
    LOW_VISIBILITY = "low_visibility"
    DEGENERATE_GEOMETRY = "degenerate_geometry"


@dataclass(frozen=True, slots=True)
class ShoulderScore:
    """Result of scoring one pose: component scores, debug angles, status.

    Whenever ``status`` is OK, ``combined_score`` equals
    ``sqrt(horizontal_score * tilt_score)``; any other status forces all
    three scores to 0.
    """

    horizontal_score: float
    tilt_score: float
    combined_score: float
    yaw_angle_deg: float
    roll_angle_deg: float
    status: ScoreStatus


_ZERO_MISSING = ShoulderScore(0.0, 0.0, 0.0, 90.0, 90.0, ScoreStatus.MISSING_LANDMARKS)
_ZERO_LOW_VIS = ShoulderScore(0.0, 0.0, 0.0, 90.0, 90.0, ScoreStatus.LOW_VISIBILITY)
_ZERO_DEGENERATE = ShoulderScore(
    0.0, 0.0, 0.0, 90.0, 90.0, ScoreStatus.DEGENERATE_GEOMETRY
)


def horizontal_score(
    obs: ShoulderObservation, cfg: ScoreConfig = DEFAULT_CONFIG
) -> tuple[float, float]:
    """Yaw-alignment score and yaw angle in degrees.

    The score is cos(yaw) weighted by the visibility-symmetry factor
    ``1 - |v_L - v_R|``. If the shoulder pair is degenerate in the
    horizontal plane (``hypot(dx, dz) < epsilon``) the score is 0 and the
    angle reported as 90 degrees.
    """
    dx = obs.left.x - obs.right.x
    dz = obs.left.z - obs.right.z
    norm = math.hypot(dx, dz)
    if norm < cfg.epsilon:
        return 0.0, 90.0
    geom = abs(dx) / norm
    v_sym = 1.0 - abs(obs.left.visibility - obs.right.visibility)
    v_sym = min(1.0, max(0.0, v_sym))
    yaw_deg = math.degrees(math.atan2(abs(dz), abs(dx)))
    return geom * v_sym, yaw_deg


def shoulder_tilt_score(
    obs: ShoulderObservation, cfg: ScoreConfig = DEFAULT_CONFIG
) -> tuple[float, float]:
    """Roll-levelness score and roll angle in degrees.

    The roll angle of the shoulder line is mapped linearly onto [0, 1]:
    level shoulders score 1, a vertical shoulder line scores 0. Degenerate
    in-image geometry (``max(|dx|, |dy|) < epsilon``) scores 0.
    """
    dx = obs.left.x - obs.right.x
    dy = obs.left.y - obs.right.y
    if max(abs(dx), abs(dy)) < cfg.epsilon:
        return 0.0, 90.0
    phi = math.atan2(abs(dy), abs(dx))
    return 1.0 - phi / _HALF_PI, math.degrees(phi)


def combined_score(s_yaw: float, s_roll: float) -> float:
    """Geometric mean of the two component scores."""
    if not (math.isfinite(s_yaw) and 0.0 <= s_yaw <= 1.0):
        raise ValidationError(f"s_yaw must be in [0, 1], got {s_yaw!r}")
    if not (math.isfinite(s_roll) and 0.0 <= s_roll <= 1.0):
        raise ValidationError(f"s_roll must be in [0, 1], got {s_roll!r}")
    return math.sqrt(s_yaw * s_roll)


def evaluate_pose(
    obs: ShoulderObservation | None, cfg: ScoreConfig = DEFAULT_CONFIG
) -> ShoulderScore:
    """Score one pose observation, applying all gating rules.

    An absent observation, a landmark below ``cfg.min_visibility``, or a
    fully degenerate shoulder pair each short-circuit to a zero score with
    the corresponding status.
    """
    if obs is None:
        return _ZERO_MISSING
    left, right = obs.left, obs.right
    if min(left.visibility, right.visibility) < cfg.min_visibility:
        return _ZERO_LOW_VIS
    dx = left.x - right.x
    dy = left.y - right.y
    dz = left.z - right.z
    eps = cfg.epsilon
    ax = abs(dx)
    if math.hypot(dx, dz) < eps and max(ax, abs(dy)) < eps:
        return _ZERO_DEGENERATE
    s_yaw, yaw_deg = horizontal_score(obs, cfg)
    s_roll, roll_deg = shoulder_tilt_score(obs, cfg)
    return ShoulderScore(
        horizontal_score=s_yaw,
        tilt_score=s_roll,
        combined_score=math.sqrt(s_yaw * s_roll),
        yaw_angle_deg=yaw_deg,
        roll_angle_deg=roll_deg,
        status=ScoreStatus.OK,
    )
