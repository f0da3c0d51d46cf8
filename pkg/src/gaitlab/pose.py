"""Core domain types: keypoints, frames, sequences, and class labels.

Coordinates follow the usual pose-estimator image convention: x grows
rightward, y grows downward, units are pixels. Every feature downstream is
an absolute distance or angle, so the y-direction choice is harmless -- it
is fixed here only to keep mixed-convention datasets out.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional


class KeypointId(enum.IntEnum):
    """The 14 body joints used for gait features, indexed 1..14."""

    LEFT_EAR = 1
    RIGHT_EAR = 2
    LEFT_SHOULDER = 3
    RIGHT_SHOULDER = 4
    LEFT_ELBOW = 5
    RIGHT_ELBOW = 6
    LEFT_WRIST = 7
    RIGHT_WRIST = 8
    LEFT_HIP = 9
    RIGHT_HIP = 10
    LEFT_KNEE = 11
    RIGHT_KNEE = 12
    LEFT_ANKLE = 13
    RIGHT_ANKLE = 14

    @property
    def json_name(self) -> str:
        """CamelCase name used in the .kp.jsonl interchange format."""
        return "".join(part.capitalize() for part in self.name.split("_"))

    @classmethod
    def from_json_name(cls, name: str) -> Optional["KeypointId"]:
        return _JSON_NAME_TO_ID.get(name)


KEYPOINT_ORDER = tuple(KeypointId)  # index order 1..14

_JSON_NAME_TO_ID = {k.json_name: k for k in KeypointId}


class GaitLabel(enum.Enum):
    """The five gait classes (four abnormalities plus normal)."""

    CHOREIFORM = "Choreiform"
    DIPLEGIA = "Diplegia"
    HEMIPLEGIA = "Hemiplegia"
    NORMAL = "Normal"
    PARKINSON = "Parkinson"

    @classmethod
    def from_name(cls, name: str) -> "GaitLabel":
        for label in cls:
            if label.value.lower() == name.strip().lower():
                return label
        raise ValueError(f"unknown gait label {name!r}")


LABEL_ORDER = tuple(GaitLabel)


@dataclass(frozen=True)
class Keypoint:
    """A single 2-D joint location with detector confidence."""

    x: float
    y: float
    confidence: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite keypoint coordinates ({self.x}, {self.y})")
        if not (math.isfinite(self.confidence) and 0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class PoseFrame:
    """Keypoints detected in one video frame; missing joints are simply absent."""

    keypoints: dict[KeypointId, Keypoint]
    frame_index: int
    timestamp_ms: Optional[int] = None

    def __post_init__(self):
        if self.frame_index < 0:
            raise ValueError("frame_index must be >= 0")

    def is_complete(self) -> bool:
        return all(k in self.keypoints for k in KEYPOINT_ORDER)


@dataclass(frozen=True)
class PoseSequence:
    """Ordered frames of one single-person video."""

    frames: tuple[PoseFrame, ...]
    source_id: str = ""

    def __post_init__(self):
        if not self.frames:
            raise ValueError("PoseSequence must contain at least one frame")
        indices = [f.frame_index for f in self.frames]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("frames must be strictly ordered by frame_index")

    def __len__(self) -> int:
        return len(self.frames)


def frame_is_valid(frame: PoseFrame, min_confidence: float) -> bool:
    """True iff all 14 keypoints are present with confidence >= min_confidence."""
    if not 0.0 <= min_confidence <= 1.0:
        raise ValueError("min_confidence must be in [0, 1]")
    return all(
        (kp := frame.keypoints.get(k)) is not None and kp.confidence >= min_confidence
        for k in KEYPOINT_ORDER
    )
