"""Parsing and filtering of keypoint JSONL files.

Interchange format (extension ``.kp.jsonl``): one JSON object per line,

    {"frame": <int>, "t_ms": <int, optional>,
     "kp": {"LeftEar": [x, y, conf], ..., "RightAnkle": [x, y, conf]}}

Keypoint names are the CamelCase forms of the 14 joint identifiers; unknown
names are ignored so richer estimator exports can be fed through a simple
field rename.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import DuplicateFrame, EmptyInput, MalformedLine, TooFewValidFrames
from .pose import Keypoint, KeypointId, PoseFrame, PoseSequence, frame_is_valid

DEFAULT_MIN_CONFIDENCE = 0.05
DEFAULT_MIN_VALID_FRAMES = 10


@dataclass(frozen=True)
class IngestReport:
    total_frames: int
    valid_frames: int
    dropped_frames: int
    source_id: str = ""


def _parse_keypoint_entry(name, value, line_no):
    kid = KeypointId.from_json_name(name)
    if kid is None:
        return None  # unknown names are ignored
    if not (isinstance(value, (list, tuple)) and len(value) == 3):
        raise MalformedLine(line_no, f"keypoint {name!r} is not a [x, y, conf] triple")
    x, y, conf = value
    try:
        kp = Keypoint(float(x), float(y), float(conf))
    except (TypeError, ValueError) as exc:
        raise MalformedLine(line_no, f"keypoint {name!r}: {exc}") from None
    return kid, kp


def parse_keypoint_file(data: Union[bytes, str], source_id: str = "") -> PoseSequence:
    """Parse JSONL keypoint data into a PoseSequence (frames sorted by index)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    frames: dict[int, PoseFrame] = {}
    for line_no, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(line_no, str(exc)) from None
        if not isinstance(obj, dict) or "frame" not in obj:
            raise MalformedLine(line_no, "missing 'frame' field")
        idx = obj["frame"]
        if not isinstance(idx, int) or idx < 0:
            raise MalformedLine(line_no, f"bad frame index {idx!r}")
        if idx in frames:
            raise DuplicateFrame(idx)
        t_ms = obj.get("t_ms")
        if t_ms is not None and (not isinstance(t_ms, (int, float)) or not math.isfinite(t_ms)):
            raise MalformedLine(line_no, f"bad t_ms {t_ms!r}")
        kp_obj = obj.get("kp", {})
        if not isinstance(kp_obj, dict):
            raise MalformedLine(line_no, "'kp' must be an object")
        keypoints = {}
        for name, value in kp_obj.items():
            entry = _parse_keypoint_entry(name, value, line_no)
            if entry is not None:
                keypoints[entry[0]] = entry[1]
        frames[idx] = PoseFrame(
            keypoints=keypoints,
            frame_index=idx,
            timestamp_ms=int(t_ms) if t_ms is not None else None,
        )
    if not frames:
        raise EmptyInput(source_id)
    ordered = tuple(frames[i] for i in sorted(frames))
    return PoseSequence(frames=ordered, source_id=source_id)


def load_keypoint_file(path) -> PoseSequence:
    path = Path(path)
    return parse_keypoint_file(path.read_bytes(), source_id=path.stem.removesuffix(".kp"))


def serialize_sequence(seq: PoseSequence) -> str:
    """Inverse of parse_keypoint_file over the JSONL format."""
    lines = []
    for frame in seq.frames:
        obj: dict = {"frame": frame.frame_index}
        if frame.timestamp_ms is not None:
            obj["t_ms"] = frame.timestamp_ms
        obj["kp"] = {
            k.json_name: [kp.x, kp.y, kp.confidence]
            for k, kp in sorted(frame.keypoints.items())
        }
        lines.append(json.dumps(obj))
    return "\n".join(lines) + "\n"


def save_keypoint_file(seq: PoseSequence, path) -> None:
    Path(path).write_text(serialize_sequence(seq), encoding="utf-8")


def filter_valid(
    seq: PoseSequence,
    min_confidence: float = DEFAULT_MIN_CONFIDENCE,
    min_valid_frames: int = DEFAULT_MIN_VALID_FRAMES,
) -> tuple[PoseSequence, IngestReport]:
    """Drop frames with missing/low-confidence joints, keeping original order."""
    if min_valid_frames < 1:
        raise ValueError("min_valid_frames must be >= 1")
    kept = tuple(f for f in seq.frames if frame_is_valid(f, min_confidence))
    report = IngestReport(
        total_frames=len(seq.frames),
        valid_frames=len(kept),
        dropped_frames=len(seq.frames) - len(kept),
        source_id=seq.source_id,
    )
    if len(kept) < min_valid_frames:
        raise TooFewValidFrames(len(kept), min_valid_frames)
    return PoseSequence(frames=kept, source_id=seq.source_id), report
