"""Video-level aggregation: per-dimension mean and std of frame features.

The video vector is [113 means, 113 stds] = 226 values. Standard deviation
is population (1/N) by default; sample (1/(N-1)) is available behind the
``std_mode`` flag and is recorded in the schema fingerprint.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import TooFewFrames
from .frame_features import FEATURE_NAMES, FrameFeatures, extract_sequence
from .pose import GaitLabel, PoseSequence

N_VIDEO_FEATURES = 226

STD_MODES = ("population", "sample")
NORM_SCOPES = ("frame", "video")


def schema_fingerprint(norm_scope: str = "frame", std_mode: str = "population") -> str:
    """Stable hash of the feature ordering plus normalization config."""
    if norm_scope not in NORM_SCOPES:
        raise ValueError(f"bad norm_scope {norm_scope!r}")
    if std_mode not in STD_MODES:
        raise ValueError(f"bad std_mode {std_mode!r}")
    payload = json.dumps(
        {"features": list(FEATURE_NAMES), "norm_scope": norm_scope, "std": std_mode},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class VideoFeatures:
    """226-dim mean||std aggregate of one video plus provenance."""

    mean: np.ndarray  # (113,)
    std: np.ndarray  # (113,)
    n_frames_used: int
    source_id: str
    schema_fingerprint: str

    def vector(self) -> np.ndarray:
        return np.concatenate([self.mean, self.std])


def aggregate(
    features: list[FrameFeatures],
    source_id: str = "",
    norm_scope: str = "frame",
    std_mode: str = "population",
) -> VideoFeatures:
    """Mean and std across frames; order is [all means, then all stds]."""
    if len(features) < 2:
        raise TooFewFrames(len(features))
    matrix = np.stack([ff.vector() for ff in features])
    ddof = 0 if std_mode == "population" else 1
    return VideoFeatures(
        mean=matrix.mean(axis=0),
        std=matrix.std(axis=0, ddof=ddof),
        n_frames_used=len(features),
        source_id=source_id,
        schema_fingerprint=schema_fingerprint(norm_scope, std_mode),
    )


def featurize_sequence(
    seq: PoseSequence,
    norm_scope: str = "frame",
    std_mode: str = "population",
) -> VideoFeatures:
    """Extract + aggregate in one step, skipping geometrically degenerate frames."""
    feats, _ = extract_sequence(seq, norm_scope=norm_scope, skip_degenerate=True)
    return aggregate(feats, source_id=seq.source_id, norm_scope=norm_scope, std_mode=std_mode)


# --- CSV interface: source_id,label,mu1..mu113,sd1..sd113 -------------------

_CSV_HEADER = (
    ["source_id", "label"]
    + [f"mu{i}" for i in range(1, 114)]
    + [f"sd{i}" for i in range(1, 114)]
)


def write_features_csv(rows: list[tuple[VideoFeatures, Optional[GaitLabel]]], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_HEADER)
        for vf, label in rows:
            writer.writerow(
                [vf.source_id, label.value if label is not None else ""]
                + [repr(float(v)) for v in vf.mean]
                + [repr(float(v)) for v in vf.std]
            )


def read_features_csv(
    path,
    norm_scope: str = "frame",
    std_mode: str = "population",
) -> list[tuple[VideoFeatures, Optional[GaitLabel]]]:
    """Read a feature CSV; the fingerprint is derived from the stated config."""
    fingerprint = schema_fingerprint(norm_scope, std_mode)
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _CSV_HEADER:
            raise ValueError(f"unexpected feature CSV header in {path}")
        for row in reader:
            if len(row) != len(_CSV_HEADER):
                raise ValueError(f"bad feature CSV row length in {path}")
            label = GaitLabel.from_name(row[1]) if row[1] else None
            values = np.array([float(v) for v in row[2:]])
            rows.append(
                (
                    VideoFeatures(
                        mean=values[:113],
                        std=values[113:],
                        n_frames_used=0,  # unknown after CSV round-trip
                        source_id=row[0],
                        schema_fingerprint=fingerprint,
                    ),
                    label,
                )
            )
    return rows
