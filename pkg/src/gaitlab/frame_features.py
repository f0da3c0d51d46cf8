"""Frame-level gait features from a complete 14-keypoint pose.

Six feature families, 113 values per frame, in a frozen order:

    limb straightness (4) | hand-leg coordination (2) | upper-body
    straightness (1) | body straightness (1) | central distances (14) |
    mutual distances (91)

Straightness values are perpendicular point-to-line distances in pixels.
Coordination values are angles between undirected limb lines, folded to
[0, pi/2]. Central/mutual distances are normalized by the maximum distance
in their block (per frame by default, per video optionally).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLine, DegeneratePose
from .pose import KEYPOINT_ORDER, KeypointId, PoseFrame, PoseSequence

EPS = 1e-9  # pixels; below this two defining points are considered coincident

K = KeypointId

# (name, center joint, end joints) per limb, in feature order
_LIMBS = (
    ("left-hand", K.LEFT_ELBOW, K.LEFT_SHOULDER, K.LEFT_WRIST),
    ("right-hand", K.RIGHT_ELBOW, K.RIGHT_SHOULDER, K.RIGHT_WRIST),
    ("left-leg", K.LEFT_KNEE, K.LEFT_HIP, K.LEFT_ANKLE),
    ("right-leg", K.RIGHT_KNEE, K.RIGHT_HIP, K.RIGHT_ANKLE),
)

# hand (shoulder->wrist) paired with the opposite leg (hip->ankle)
_PAIRS = (
    ("left-hand", K.LEFT_SHOULDER, K.LEFT_WRIST, "right-leg", K.RIGHT_HIP, K.RIGHT_ANKLE),
    ("right-hand", K.RIGHT_SHOULDER, K.RIGHT_WRIST, "left-leg", K.LEFT_HIP, K.LEFT_ANKLE),
)

_PAIR_I, _PAIR_J = np.triu_indices(14, k=1)  # lexicographic (i, j), i < j

FEATURE_NAMES: tuple[str, ...] = (
    tuple(f"ls{i}" for i in range(1, 5))
    + ("hl1", "hl2", "us", "bs")
    + tuple(f"cd{i}" for i in range(1, 15))
    + tuple(f"md{i}" for i in range(1, 92))
)

N_FRAME_FEATURES = 113


@dataclass(frozen=True)
class FrameFeatures:
    """The 113-dim feature vector of one frame, sectioned by family."""

    limb_straightness: np.ndarray  # (4,)
    hand_leg_coordination: np.ndarray  # (2,)
    upper_body_straightness: float
    body_straightness: float
    central_distances: np.ndarray  # (14,)
    mutual_distances: np.ndarray  # (91,)
    frame_index: int = 0

    def vector(self) -> np.ndarray:
        return np.concatenate(
            [
                self.limb_straightness,
                self.hand_leg_coordination,
                [self.upper_body_straightness, self.body_straightness],
                self.central_distances,
                self.mutual_distances,
            ]
        )


def point_line_distance(p, a, b) -> float:
    """Euclidean distance from point p to the infinite line through a and b.

    Cross-product form |(b-a) x (p-a)| / ||b-a||: agrees with the
    slope-intercept distance formula wherever the slope is defined and also
    handles vertical lines.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    px, py = float(p[0]), float(p[1])
    dx, dy = bx - ax, by - ay
    norm = math.hypot(dx, dy)
    if norm < EPS:
        raise DegenerateLine("line endpoints")
    return abs(dx * (py - ay) - dy * (px - ax)) / norm


def _coords(frame: PoseFrame) -> np.ndarray:
    """(14, 2) array of keypoint coordinates in index order; frame must be complete."""
    try:
        return np.array(
            [(frame.keypoints[k].x, frame.keypoints[k].y) for k in KEYPOINT_ORDER],
            dtype=float,
        )
    except KeyError as exc:
        raise ValueError(f"frame {frame.frame_index} is missing keypoint {exc}") from None


def limb_straightness(frame: PoseFrame) -> np.ndarray:
    """Displacement of each limb's middle joint from its end-to-end line.

    Order: left hand, right hand, left leg, right leg.
    """
    xy = _coords(frame)
    out = np.empty(4)
    for i, (name, mid, end_a, end_b) in enumerate(_LIMBS):
        try:
            out[i] = point_line_distance(xy[mid - 1], xy[end_a - 1], xy[end_b - 1])
        except DegenerateLine:
            raise DegenerateLine(name) from None
    return out


def _line_angle(u, v, name_u, name_v) -> float:
    """Angle in [0, pi/2] between undirected lines with direction vectors u, v."""
    nu = math.hypot(u[0], u[1])
    nv = math.hypot(v[0], v[1])
    if nu < EPS:
        raise DegenerateLine(name_u)
    if nv < EPS:
        raise DegenerateLine(name_v)
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    angle = math.atan2(abs(cross), dot)  # in [0, pi]
    return min(angle, math.pi - angle)  # fold: lines have no direction


def hand_leg_coordination(frame: PoseFrame) -> np.ndarray:
    """Angle between each hand line and the opposite leg line.

    Order: (left hand, right leg), (right hand, left leg).
    """
    xy = _coords(frame)
    out = np.empty(2)
    for i, (hand, s, w, leg, h, a) in enumerate(_PAIRS):
        u = xy[w - 1] - xy[s - 1]
        v = xy[a - 1] - xy[h - 1]
        out[i] = _line_angle(u, v, hand, leg)
    return out


def _midpoint(xy: np.ndarray, left: KeypointId, right: KeypointId) -> np.ndarray:
    return (xy[left - 1] + xy[right - 1]) / 2.0


def upper_body_straightness(frame: PoseFrame) -> float:
    """Displacement of the effective shoulder from the effective ear-hip line."""
    xy = _coords(frame)
    ear = _midpoint(xy, K.LEFT_EAR, K.RIGHT_EAR)
    shoulder = _midpoint(xy, K.LEFT_SHOULDER, K.RIGHT_SHOULDER)
    hip = _midpoint(xy, K.LEFT_HIP, K.RIGHT_HIP)
    try:
        return point_line_distance(shoulder, ear, hip)
    except DegenerateLine:
        raise DegenerateLine("upper-body axis") from None


def body_straightness(frame: PoseFrame) -> float:
    """Displacement of the effective hip from the effective shoulder-ankle line."""
    xy = _coords(frame)
    shoulder = _midpoint(xy, K.LEFT_SHOULDER, K.RIGHT_SHOULDER)
    hip = _midpoint(xy, K.LEFT_HIP, K.RIGHT_HIP)
    ankle = _midpoint(xy, K.LEFT_ANKLE, K.RIGHT_ANKLE)
    try:
        return point_line_distance(hip, shoulder, ankle)
    except DegenerateLine:
        raise DegenerateLine("body axis") from None


def raw_central_distances(frame: PoseFrame) -> np.ndarray:
    """Unnormalized distances from each keypoint to the 14-point centroid."""
    xy = _coords(frame)
    centroid = xy.mean(axis=0)
    return np.linalg.norm(xy - centroid, axis=1)


def central_distances(frame: PoseFrame) -> np.ndarray:
    """Centroid distances normalized by the frame maximum; in [0, 1], max = 1."""
    d = raw_central_distances(frame)
    m = d.max()
    if m < EPS:
        raise DegeneratePose(frame.frame_index)
    return d / m


def raw_mutual_distances(frame: PoseFrame) -> np.ndarray:
    """Unnormalized pairwise keypoint distances, lexicographic (i, j) with i < j."""
    xy = _coords(frame)
    return np.linalg.norm(xy[_PAIR_I] - xy[_PAIR_J], axis=1)


def mutual_distances(frame: PoseFrame) -> np.ndarray:
    """Pairwise distances normalized by the frame maximum; 91 values in [0, 1]."""
    d = raw_mutual_distances(frame)
    m = d.max()
    if m < EPS:
        raise DegeneratePose(frame.frame_index)
    return d / m


def extract_frame_features(frame: PoseFrame) -> FrameFeatures:
    """Assemble all six families into the 113-dim per-frame vector."""
    try:
        return FrameFeatures(
            limb_straightness=limb_straightness(frame),
            hand_leg_coordination=hand_leg_coordination(frame),
            upper_body_straightness=upper_body_straightness(frame),
            body_straightness=body_straightness(frame),
            central_distances=central_distances(frame),
            mutual_distances=mutual_distances(frame),
            frame_index=frame.frame_index,
        )
    except DegenerateLine as exc:
        raise DegenerateLine(exc.what, frame_index=frame.frame_index) from None
    except DegeneratePose:
        raise DegeneratePose(frame_index=frame.frame_index) from None


def extract_sequence(
    seq: PoseSequence,
    norm_scope: str = "frame",
    skip_degenerate: bool = True,
) -> tuple[list[FrameFeatures], int]:
    """Per-frame features for a whole sequence.

    norm_scope "frame" divides each frame's central/mutual distances by that
    frame's maximum; "video" divides by the maximum over all frames of the
    sequence (one max per block). Returns (features, n_failed) where failed
    frames hit a geometric degeneracy; with skip_degenerate=False the first
    degeneracy raises instead.
    """
    if norm_scope not in ("frame", "video"):
        raise ValueError(f"norm_scope must be 'frame' or 'video', got {norm_scope!r}")

    n_failed = 0
    if norm_scope == "frame":
        feats = []
        for frame in seq.frames:
            try:
                feats.append(extract_frame_features(frame))
            except (DegenerateLine, DegeneratePose):
                if not skip_degenerate:
                    raise
                n_failed += 1
        return feats, n_failed

    # video scope: collect raw distance blocks first, then normalize jointly
    rows = []
    for frame in seq.frames:
        try:
            rows.append(
                (
                    frame.frame_index,
                    limb_straightness(frame),
                    hand_leg_coordination(frame),
                    upper_body_straightness(frame),
                    body_straightness(frame),
                    raw_central_distances(frame),
                    raw_mutual_distances(frame),
                )
            )
        except (DegenerateLine, DegeneratePose) as exc:
            if not skip_degenerate:
                if isinstance(exc, DegenerateLine):
                    raise DegenerateLine(exc.what, frame_index=frame.frame_index) from None
                raise DegeneratePose(frame_index=frame.frame_index) from None
            n_failed += 1
    if not rows:
        return [], n_failed
    cd_max = max(r[5].max() for r in rows)
    md_max = max(r[6].max() for r in rows)
    if cd_max < EPS or md_max < EPS:
        raise DegeneratePose(rows[0][0])
    feats = [
        FrameFeatures(
            limb_straightness=ls,
            hand_leg_coordination=hl,
            upper_body_straightness=us,
            body_straightness=bs,
            central_distances=cd / cd_max,
            mutual_distances=md / md_max,
            frame_index=idx,
        )
        for idx, ls, hl, us, bs, cd, md in rows
    ]
    return feats, n_failed


def write_frame_features_csv(features: list[FrameFeatures], path) -> None:
    """Per-frame dump: header ``frame,ls1..ls4,hl1,hl2,us,bs,cd1..cd14,md1..md91``."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("frame",) + FEATURE_NAMES)
        for ff in features:
            writer.writerow([ff.frame_index] + [repr(float(v)) for v in ff.vector()])
