"""Shared builders and independent geometry oracles for the test suite."""

import math

import numpy as np

from gaitlab.pose import GaitLabel, Keypoint, KeypointId, PoseFrame
from gaitlab.video_features import VideoFeatures, schema_fingerprint

# vector layout of the 113-dim frame features
LS = slice(0, 4)
HL = slice(4, 6)
US = 6
BS = 7
CD = slice(8, 22)
MD = slice(22, 113)


def frame_from_coords(coords, frame_index=0, confidence=1.0):
    coords = np.asarray(coords, dtype=float)
    return PoseFrame(
        keypoints={
            k: Keypoint(float(coords[i, 0]), float(coords[i, 1]), confidence)
            for i, k in enumerate(KeypointId)
        },
        frame_index=frame_index,
    )


def random_frame(rng, lo=0.0, hi=320.0, frame_index=0):
    return frame_from_coords(rng.uniform(lo, hi, size=(14, 2)), frame_index=frame_index)


def vf_from_vector(vec, source_id="v", fingerprint=None):
    vec = np.asarray(vec, dtype=float)
    assert vec.shape == (226,)
    return VideoFeatures(
        mean=vec[:113],
        std=vec[113:],
        n_frames_used=2,
        source_id=source_id,
        schema_fingerprint=fingerprint or schema_fingerprint(),
    )


# --- slope-intercept oracles (independent of the cross-product code path) ----


def slope_distance_oracle(p, a, b):
    """Point-line distance via slope and y-intercept; undefined for vertical lines."""
    m = (a[1] - b[1]) / (a[0] - b[0])
    c = (b[1] * a[0] - b[0] * a[1]) / (a[0] - b[0])
    return abs(m * p[0] + c - p[1]) / math.sqrt(m * m + 1)


def us_direct_oracle(xy):
    """Upper-body straightness via the coordinate-sum slope formula."""
    rl, rr, sl, sr = xy[0], xy[1], xy[2], xy[3]
    hl, hr = xy[8], xy[9]
    den = rl[0] + rr[0] - hl[0] - hr[0]
    m = (rl[1] + rr[1] - hl[1] - hr[1]) / den
    c = ((rl[0] + rr[0]) * (hl[1] + hr[1]) - (hl[0] + hr[0]) * (rl[1] + rr[1])) / den
    return 0.5 * abs(m * (sl[0] + sr[0]) + c - (sl[1] + sr[1])) / math.sqrt(1 + m * m)


def bs_direct_oracle(xy):
    """Body straightness via the coordinate-sum slope formula."""
    sl, sr = xy[2], xy[3]
    hl, hr = xy[8], xy[9]
    al, ar = xy[12], xy[13]
    den = sl[0] + sr[0] - al[0] - ar[0]
    m = (sl[1] + sr[1] - al[1] - ar[1]) / den
    c = ((sl[0] + sr[0]) * (al[1] + ar[1]) - (al[0] + ar[0]) * (sl[1] + sr[1])) / den
    return 0.5 * abs(m * (hl[0] + hr[0]) + c - (hl[1] + hr[1])) / math.sqrt(1 + m * m)


def make_separable_items(rng, n_per_class=10, labels=(GaitLabel.NORMAL, GaitLabel.PARKINSON)):
    """Classes with disjoint feature ranges (centers 12 apart, noise 0.1)."""
    items = []
    for c, label in enumerate(labels):
        center = 12.0 * c
        for i in range(n_per_class):
            vec = center + rng.normal(0.0, 0.1, size=226)
            items.append((vf_from_vector(vec, f"{label.value}_{i}"), label))
    return items
