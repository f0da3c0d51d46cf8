import math

import numpy as np
import pytest

from gaitlab.errors import DegenerateLine, DegeneratePose
from gaitlab.frame_features import (
    FEATURE_NAMES,
    body_straightness,
    central_distances,
    extract_frame_features,
    extract_sequence,
    hand_leg_coordination,
    limb_straightness,
    mutual_distances,
    point_line_distance,
    upper_body_straightness,
    write_frame_features_csv,
)
from gaitlab.pose import KeypointId, PoseSequence
from gaitlab.synth import default_params, generate
from gaitlab.pose import GaitLabel

from helpers import (
    BS,
    CD,
    HL,
    LS,
    MD,
    US,
    bs_direct_oracle,
    frame_from_coords,
    random_frame,
    slope_distance_oracle,
    us_direct_oracle,
)

K = KeypointId


# --- point-line distance ------------------------------------------------------


def test_point_line_distance_horizontal():
    assert point_line_distance((1, 1), (0, 0), (2, 0)) == pytest.approx(1.0)


def test_point_line_distance_on_segment():
    assert point_line_distance((1, 0), (0, 0), (2, 0)) == 0.0


def test_point_line_distance_vertical_line():
    # slope-intercept form is undefined here; the cross-product form is not
    assert point_line_distance((5, 3), (2, 0), (2, 10)) == pytest.approx(3.0)


def test_point_line_distance_degenerate():
    with pytest.raises(DegenerateLine):
        point_line_distance((1, 1), (3, 3), (3, 3))


def test_point_line_distance_matches_slope_oracle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        a, b, p = rng.uniform(0, 320, (3, 2))
        if abs(a[0] - b[0]) < 0.05:
            continue  # slope form undefined/ill-conditioned
        expected = slope_distance_oracle(p, a, b)
        assert point_line_distance(p, a, b) == pytest.approx(expected, rel=1e-6, abs=1e-9)


# --- limb straightness ----------------------------------------------------------


def coords_with(overrides):
    """Generic pose with selected joints overridden; all joints distinct."""
    base = np.column_stack([np.linspace(0, 130, 14), np.linspace(0, 260, 14) % 97])
    xy = base.copy()
    for k, point in overrides.items():
        xy[k - 1] = point
    return xy


def test_limb_straightness_straight_arm():
    xy = coords_with({K.LEFT_SHOULDER: (0, 0), K.LEFT_ELBOW: (1, 0), K.LEFT_WRIST: (2, 0)})
    assert limb_straightness(frame_from_coords(xy))[0] == pytest.approx(0.0, abs=1e-12)


def test_limb_straightness_bent_arm():
    xy = coords_with({K.LEFT_SHOULDER: (0, 0), K.LEFT_ELBOW: (1, 1), K.LEFT_WRIST: (2, 0)})
    expected = slope_distance_oracle((1, 1), (0, 0), (2, 0))
    assert limb_straightness(frame_from_coords(xy))[0] == pytest.approx(expected)
    assert expected == pytest.approx(1.0)


def test_limb_straightness_degenerate_names_limb():
    xy = coords_with({K.LEFT_SHOULDER: (3, 3), K.LEFT_WRIST: (3, 3)})
    with pytest.raises(DegenerateLine) as exc:
        limb_straightness(frame_from_coords(xy))
    assert exc.value.what == "left-hand"


def test_limb_straightness_order():
    # bend only the right leg; all other limbs straight
    xy = coords_with({
        K.LEFT_SHOULDER: (0, 0), K.LEFT_ELBOW: (0, 10), K.LEFT_WRIST: (0, 20),
        K.RIGHT_SHOULDER: (30, 0), K.RIGHT_ELBOW: (30, 10), K.RIGHT_WRIST: (30, 20),
        K.LEFT_HIP: (0, 50), K.LEFT_KNEE: (0, 60), K.LEFT_ANKLE: (0, 70),
        K.RIGHT_HIP: (30, 50), K.RIGHT_KNEE: (35, 60), K.RIGHT_ANKLE: (30, 70),
    })
    values = limb_straightness(frame_from_coords(xy))
    assert values[:3] == pytest.approx([0, 0, 0], abs=1e-12)
    assert values[3] == pytest.approx(5.0)


# --- hand-leg coordination ------------------------------------------------------


def pair_frame(hand_dir, leg_dir):
    """Left hand with direction hand_dir, right leg with direction leg_dir."""
    xy = coords_with({
        K.LEFT_SHOULDER: (0, 0),
        K.LEFT_WRIST: hand_dir,
        K.RIGHT_HIP: (100, 100),
        K.RIGHT_ANKLE: (100 + leg_dir[0], 100 + leg_dir[1]),
    })
    return frame_from_coords(xy)


def test_hand_leg_parallel():
    angles = hand_leg_coordination(pair_frame((0, 2), (0, 5)))
    assert angles[0] == pytest.approx(0.0, abs=1e-12)


def test_hand_leg_perpendicular():
    angles = hand_leg_coordination(pair_frame((1, 0), (0, 1)))
    assert angles[0] == pytest.approx(math.pi / 2)


def test_hand_leg_forty_five():
    angles = hand_leg_coordination(pair_frame((1, 1), (1, 0)))
    assert angles[0] == pytest.approx(math.pi / 4)


def test_hand_leg_degenerate():
    xy = coords_with({K.RIGHT_HIP: (9, 9), K.RIGHT_ANKLE: (9, 9)})
    with pytest.raises(DegenerateLine) as exc:
        hand_leg_coordination(frame_from_coords(xy))
    assert exc.value.what == "right-leg"


def test_hand_leg_endpoint_swap_symmetry():
    rng = np.random.default_rng(4)
    for _ in range(50):
        frame = random_frame(rng)
        base = hand_leg_coordination(frame)
        xy = np.array([[frame.keypoints[k].x, frame.keypoints[k].y] for k in K])
        # swap shoulder/wrist of the left hand: direction negates
        swapped = xy.copy()
        swapped[K.LEFT_SHOULDER - 1], swapped[K.LEFT_WRIST - 1] = (
            xy[K.LEFT_WRIST - 1].copy(), xy[K.LEFT_SHOULDER - 1].copy())
        assert hand_leg_coordination(frame_from_coords(swapped)) == pytest.approx(base)
        assert 0.0 <= base[0] <= math.pi / 2 + 1e-12


# --- upper-body / body straightness ----------------------------------------------


def test_upper_body_collinear():
    xy = coords_with({
        K.LEFT_EAR: (0, 0), K.RIGHT_EAR: (0, 0),
        K.LEFT_SHOULDER: (0, 5), K.RIGHT_SHOULDER: (0, 5),
        K.LEFT_HIP: (0, 10), K.RIGHT_HIP: (0, 10),
    })
    assert upper_body_straightness(frame_from_coords(xy)) == pytest.approx(0.0, abs=1e-12)


def test_upper_body_displaced():
    xy = coords_with({
        K.LEFT_EAR: (-1, 0), K.RIGHT_EAR: (1, 0),
        K.LEFT_SHOULDER: (1, 5), K.RIGHT_SHOULDER: (3, 5),
        K.LEFT_HIP: (-1, 10), K.RIGHT_HIP: (1, 10),
    })
    # midpoints (0,0), (2,5), (0,10): shoulder is 2 off the vertical axis
    assert upper_body_straightness(frame_from_coords(xy)) == pytest.approx(2.0)


def test_upper_body_degenerate():
    xy = coords_with({
        K.LEFT_EAR: (5, 5), K.RIGHT_EAR: (5, 5),
        K.LEFT_SHOULDER: (5, 5), K.RIGHT_SHOULDER: (5, 5),
        K.LEFT_HIP: (5, 5), K.RIGHT_HIP: (5, 5),
    })
    with pytest.raises(DegenerateLine) as exc:
        upper_body_straightness(frame_from_coords(xy))
    assert exc.value.what == "upper-body axis"


def test_body_straightness_cases():
    collinear = coords_with({
        K.LEFT_SHOULDER: (0, 0), K.RIGHT_SHOULDER: (0, 0),
        K.LEFT_HIP: (0, 6), K.RIGHT_HIP: (0, 6),
        K.LEFT_ANKLE: (0, 12), K.RIGHT_ANKLE: (0, 12),
    })
    assert body_straightness(frame_from_coords(collinear)) == pytest.approx(0.0, abs=1e-12)
    displaced = coords_with({
        K.LEFT_SHOULDER: (0, 0), K.RIGHT_SHOULDER: (0, 0),
        K.LEFT_HIP: (3, 6), K.RIGHT_HIP: (3, 6),
        K.LEFT_ANKLE: (0, 12), K.RIGHT_ANKLE: (0, 12),
    })
    assert body_straightness(frame_from_coords(displaced)) == pytest.approx(3.0)
    degenerate = coords_with({
        K.LEFT_SHOULDER: (1, 1), K.RIGHT_SHOULDER: (1, 1),
        K.LEFT_ANKLE: (1, 1), K.RIGHT_ANKLE: (1, 1),
    })
    with pytest.raises(DegenerateLine):
        body_straightness(frame_from_coords(degenerate))


def test_us_bs_match_direct_formula():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 100:
        frame = random_frame(rng)
        xy = np.array([[frame.keypoints[k].x, frame.keypoints[k].y] for k in K])
        if abs(xy[0, 0] + xy[1, 0] - xy[8, 0] - xy[9, 0]) < 0.05:
            continue
        if abs(xy[2, 0] + xy[3, 0] - xy[12, 0] - xy[13, 0]) < 0.05:
            continue
        assert upper_body_straightness(frame) == pytest.approx(
            us_direct_oracle(xy), rel=1e-6, abs=1e-9)
        assert body_straightness(frame) == pytest.approx(
            bs_direct_oracle(xy), rel=1e-6, abs=1e-9)
        checked += 1


# --- central / mutual distances ---------------------------------------------------


def test_central_distances_circle():
    angles = np.linspace(0, 2 * math.pi, 14, endpoint=False)
    xy = 50 + 7.5 * np.column_stack([np.cos(angles), np.sin(angles)])
    cd = central_distances(frame_from_coords(xy))
    assert cd == pytest.approx(np.ones(14))


def test_central_distances_constructed():
    # 5 cancelling unit pairs + three unit vectors summing to (2,0) + (-2,0):
    # centroid is the origin, 13 points at distance 1 and one at distance 2
    pts = []
    for theta in np.linspace(0.3, 1.5, 5):
        u = np.array([math.cos(theta), math.sin(theta)])
        pts += [u, -u]
    s = math.sqrt(3) / 2
    pts += [np.array([1.0, 0.0]), np.array([0.5, s]), np.array([0.5, -s])]
    pts.append(np.array([-2.0, 0.0]))
    xy = np.stack(pts)
    assert np.allclose(xy.mean(axis=0), 0.0)
    cd = central_distances(frame_from_coords(xy))
    expected = np.full(14, 0.5)
    expected[13] = 1.0  # the distance-2 point, normalized by the max
    assert cd == pytest.approx(expected)


def test_central_distances_degenerate():
    with pytest.raises(DegeneratePose):
        central_distances(frame_from_coords(np.full((14, 2), 3.0)))


def test_mutual_distances_count_and_order():
    rng = np.random.default_rng(6)
    frame = random_frame(rng)
    md = mutual_distances(frame)
    assert md.shape == (91,)
    # brute-force all-pairs oracle in lexicographic order
    xy = [(frame.keypoints[k].x, frame.keypoints[k].y) for k in K]
    raw = [math.dist(xy[i], xy[j]) for i in range(14) for j in range(i + 1, 14)]
    expected = np.array(raw) / max(raw)
    assert md == pytest.approx(expected)


def test_mutual_distances_two_clusters():
    xy = np.array([(0.0, 0.0)] * 7 + [(3.0, 4.0)] * 7)
    md = mutual_distances(frame_from_coords(xy))
    assert set(np.round(md, 12)) == {0.0, 1.0}
    # 7*7 cross-cluster pairs at the max distance
    assert int((md == 1.0).sum()) == 49


def test_mutual_distances_degenerate():
    with pytest.raises(DegeneratePose):
        mutual_distances(frame_from_coords(np.zeros((14, 2))))


def test_mutual_distances_synthetic_pose_vs_oracle():
    frame = generate(default_params(GaitLabel.NORMAL, seed=9), "t").frames[0]
    md = mutual_distances(frame)
    xy = [(frame.keypoints[k].x, frame.keypoints[k].y) for k in K]
    raw = [math.dist(xy[i], xy[j]) for i in range(14) for j in range(i + 1, 14)]
    assert md == pytest.approx(np.array(raw) / max(raw))


# --- assembly and invariances ------------------------------------------------------


def test_feature_vector_dimension():
    rng = np.random.default_rng(7)
    ff = extract_frame_features(random_frame(rng))
    assert ff.vector().shape == (113,)
    assert len(FEATURE_NAMES) == 113


def test_upright_pose_is_straight():
    frame = generate(default_params(GaitLabel.NORMAL, seed=0), "u").frames[0]
    ff = extract_frame_features(frame)
    assert ff.limb_straightness == pytest.approx(np.zeros(4), abs=1e-9)
    assert ff.upper_body_straightness == pytest.approx(0.0, abs=1e-9)
    assert ff.body_straightness == pytest.approx(0.0, abs=1e-9)


def test_degenerate_error_carries_frame_index():
    frame = frame_from_coords(np.zeros((14, 2)), frame_index=17)
    with pytest.raises((DegenerateLine, DegeneratePose)) as exc:
        extract_frame_features(frame)
    assert exc.value.frame_index == 17


def _frame_coords(frame):
    return np.array([[frame.keypoints[k].x, frame.keypoints[k].y] for k in K])


def test_translation_invariance():
    rng = np.random.default_rng(8)
    for _ in range(50):
        frame = random_frame(rng)
        shift = rng.uniform(-500, 500, 2)
        moved = frame_from_coords(_frame_coords(frame) + shift)
        base = extract_frame_features(frame).vector()
        assert extract_frame_features(moved).vector() == pytest.approx(base, abs=1e-9)


def test_rotation_invariance():
    rng = np.random.default_rng(9)
    for _ in range(50):
        frame = random_frame(rng)
        theta = rng.uniform(0, 2 * math.pi)
        rot = np.array([[math.cos(theta), -math.sin(theta)],
                        [math.sin(theta), math.cos(theta)]])
        rotated = frame_from_coords(_frame_coords(frame) @ rot.T)
        base = extract_frame_features(frame).vector()
        got = extract_frame_features(rotated).vector()
        assert got == pytest.approx(base, rel=1e-6, abs=1e-9)


def test_scale_behavior():
    rng = np.random.default_rng(10)
    for _ in range(50):
        frame = random_frame(rng)
        s = float(rng.uniform(0.1, 10))
        scaled = frame_from_coords(_frame_coords(frame) * s)
        base = extract_frame_features(frame).vector()
        got = extract_frame_features(scaled).vector()
        # normalized distances and angles are scale-invariant
        assert got[HL] == pytest.approx(base[HL], rel=1e-6)
        assert got[CD] == pytest.approx(base[CD], rel=1e-6)
        assert got[MD] == pytest.approx(base[MD], rel=1e-6)
        # straightness distances scale linearly
        assert got[LS] == pytest.approx(s * base[LS], rel=1e-6, abs=1e-9)
        assert got[US] == pytest.approx(s * base[US], rel=1e-6, abs=1e-9)
        assert got[BS] == pytest.approx(s * base[BS], rel=1e-6, abs=1e-9)


def test_normalized_blocks_in_range_with_unit_max():
    rng = np.random.default_rng(11)
    for _ in range(50):
        vec = extract_frame_features(random_frame(rng)).vector()
        for block in (vec[CD], vec[MD]):
            assert block.min() >= 0.0
            assert block.max() == pytest.approx(1.0, abs=1e-12)


def test_extract_sequence_video_scope():
    seq = generate(default_params(GaitLabel.NORMAL, seed=2), "v")
    per_video, failed = extract_sequence(seq, norm_scope="video")
    assert failed == 0
    cd_all = np.stack([ff.central_distances for ff in per_video])
    md_all = np.stack([ff.mutual_distances for ff in per_video])
    # one shared max per block across the whole video
    assert cd_all.max() == pytest.approx(1.0, abs=1e-12)
    assert md_all.max() == pytest.approx(1.0, abs=1e-12)
    assert (cd_all <= 1.0 + 1e-12).all() and (md_all <= 1.0 + 1e-12).all()
    # frame scope normalizes every frame to its own max
    per_frame, _ = extract_sequence(seq, norm_scope="frame")
    for ff in per_frame:
        assert ff.central_distances.max() == pytest.approx(1.0, abs=1e-12)


def test_extract_sequence_skips_degenerate_frames():
    good = generate(default_params(GaitLabel.NORMAL, seed=3), "g").frames[0]
    bad = frame_from_coords(np.zeros((14, 2)), frame_index=1)
    seq = PoseSequence(frames=(good, bad), source_id="mix")
    feats, failed = extract_sequence(seq)
    assert len(feats) == 1 and failed == 1
    with pytest.raises((DegenerateLine, DegeneratePose)):
        extract_sequence(seq, skip_degenerate=False)


def test_frame_features_csv_header(tmp_path):
    rng = np.random.default_rng(12)
    feats = [extract_frame_features(random_frame(rng, frame_index=i)) for i in range(3)]
    path = tmp_path / "frames.csv"
    write_frame_features_csv(feats, path)
    header = path.read_text().splitlines()[0]
    assert header.startswith("frame,ls1,ls2,ls3,ls4,hl1,hl2,us,bs,cd1")
    assert header.endswith("md90,md91")
    assert len(header.split(",")) == 114
