import numpy as np
import pytest

from gaitlab.errors import TooFewFrames
from gaitlab.frame_features import FrameFeatures, extract_frame_features
from gaitlab.pose import GaitLabel
from gaitlab.video_features import (
    aggregate,
    featurize_sequence,
    read_features_csv,
    schema_fingerprint,
    write_features_csv,
)
from gaitlab.synth import default_params, generate

from helpers import random_frame, vf_from_vector


def ff_constant(value, frame_index=0):
    return FrameFeatures(
        limb_straightness=np.full(4, value),
        hand_leg_coordination=np.full(2, value),
        upper_body_straightness=value,
        body_straightness=value,
        central_distances=np.full(14, value),
        mutual_distances=np.full(91, value),
        frame_index=frame_index,
    )


def test_identical_frames_zero_std():
    vf = aggregate([ff_constant(2.5, i) for i in range(4)], "v")
    assert vf.mean == pytest.approx(np.full(113, 2.5))
    assert vf.std == pytest.approx(np.zeros(113))
    assert vf.n_frames_used == 4


def test_two_frame_population_std():
    # values {1, 3} per dimension: mean 2, population std 1
    vf = aggregate([ff_constant(1.0, 0), ff_constant(3.0, 1)], "v")
    assert vf.mean == pytest.approx(np.full(113, 2.0))
    assert vf.std == pytest.approx(np.ones(113))


def test_sample_std_mode():
    vf = aggregate([ff_constant(1.0, 0), ff_constant(3.0, 1)], "v", std_mode="sample")
    assert vf.std == pytest.approx(np.full(113, np.sqrt(2.0)))
    assert vf.schema_fingerprint != schema_fingerprint()


def test_output_dimension_226():
    rng = np.random.default_rng(0)
    feats = [extract_frame_features(random_frame(rng, frame_index=i)) for i in range(5)]
    vf = aggregate(feats, "v")
    assert vf.vector().shape == (226,)


def test_mean_std_against_numpy_oracle():
    rng = np.random.default_rng(1)
    feats = [extract_frame_features(random_frame(rng, frame_index=i)) for i in range(7)]
    matrix = np.stack([ff.vector() for ff in feats])
    vf = aggregate(feats, "v")
    assert vf.vector() == pytest.approx(
        np.concatenate([matrix.mean(axis=0), matrix.std(axis=0)]))


def test_too_few_frames():
    with pytest.raises(TooFewFrames):
        aggregate([ff_constant(1.0)], "v")


def test_permutation_invariance():
    rng = np.random.default_rng(2)
    feats = [extract_frame_features(random_frame(rng, frame_index=i)) for i in range(6)]
    base = aggregate(feats, "v").vector()
    shuffled = [feats[i] for i in rng.permutation(6)]
    assert aggregate(shuffled, "v").vector() == pytest.approx(base)


def test_replication_invariance():
    rng = np.random.default_rng(3)
    feats = [extract_frame_features(random_frame(rng, frame_index=i)) for i in range(4)]
    base = aggregate(feats, "v").vector()
    for k in (2, 3):
        assert aggregate(feats * k, "v").vector() == pytest.approx(base)


def test_featurize_sequence():
    seq = generate(default_params(GaitLabel.NORMAL, seed=1), "clip")
    vf = featurize_sequence(seq)
    assert vf.source_id == "clip"
    assert vf.n_frames_used == len(seq)
    assert vf.vector().shape == (226,)


def test_fingerprint_depends_on_config():
    prints = {
        schema_fingerprint("frame", "population"),
        schema_fingerprint("frame", "sample"),
        schema_fingerprint("video", "population"),
        schema_fingerprint("video", "sample"),
    }
    assert len(prints) == 4


def test_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(4)
    rows = [
        (vf_from_vector(rng.uniform(-5, 5, 226), "a"), GaitLabel.NORMAL),
        (vf_from_vector(rng.uniform(-5, 5, 226), "b"), GaitLabel.PARKINSON),
        (vf_from_vector(rng.uniform(-5, 5, 226), "c"), None),
    ]
    path = tmp_path / "features.csv"
    write_features_csv(rows, path)
    back = read_features_csv(path)
    assert [vf.source_id for vf, _ in back] == ["a", "b", "c"]
    assert [label for _, label in back] == [GaitLabel.NORMAL, GaitLabel.PARKINSON, None]
    for (vf0, _), (vf1, _) in zip(rows, back):
        assert vf1.vector() == pytest.approx(vf0.vector(), abs=0)  # exact float round-trip
        assert vf1.schema_fingerprint == vf0.schema_fingerprint


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_features_csv(path)
