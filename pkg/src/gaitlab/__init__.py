"""gaitlab: pose-keypoint gait features and gait-abnormality classifiers."""

from .pose import (
    GaitLabel,
    Keypoint,
    KeypointId,
    PoseFrame,
    PoseSequence,
    frame_is_valid,
)
from .ingest import (
    IngestReport,
    filter_valid,
    load_keypoint_file,
    parse_keypoint_file,
    save_keypoint_file,
    serialize_sequence,
)
from .frame_features import (
    FEATURE_NAMES,
    FrameFeatures,
    extract_frame_features,
    extract_sequence,
    point_line_distance,
)
from .video_features import (
    VideoFeatures,
    aggregate,
    featurize_sequence,
    read_features_csv,
    schema_fingerprint,
    write_features_csv,
)
from .synth import GaitParams, default_params, generate, generate_corpus, write_corpus
from .classify import (
    ALGORITHMS,
    TrainedModel,
    knn_brute_force_oracle,
    load_model,
    predict,
    save_model,
    train,
)
from .evaluate import (
    EvalReport,
    LabeledDataset,
    best_report,
    cross_validate,
    run_task,
    stratified_split,
)

__version__ = "0.1.0"
