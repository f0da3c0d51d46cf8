"""Generate synthetic walking sequences and inspect their geometry.

Each gait class is a 2-D stick figure with a characteristic deviation:
Parkinson leans forward, Hemiplegia circumducts one leg, Diplegia both,
Choreiform adds per-joint jitter, Normal is a clean walk. This script
generates one sequence per class and prints a few raw keypoints plus the
straightness features that separate the classes.
"""

import numpy as np

from gaitlab import (
    GaitLabel,
    KeypointId,
    default_params,
    extract_sequence,
    generate,
)


def main():
    for label in GaitLabel:
        params = default_params(label, seed=0)
        seq = generate(params, source_id=f"demo_{label.value.lower()}")
        frame = seq.frames[0]
        ankle = frame.keypoints[KeypointId.LEFT_ANKLE]
        ear = frame.keypoints[KeypointId.LEFT_EAR]

        feats, n_failed = extract_sequence(seq)
        vectors = np.stack([ff.vector() for ff in feats])
        mean_ls = vectors[:, 0:4].mean()  # limb straightness block
        mean_us = vectors[:, 6].mean()    # upper-body straightness

        print(f"{label.value:11s} frames={len(seq.frames)} failed={n_failed}  "
              f"ear=({ear.x:7.1f},{ear.y:7.1f}) ankle=({ankle.x:7.1f},{ankle.y:7.1f})  "
              f"mean limb straightness={mean_ls:6.2f}px  "
              f"upper-body straightness={mean_us:6.2f}px")

    print()
    print("Normal limbs are collinear (straightness ~0); forward lean makes the")
    print("Parkinson upper body bend; jitter inflates every Choreiform value.")


if __name__ == "__main__":
    main()
