"""Evaluation protocol: 3:1 stratified split, stratified k-fold CV on the
training part, multi-class and per-abnormality binary tasks, accuracy and
confusion reporting.

The per-class split point is floor(3n/4) training items, which reproduces
the reference per-class train/test counts exactly (e.g. 51 -> 38/13,
31 -> 23/8). The "best" model of a task maximizes the sum of CV and test
accuracy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import classify
from .errors import ClassTooSmall, TooManyFolds
from .pose import GaitLabel
from .video_features import VideoFeatures

DEFAULT_FOLDS = 5


@dataclass(frozen=True)
class LabeledDataset:
    """Labeled video features with a train/test partition by source_id."""

    items: tuple  # of (VideoFeatures, GaitLabel)
    split: dict  # source_id -> "train" | "test"

    def train_items(self):
        return [(vf, label) for vf, label in self.items if self.split[vf.source_id] == "train"]

    def test_items(self):
        return [(vf, label) for vf, label in self.items if self.split[vf.source_id] == "test"]


@dataclass(frozen=True)
class EvalReport:
    task: str  # "multi" or "binary:<Label>"
    algorithm: str
    cv_accuracy: float
    test_accuracy: float
    confusion: tuple  # rows = true class, cols = predicted, class order below
    classes: tuple[GaitLabel, ...]
    fold_count: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "algorithm": self.algorithm,
            "cv_accuracy": self.cv_accuracy,
            "test_accuracy": self.test_accuracy,
            "confusion": [list(row) for row in self.confusion],
            "classes": [c.value for c in self.classes],
            "fold_count": self.fold_count,
            "seed": self.seed,
        }


def stratified_split(items, seed: int = 0) -> LabeledDataset:
    """Per-class seeded shuffle, then floor(3n/4) items to train, rest to test."""
    by_class: dict[GaitLabel, list] = {}
    for vf, label in items:
        by_class.setdefault(label, []).append((vf, label))
    for label in GaitLabel:
        if label in by_class and len(by_class[label]) < 4:
            raise ClassTooSmall(label.value, len(by_class[label]))
    rng = np.random.default_rng(seed)
    split = {}
    for label in GaitLabel:
        group = by_class.get(label, [])
        if not group:
            continue
        perm = rng.permutation(len(group))
        n_train = (3 * len(group)) // 4
        for pos, idx in enumerate(perm):
            vf, _ = group[idx]
            split[vf.source_id] = "train" if pos < n_train else "test"
    return LabeledDataset(items=tuple(items), split=split)


def _stratified_folds(labels, folds: int, seed: int) -> np.ndarray:
    """Fold index per item: per-class shuffle then round-robin assignment."""
    labels = list(labels)
    present = [label for label in GaitLabel if label in set(labels)]
    smallest = min(sum(1 for l in labels if l == label) for label in present)
    if folds > smallest:
        raise TooManyFolds(folds, smallest)
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=int)
    for label in present:
        idx = np.array([i for i, l in enumerate(labels) if l == label])
        perm = rng.permutation(len(idx))
        assignment[idx[perm]] = np.arange(len(idx)) % folds
    return assignment


def _accuracy(model, items) -> float:
    predicted = classify.predict_many(model, [vf for vf, _ in items])
    return sum(p == t for p, (_, t) in zip(predicted, items)) / len(items)


def cross_validate(
    algorithm: str,
    train_items,
    folds: int = DEFAULT_FOLDS,
    hyper: dict | None = None,
    seed: int = 0,
) -> float:
    """Mean of per-fold accuracies over a stratified k-fold of the training part."""
    if folds < 2:
        raise ValueError("folds must be >= 2")
    labels = [label for _, label in train_items]
    assignment = _stratified_folds(labels, folds, seed)
    accuracies = []
    for f in range(folds):
        fit = [item for item, a in zip(train_items, assignment) if a != f]
        held = [item for item, a in zip(train_items, assignment) if a == f]
        model = classify.train(algorithm, fit, hyper=hyper, seed=seed)
        accuracies.append(_accuracy(model, held))
    return float(np.mean(accuracies))


def confusion_matrix(model, items, classes) -> tuple:
    matrix = np.zeros((len(classes), len(classes)), dtype=int)
    for vf, true_label in items:
        predicted, _ = classify.predict(model, vf)
        matrix[classes.index(true_label), classes.index(predicted)] += 1
    return tuple(tuple(int(v) for v in row) for row in matrix)


def task_items(task: str, items):
    """Filter items for a task: 'multi' keeps all, 'binary:<Label>' keeps
    the concerned abnormality plus Normal."""
    if task == "multi":
        return list(items)
    if task.startswith("binary:"):
        concerned = GaitLabel.from_name(task.split(":", 1)[1])
        keep = {concerned, GaitLabel.NORMAL}
        return [(vf, label) for vf, label in items if label in keep]
    raise ValueError(f"unknown task {task!r}")


def run_task(
    task: str,
    algorithms,
    dataset: LabeledDataset,
    folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    hypers: dict | None = None,
):
    """One EvalReport per algorithm; failures are collected, not fatal.

    Returns (reports, errors) where errors maps algorithm -> exception.
    """
    train_items = task_items(task, dataset.train_items())
    test_items = task_items(task, dataset.test_items())
    present = {label for _, label in train_items}
    classes = tuple(label for label in GaitLabel if label in present)
    reports, errors = [], {}
    for algorithm in algorithms:
        hyper = (hypers or {}).get(algorithm)
        try:
            cv = cross_validate(algorithm, train_items, folds=folds, hyper=hyper, seed=seed)
            model = classify.train(algorithm, train_items, hyper=hyper, seed=seed)
            confusion = confusion_matrix(model, test_items, classes)
            test_acc = np.trace(np.asarray(confusion)) / len(test_items)
            reports.append(
                EvalReport(
                    task=task,
                    algorithm=algorithm,
                    cv_accuracy=cv,
                    test_accuracy=float(test_acc),
                    confusion=confusion,
                    classes=classes,
                    fold_count=folds,
                    seed=seed,
                )
            )
        except Exception as exc:  # keep evaluating the other algorithms
            errors[algorithm] = exc
    return reports, errors


def best_report(reports) -> EvalReport:
    """Best model rule: maximal sum of CV and test accuracy."""
    return max(reports, key=lambda r: r.cv_accuracy + r.test_accuracy)


def reports_to_json(reports, extra: dict | None = None) -> str:
    doc = dict(extra or {})
    doc["reports"] = [r.to_dict() for r in reports]
    if reports:
        doc["best_algorithm"] = best_report(reports).algorithm
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def render_text_table(reports) -> str:
    """Human-readable accuracy table, one row per algorithm."""
    lines = []
    if not reports:
        return "(no successful reports)\n"
    task = reports[0].task
    lines.append(f"task: {task}")
    lines.append(f"{'algorithm':<10} {'cv_acc':>8} {'test_acc':>9}")
    for r in reports:
        lines.append(f"{r.algorithm:<10} {r.cv_accuracy:>8.3f} {r.test_accuracy:>9.3f}")
    lines.append(f"best (cv+test): {best_report(reports).algorithm}")
    return "\n".join(lines) + "\n"
