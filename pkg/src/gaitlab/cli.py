"""Command-line pipeline: extract, synth, train, eval, predict.

Exit codes: 0 success, 2 input/parse error, 3 insufficient data,
4 schema mismatch.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import classify, evaluate, ingest, synth
from .errors import InsufficientDataError, ParseError, SchemaMismatch
from .pose import GaitLabel
from .video_features import featurize_sequence, read_features_csv, write_features_csv

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INSUFFICIENT = 3
EXIT_SCHEMA = 4


def _add_feature_config(parser):
    parser.add_argument("--norm-scope", choices=["frame", "video"], default="frame",
                        help="distance normalization scope (default: frame)")
    parser.add_argument("--std", choices=["population", "sample"], default="population",
                        help="standard deviation convention (default: population)")


def _parse_counts(text: str) -> dict:
    counts = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        if not value:
            raise ValueError(f"bad counts entry {part!r}, expected Label=N")
        counts[GaitLabel.from_name(name)] = int(value)
    return counts


def _keypoint_files(in_path: Path) -> list[Path]:
    if in_path.is_dir():
        files = sorted(in_path.glob("*.kp.jsonl"))
        if not files:
            raise FileNotFoundError(f"no .kp.jsonl files in {in_path}")
        return files
    if not in_path.exists():
        raise FileNotFoundError(str(in_path))
    return [in_path]


def cmd_extract(args) -> int:
    in_path = Path(args.in_path)
    files = _keypoint_files(in_path)
    manifest = in_path / "manifest.csv" if in_path.is_dir() else None
    labels = synth.read_manifest(manifest) if manifest and manifest.exists() else {}
    rows = []
    for path in files:
        seq = ingest.load_keypoint_file(path)
        seq, report = ingest.filter_valid(seq, args.min_conf, args.min_frames)
        vf = featurize_sequence(seq, norm_scope=args.norm_scope, std_mode=args.std)
        rows.append((vf, labels.get(seq.source_id)))
        if report.dropped_frames:
            print(f"{seq.source_id}: dropped {report.dropped_frames}/"
                  f"{report.total_frames} frames", file=sys.stderr)
    write_features_csv(rows, args.out)
    print(f"wrote {len(rows)} video feature rows to {args.out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    counts = _parse_counts(args.counts) if args.counts else None
    written = synth.write_corpus(args.out, counts=counts, seed=args.seed,
                                 n_frames=args.frames)
    print(f"wrote {len(written)} sequences to {args.out}")
    return EXIT_OK


def _labeled_rows(args):
    rows = read_features_csv(args.features, norm_scope=args.norm_scope, std_mode=args.std)
    labeled = [(vf, label) for vf, label in rows if label is not None]
    if not labeled:
        raise ParseError(f"no labeled rows in {args.features}")
    return labeled


def cmd_train(args) -> int:
    items = evaluate.task_items(args.task, _labeled_rows(args))
    model = classify.train(args.algo, items, seed=args.seed)
    classify.save_model(model, args.out)
    print(f"trained {args.algo} on {len(items)} videos -> {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    items = _labeled_rows(args)
    dataset = evaluate.stratified_split(items, seed=args.seed)
    algorithms = list(classify.ALGORITHMS) if args.algos == "all" else args.algos.split(",")
    for a in algorithms:
        if a not in classify.ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    reports, errors = evaluate.run_task(args.task, algorithms, dataset,
                                        folds=args.folds, seed=args.seed)
    for algorithm, exc in errors.items():
        print(f"{algorithm}: {exc}", file=sys.stderr)
    if not reports:
        raise next(iter(errors.values()))
    extra = {
        "task": args.task,
        "folds": args.folds,
        "seed": args.seed,
        "norm_scope": args.norm_scope,
        "std": args.std,
    }
    Path(args.report).write_text(evaluate.reports_to_json(reports, extra), encoding="utf-8")
    print(evaluate.render_text_table(reports), end="")
    print(f"report written to {args.report}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model = classify.load_model(args.model)
    rows = read_features_csv(args.features, norm_scope=args.norm_scope, std_mode=args.std)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source_id", "predicted"]
                        + [f"score_{c.value}" for c in model.class_set])
        for vf, _ in rows:
            label, scores = classify.predict(model, vf)
            writer.writerow([vf.source_id, label.value]
                            + [repr(scores[c]) for c in model.class_set])
    print(f"wrote {len(rows)} predictions to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaitlab",
                                     description="Gait feature extraction and "
                                                 "abnormality classification pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="keypoint JSONL -> video feature CSV")
    p.add_argument("--in", dest="in_path", required=True,
                   help="a .kp.jsonl file or a directory of them")
    p.add_argument("--out", required=True, help="output features CSV")
    p.add_argument("--min-conf", type=float, default=ingest.DEFAULT_MIN_CONFIDENCE)
    p.add_argument("--min-frames", type=int, default=ingest.DEFAULT_MIN_VALID_FRAMES)
    _add_feature_config(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--counts", default=None,
                   help="per-class counts, e.g. Choreiform=51,Diplegia=55,...")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frames", type=int, default=60, help="frames per sequence")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train one classifier on a feature CSV")
    p.add_argument("--features", required=True)
    p.add_argument("--algo", required=True, choices=classify.ALGORITHMS)
    p.add_argument("--task", default="multi", help="multi or binary:<Label>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output .gaitmodel.json path")
    _add_feature_config(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="split, cross-validate and test algorithms")
    p.add_argument("--features", required=True)
    p.add_argument("--algos", default="all", help="'all' or comma-separated list")
    p.add_argument("--task", default="multi", help="multi or binary:<Label>")
    p.add_argument("--folds", type=int, default=evaluate.DEFAULT_FOLDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", required=True, help="output report JSON path")
    _add_feature_config(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="predict labels for a feature CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True, help="output predictions CSV")
    _add_feature_config(p)
    p.set_defaults(func=cmd_predict)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (ParseError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
