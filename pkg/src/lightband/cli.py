"""Command-line pipeline: simulate, learn signatures, classify, train the
network, evaluate, and query the fiber optics helpers.

Exit codes are stable for scripting: 0 success, 1 runtime or domain
failure, 2 usage or argument failure.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter

from . import evaluate, ingest, mlp, signature, simulate
from .baseline import BaselineConfig
from .types import GestureLabel


def _baseline_levels(text: str) -> tuple:
    values = tuple(float(v) for v in text.split(","))
    if len(values) != 5:
        raise argparse.ArgumentTypeError("expected 5 comma-separated levels")
    return values


def _sensor_set(text: str) -> tuple:
    return tuple(int(v) for v in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lightband",
        description="Gesture recognition pipeline for 5-channel light-intensity streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a labeled collection CSV")
    p.add_argument("--script", required=True, help="file with one gesture name per line")
    p.add_argument("--profiles", help="gesture,sensor,delta CSV (built-in defaults if omitted)")
    p.add_argument("--out", required=True, help="collection CSV to write")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--interval", type=float, default=0.02)
    p.add_argument("--noise-sigma", type=float, default=2.0)
    p.add_argument("--drift", type=float, default=0.05)
    p.add_argument("--gesture-hold", type=float, default=5.0)
    p.add_argument("--relax-hold", type=float, default=2.0)
    p.add_argument("--transition-time", type=float, default=0.2)
    p.add_argument("--baselines", type=_baseline_levels, default=simulate.DEFAULT_BASELINE_LEVELS)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("train-signatures", help="learn a signature table from labeled traces")
    p.add_argument("traces", nargs="+", help="collection CSV paths")
    p.add_argument("--out", required=True, help="signature CSV to write")
    p.add_argument("--active", type=_sensor_set, default=signature.DEFAULT_ACTIVE_SENSORS)
    p.set_defaults(func=cmd_train_signatures)

    p = sub.add_parser("classify", help="classify a trace with a signature table")
    p.add_argument("--trace", required=True, help="collection CSV to classify")
    p.add_argument("--table", required=True, help="signature CSV")
    p.add_argument("--out", required=True, help="t_rel,label CSV to write")
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--window", type=float, default=4.0)
    p.add_argument("--tolerance", type=float, default=signature.DEFAULT_TOLERANCE)
    p.add_argument("--horizon", type=int, default=signature.DEFAULT_TRANSITION_HORIZON)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("nn", help="train or run the neural classifier")
    p.add_argument("mode", choices=["train", "predict"])
    p.add_argument("--trace", help="collection CSV providing features and labels")
    p.add_argument("--x", help="headerless 5-column feature CSV")
    p.add_argument("--y", help="class-index label file (one per line)")
    p.add_argument("--model", required=True, help="model file (written by train, read by predict)")
    p.add_argument("--metrics", help="per-epoch metrics CSV (train only)")
    p.add_argument("--out", help="predicted class-index file (predict only)")
    p.add_argument("--split", type=int, default=880, help="train/test boundary row")
    p.add_argument("--epochs", type=int, default=150)
    p.add_argument("--batch-size", type=int, default=20)
    p.add_argument("--dropout", type=float, default=0.3)
    p.add_argument("--l2", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", action="store_true", help="scale intensities to [0, 1]")
    p.set_defaults(func=cmd_nn)

    p = sub.add_parser("physics", help="print the critical angle for a fiber")
    p.add_argument("n_medium", type=float)
    p.add_argument("n_cladding", type=float)
    p.set_defaults(func=cmd_physics)

    return parser


def cmd_simulate(args) -> int:
    try:
        cfg = simulate.SimConfig(
            sample_interval=args.interval,
            gesture_hold=args.gesture_hold,
            relax_hold=args.relax_hold,
            transition_time=args.transition_time,
            noise_sigma=args.noise_sigma,
            drift=args.drift,
            baseline_levels=args.baselines,
            seed=args.seed,
        )
        script = simulate.read_script(args.script)
        profiles = (
            simulate.read_profile_csv(args.profiles)
            if args.profiles
            else simulate.DEFAULT_PROFILES
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    trace = simulate.synth_trace(script, profiles, cfg)
    ingest.write_collection_csv(trace, args.out)
    counts = Counter(label.name for label in trace.labels)
    duration = trace.frames[-1].t_rel if len(trace) else 0.0
    summary = " ".join(f"{name.lower()}={counts.get(name, 0)}" for name in
                       ("RELAX", "EXTEND", "FIST", "ONE", "TRANSITION"))
    print(f"wrote {len(trace)} frames ({duration:.2f}s) to {args.out}: {summary}")
    return 0


def cmd_train_signatures(args) -> int:
    traces = [ingest.read_collection_csv(path) for path in args.traces]
    table = signature.generate_signatures(traces, active=args.active)
    signature.write_signature_csv(table, args.out)
    print("gesture  sensor  delta")
    for (gesture, sensor), delta in sorted(
        table.deltas.items(), key=lambda item: (item[0][0].value, item[0][1])
    ):
        print(f"{gesture.name.lower():<7}  {sensor:>6}  {delta:>10.3f}")
    print(f"wrote signature table to {args.out}")
    return 0


def cmd_classify(args) -> int:
    trace = ingest.read_collection_csv(args.trace)
    table = signature.read_signature_csv(args.table)
    try:
        cfg = BaselineConfig(alpha=args.alpha, window=args.window)
        state = signature.ClassifierState(
            tolerance=args.tolerance, transition_horizon=args.horizon
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    predicted = signature.classify_trace(trace, table, cfg, state)
    with open(args.out, "w", newline="") as handle:
        handle.write("t_rel,label\n")
        for frame, label in zip(trace.frames, predicted):
            handle.write(f"{frame.t_rel},{label.name.lower()}\n")
    print(f"wrote {len(predicted)} labels to {args.out}")
    matrix = evaluate.confusion(trace.labels, predicted)
    print(evaluate.render_report(matrix), end="")
    return 0


def _nn_dataset(args, need_labels: bool) -> tuple:
    if args.trace and (args.x or args.y):
        raise ValueError("give either --trace or --x/--y, not both")
    if args.trace:
        trace = ingest.read_collection_csv(args.trace)
        return mlp.trace_to_dataset(trace)
    if not args.x:
        raise ValueError("need --trace or --x")
    x = mlp.load_features_csv(args.x)
    labels = None
    if args.y:
        labels = mlp.load_labels_csv(args.y)
        if len(labels) != x.shape[0]:
            raise ValueError(f"{x.shape[0]} feature rows but {len(labels)} labels")
    if need_labels and labels is None:
        raise ValueError("training needs labels: give --trace or --y")
    return x, labels


def cmd_nn(args) -> int:
    if args.mode == "train":
        x, labels = _nn_dataset(args, need_labels=True)
        (x_train, y_train), (x_test, y_test) = mlp.split_dataset(x, labels, args.split)
        if len(y_train) == 0:
            raise ValueError("training split is empty")
        cfg = mlp.MlpConfig(
            output_dim=max(labels) + 1,
            dropout_rate=args.dropout,
            l2=args.l2,
            epochs=args.epochs,
            batch_size=args.batch_size,
            seed=args.seed,
            normalize=args.normalize,
        )
        validation = (x_test, y_test) if len(y_test) else None
        model, report = mlp.train(x_train, y_train, cfg, validation=validation)
        mlp.save_model(model, args.model)
        if args.metrics:
            mlp.write_metrics_csv(report, args.metrics)
        print(f"trained {cfg.epochs} epochs on {len(y_train)} rows; model -> {args.model}")
        if report.train_acc:
            line = f"final train acc {report.train_acc[-1]:.4f}"
            if report.val_acc:
                line += f", val acc {report.val_acc[-1]:.4f}"
            print(line)
        if len(y_test):
            predicted = mlp.predict_labels(model, x_test)
            _print_confusion(y_test, predicted)
        return 0

    x, labels = _nn_dataset(args, need_labels=False)
    model = mlp.load_model(args.model)
    predicted = mlp.predict_labels(model, x)
    if args.out:
        mlp.write_labels_csv(predicted, args.out)
        print(f"wrote {len(predicted)} predictions to {args.out}")
    if labels is not None:
        _print_confusion(labels, predicted)
    return 0


def _print_confusion(truth_indices, predicted_indices) -> None:
    try:
        truth = [GestureLabel.from_class_index(i) for i in truth_indices]
        predicted = [GestureLabel.from_class_index(i) for i in predicted_indices]
    except ValueError:
        print("labels outside the gesture set; skipping confusion report")
        return
    matrix = evaluate.confusion(truth, predicted)
    print(evaluate.render_report(matrix), end="")


def cmd_physics(args) -> int:
    try:
        angle = simulate.critical_angle(args.n_medium, args.n_cladding)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{angle:.2f}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code is None else int(exc.code)
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
