#!/usr/bin/env python3
"""Train the MLP classifier on a synthetic mixed-gesture dataset.

Builds a dataset from short gesture cycles, splits it at row 880, trains
with the default hyperparameters (2x100 relu, dropout 0.3, L2 0.01, Adam,
150 epochs, batch 20), and prints the held-out confusion report. Writes
the model, the per-epoch metrics CSV, and the dataset to the output
directory.
"""

import argparse
from pathlib import Path

from lightband.evaluate import confusion, render_report
from lightband.ingest import write_collection_csv
from lightband.mlp import (
    MlpConfig,
    predict_labels,
    save_model,
    split_dataset,
    trace_to_dataset,
    train,
    write_metrics_csv,
)
from lightband.simulate import DEFAULT_PROFILES, SimConfig, synth_trace
from lightband.types import GestureLabel

SCRIPT = [GestureLabel.EXTEND, GestureLabel.FIST, GestureLabel.ONE] * 4


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=404)
    parser.add_argument("--epochs", type=int, default=150)
    parser.add_argument("--split", type=int, default=880)
    parser.add_argument("--out-dir", type=Path, default=Path("runs/mlp"))
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    sim = SimConfig(
        gesture_hold=1.2, relax_hold=0.8, transition_time=0.2,
        noise_sigma=2.0, drift=0.05, seed=args.seed - 101,
    )
    trace = synth_trace(SCRIPT, DEFAULT_PROFILES, sim)
    write_collection_csv(trace, args.out_dir / "dataset.csv")
    x, labels = trace_to_dataset(trace)
    (x_train, y_train), (x_test, y_test) = split_dataset(x, labels, args.split)
    print(f"{x.shape[0]} rows: {len(y_train)} train / {len(y_test)} test")

    cfg = MlpConfig(
        output_dim=max(labels) + 1, epochs=args.epochs, seed=args.seed
    )
    model, report = train(x_train, y_train, cfg, validation=(x_test, y_test))
    save_model(model, args.out_dir / "model.txt")
    write_metrics_csv(report, args.out_dir / "metrics.csv")
    print(
        f"final train acc {report.train_acc[-1]:.4f}, "
        f"val acc {report.val_acc[-1]:.4f}, "
        f"train loss {report.train_loss[0]:.3f} -> {report.train_loss[-1]:.3f}"
    )

    predicted = [GestureLabel(i) for i in predict_labels(model, x_test)]
    truth = [GestureLabel(i) for i in y_test]
    print()
    print(render_report(confusion(truth, predicted)), end="")
    print(f"\nartifacts in {args.out_dir}")


if __name__ == "__main__":
    main()
