"""From-scratch multilayer perceptron: 5 -> 100 -> 100 -> classes.

Hidden layers are rectified-linear with inverted dropout and an L2 weight
penalty; the output layer is logistic-sigmoid scored with per-output binary
cross-entropy over one-hot targets. Training is mini-batch Adam with
per-epoch shuffling, fully deterministic under a fixed seed.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .types import GestureLabel, LabeledTrace

PRED_EPS = 1e-7

MODEL_MAGIC = "lightband-mlp v1"


@dataclass(frozen=True)
class MlpConfig:
    input_dim: int = 5
    hidden: tuple = (100, 100)
    output_dim: int = 5
    dropout_rate: float = 0.3
    l2: float = 0.01
    epochs: int = 150
    batch_size: int = 20
    seed: int = 0
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    normalize: bool = False  # divide inputs by 1023 when on; raw scale by default

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(self.hidden))
        dims = (self.input_dim, *self.hidden, self.output_dim)
        if any(d < 1 for d in dims):
            raise ValueError(f"all layer dims must be >= 1, got {dims}")
        if not 0 <= self.dropout_rate < 1:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        if self.l2 < 0:
            raise ValueError(f"l2 must be non-negative, got {self.l2}")
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("epochs must be >= 0 and batch_size >= 1")

    @property
    def layer_dims(self) -> tuple:
        """(in, out) pairs for each weight matrix in order."""
        dims = (self.input_dim, *self.hidden, self.output_dim)
        return tuple(zip(dims[:-1], dims[1:]))


@dataclass
class MlpModel:
    """Layer parameters plus the config they were built with.

    weights[i] has shape (out, in); biases[i] has shape (out,). A model is
    treated as frozen once training finishes.
    """

    weights: list
    biases: list
    config: MlpConfig

    def regularized(self) -> list:
        """Weight matrices carrying the L2 penalty (hidden layers only)."""
        return self.weights[:-1]


@dataclass
class TrainReport:
    """Per-epoch metrics; validation lists are empty when no data was given."""

    train_loss: list = field(default_factory=list)
    train_acc: list = field(default_factory=list)
    val_loss: list = field(default_factory=list)
    val_acc: list = field(default_factory=list)


def init_model(cfg: MlpConfig, rng: np.random.Generator) -> MlpModel:
    """Uniform +/- sqrt(6 / (fan_in + fan_out)) weights, zero biases."""
    weights = []
    biases = []
    for fan_in, fan_out in cfg.layer_dims:
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MlpModel(weights=weights, biases=biases, config=cfg)


def one_hot(labels, num_classes: int) -> np.ndarray:
    """Encode labels (GestureLabel or class indices) as one-hot rows."""
    indices = [
        label.class_index if isinstance(label, GestureLabel) else int(label)
        for label in labels
    ]
    out = np.zeros((len(indices), num_classes))
    for row, idx in enumerate(indices):
        if not 0 <= idx < num_classes:
            raise ValueError(f"class index {idx} outside [0, {num_classes})")
        out[row, idx] = 1.0
    return out


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _forward(model: MlpModel, x: np.ndarray, training: bool, rng) -> tuple:
    """Run the layer stack; returns (output, cache) with cache of
    (inputs, pre-activations, dropped activations, dropout scales)."""
    cfg = model.config
    last = len(model.weights) - 1
    rate = cfg.dropout_rate if training else 0.0
    if rate > 0 and rng is None:
        raise ValueError("training forward pass with dropout needs an rng")
    inputs = [x]
    zs = []
    scales = []
    a = x
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w.T + b
        zs.append(z)
        if i == last:
            a = _sigmoid(z)
            scales.append(None)
        else:
            a = np.maximum(z, 0.0)
            if rate > 0:
                # inverted dropout: scale kept units so inference needs no rescale
                scale = (rng.random(a.shape) >= rate) / (1.0 - rate)
                a = a * scale
                scales.append(scale)
            else:
                scales.append(None)
        inputs.append(a)
    return a, (inputs, zs, scales)


def forward(model: MlpModel, x, training: bool = False, rng=None) -> np.ndarray:
    """Network output for a single input vector or a batch of rows."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    out, _ = _forward(model, np.atleast_2d(x), training, rng)
    return out[0] if single else out


def bce_loss(pred, target, model: MlpModel = None, l2: float = 0.0) -> float:
    """Mean binary cross-entropy over outputs plus the L2 weight penalty.

    Predictions are clamped to [PRED_EPS, 1 - PRED_EPS] before the logs. The
    penalty is l2 * sum of squared weights over the model's regularized
    layers, matching the 2 * l2 * W gradient used in training.
    """
    pred = np.atleast_2d(np.asarray(pred, dtype=float))
    target = np.atleast_2d(np.asarray(target, dtype=float))
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    p = np.clip(pred, PRED_EPS, 1.0 - PRED_EPS)
    data = -np.mean(target * np.log(p) + (1.0 - target) * np.log(1.0 - p))
    penalty = 0.0
    if model is not None and l2 > 0:
        penalty = l2 * sum(float(np.sum(w * w)) for w in model.regularized())
    return float(data) + penalty


def loss_and_gradients(model: MlpModel, x: np.ndarray, target: np.ndarray, rng=None,
                       training: bool = True) -> tuple:
    """Batch loss and analytic gradients for every weight and bias."""
    cfg = model.config
    out, (inputs, zs, scales) = _forward(model, x, training, rng)
    loss = bce_loss(out, target, model, cfg.l2)
    n_rows, n_out = target.shape
    last = len(model.weights) - 1
    grads_w = [None] * len(model.weights)
    grads_b = [None] * len(model.biases)
    delta = (out - target) / (n_out * n_rows)
    for i in range(last, -1, -1):
        grads_w[i] = delta.T @ inputs[i]
        grads_b[i] = delta.sum(axis=0)
        if i < last:
            grads_w[i] += 2.0 * cfg.l2 * model.weights[i]
        if i > 0:
            upstream = delta @ model.weights[i]
            if scales[i - 1] is not None:
                upstream = upstream * scales[i - 1]
            delta = upstream * (zs[i - 1] > 0)
    return loss, grads_w, grads_b


def _accuracy(pred: np.ndarray, indices: np.ndarray) -> float:
    return float(np.mean(np.argmax(pred, axis=1) == indices))


def _prepare(x, cfg: MlpConfig) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != cfg.input_dim:
        raise ValueError(
            f"expected feature matrix with {cfg.input_dim} columns, got {x.shape}"
        )
    return x / 1023.0 if cfg.normalize else x


def _as_indices(labels) -> np.ndarray:
    return np.array(
        [l.class_index if isinstance(l, GestureLabel) else int(l) for l in labels],
        dtype=int,
    )


def train(x, labels, cfg: MlpConfig, validation=None) -> tuple:
    """Train with mini-batch Adam; returns (model, per-epoch TrainReport).

    validation, when given, is an (x_val, labels_val) pair scored after each
    epoch with dropout off. All randomness (init, shuffling, dropout) flows
    from cfg.seed, so identical calls produce identical weights.
    """
    x = _prepare(x, cfg)
    if x.shape[0] == 0:
        raise ValueError("cannot train on an empty dataset")
    indices = _as_indices(labels)
    if len(indices) != x.shape[0]:
        raise ValueError(f"{x.shape[0]} rows but {len(indices)} labels")
    targets = one_hot(indices, cfg.output_dim)
    val = None
    if validation is not None:
        x_val = _prepare(validation[0], cfg)
        val_indices = _as_indices(validation[1])
        val = (x_val, one_hot(val_indices, cfg.output_dim), val_indices)

    rng = np.random.default_rng(cfg.seed)
    model = init_model(cfg, rng)
    adam_m = [np.zeros_like(p) for p in model.weights + model.biases]
    adam_v = [np.zeros_like(p) for p in model.weights + model.biases]
    step = 0
    report = TrainReport()
    n = x.shape[0]
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            _, grads_w, grads_b = loss_and_gradients(
                model, x[batch], targets[batch], rng=rng, training=True
            )
            step += 1
            params = model.weights + model.biases
            grads = grads_w + grads_b
            for i, (p, g) in enumerate(zip(params, grads)):
                adam_m[i] = cfg.beta1 * adam_m[i] + (1 - cfg.beta1) * g
                adam_v[i] = cfg.beta2 * adam_v[i] + (1 - cfg.beta2) * g * g
                m_hat = adam_m[i] / (1 - cfg.beta1**step)
                v_hat = adam_v[i] / (1 - cfg.beta2**step)
                p -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)
        train_pred = forward(model, x)
        report.train_loss.append(bce_loss(train_pred, targets, model, cfg.l2))
        report.train_acc.append(_accuracy(np.atleast_2d(train_pred), indices))
        if val is not None:
            val_pred = forward(model, val[0])
            report.val_loss.append(bce_loss(val_pred, val[1], model, cfg.l2))
            report.val_acc.append(_accuracy(np.atleast_2d(val_pred), val[2]))
    return model, report


def predict_labels(model: MlpModel, x) -> list:
    """Argmax class index per row; ties break toward the lowest index."""
    x = _prepare(np.atleast_2d(np.asarray(x, dtype=float)), model.config)
    out = np.atleast_2d(forward(model, x))
    return [int(i) for i in np.argmax(out, axis=1)]


def split_dataset(x, labels, boundary: int) -> tuple:
    """First `boundary` rows train, the rest test; order preserved."""
    x = np.asarray(x)
    if not 0 <= boundary <= x.shape[0]:
        raise ValueError(f"boundary {boundary} outside [0, {x.shape[0]}]")
    labels = list(labels)
    if len(labels) != x.shape[0]:
        raise ValueError(f"{x.shape[0]} rows but {len(labels)} labels")
    return (x[:boundary], labels[:boundary]), (x[boundary:], labels[boundary:])


def trace_to_dataset(trace: LabeledTrace) -> tuple:
    """Per-frame feature matrix (raw intensities) and class-index labels."""
    x = np.array([frame.channels for frame in trace.frames], dtype=float)
    y = [label.class_index for label in trace.labels]
    return x.reshape(len(trace), 5) if len(trace) else np.zeros((0, 5)), y


def save_model(model: MlpModel, sink) -> None:
    """Versioned text serialization; load_model inverts it exactly."""
    cfg = model.config
    lines = [MODEL_MAGIC, json.dumps({
        "input_dim": cfg.input_dim,
        "hidden": list(cfg.hidden),
        "output_dim": cfg.output_dim,
        "dropout_rate": cfg.dropout_rate,
        "l2": cfg.l2,
        "epochs": cfg.epochs,
        "batch_size": cfg.batch_size,
        "seed": cfg.seed,
        "learning_rate": cfg.learning_rate,
        "beta1": cfg.beta1,
        "beta2": cfg.beta2,
        "adam_eps": cfg.adam_eps,
        "normalize": cfg.normalize,
    })]
    for w, b in zip(model.weights, model.biases):
        lines.append(f"layer {w.shape[0]} {w.shape[1]}")
        for row in w:
            lines.append(" ".join(repr(float(v)) for v in row))
        lines.append(" ".join(repr(float(v)) for v in b))
    text = "\n".join(lines) + "\n"
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", newline="") as handle:
            handle.write(text)
    else:
        sink.write(text)


def load_model(source) -> MlpModel:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", newline="") as handle:
            lines = handle.read().splitlines()
    else:
        lines = source.read().splitlines()
    if not lines or lines[0] != MODEL_MAGIC:
        raise ValueError("unsupported model format (bad magic line)")
    if len(lines) < 2:
        raise ValueError("truncated model data: missing config")
    raw_cfg = json.loads(lines[1])
    raw_cfg["hidden"] = tuple(raw_cfg["hidden"])
    cfg = MlpConfig(**raw_cfg)
    pos = 2
    weights = []
    biases = []
    for fan_in, fan_out in cfg.layer_dims:
        header = f"layer {fan_out} {fan_in}"
        if pos >= len(lines) or lines[pos] != header:
            raise ValueError(f"truncated or inconsistent model data at line {pos + 1}")
        pos += 1
        rows = []
        for _ in range(fan_out):
            if pos >= len(lines):
                raise ValueError("truncated model data inside a weight matrix")
            rows.append([float(v) for v in lines[pos].split()])
            if len(rows[-1]) != fan_in:
                raise ValueError(f"bad weight row width at line {pos + 1}")
            pos += 1
        if pos >= len(lines):
            raise ValueError("truncated model data: missing bias row")
        bias = [float(v) for v in lines[pos].split()]
        if len(bias) != fan_out:
            raise ValueError(f"bad bias width at line {pos + 1}")
        pos += 1
        weights.append(np.array(rows))
        biases.append(np.array(bias))
    for arr in weights + biases:
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite parameter in model data")
    return MlpModel(weights=weights, biases=biases, config=cfg)


def load_features_csv(source) -> np.ndarray:
    """Headerless feature CSV: five comma-separated numbers per row."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", newline="") as handle:
            lines = handle.read().splitlines()
    else:
        lines = source.read().splitlines()
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        tokens = line.split(",")
        if len(tokens) != 5:
            raise ValueError(f"line {lineno}: expected 5 columns, got {len(tokens)}")
        try:
            rows.append([float(t) for t in tokens])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric feature value") from None
    return np.array(rows) if rows else np.zeros((0, 5))


def load_labels_csv(source) -> list:
    """Label file: one class index per line."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", newline="") as handle:
            lines = handle.read().splitlines()
    else:
        lines = source.read().splitlines()
    labels = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            labels.append(int(line.strip()))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer label") from None
    return labels


def write_features_csv(x, sink) -> None:
    text = "".join(",".join(repr(float(v)) for v in row) + "\n" for row in np.asarray(x))
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", newline="") as handle:
            handle.write(text)
    else:
        sink.write(text)


def write_labels_csv(labels, sink) -> None:
    text = "".join(f"{int(l)}\n" for l in labels)
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", newline="") as handle:
            handle.write(text)
    else:
        sink.write(text)


def write_metrics_csv(report: TrainReport, sink) -> None:
    """Per-epoch metrics CSV for external plotting."""
    lines = ["epoch,train_loss,train_acc,val_loss,val_acc"]
    has_val = bool(report.val_loss)
    for epoch in range(len(report.train_loss)):
        row = [
            str(epoch + 1),
            repr(report.train_loss[epoch]),
            repr(report.train_acc[epoch]),
            repr(report.val_loss[epoch]) if has_val else "",
            repr(report.val_acc[epoch]) if has_val else "",
        ]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", newline="") as handle:
            handle.write(text)
    else:
        sink.write(text)
