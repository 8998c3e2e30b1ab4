import numpy as np

from lightband.types import GestureLabel, LabeledTrace, SensorFrame

R = GestureLabel.RELAX
E = GestureLabel.EXTEND
F = GestureLabel.FIST
O = GestureLabel.ONE
T = GestureLabel.TRANSITION


def make_trace(channel_rows, labels, interval=0.02):
    """Build a trace with evenly spaced timestamps from raw channel rows."""
    frames = tuple(
        SensorFrame(t_rel=i * interval, t_unix=i * interval, channels=row)
        for i, row in enumerate(channel_rows)
    )
    return LabeledTrace(frames=frames, labels=tuple(labels), sample_interval=interval)


def flat_rows(value, n, channels=5):
    return [[value] * channels for _ in range(n)]


def random_rows(rng: np.random.Generator, n):
    return [[int(v) for v in rng.integers(0, 1024, size=5)] for _ in range(n)]
