"""Shared domain vocabulary: frames, gesture labels, and labeled traces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

NUM_CHANNELS = 5
INTENSITY_MIN = 0
INTENSITY_MAX = 1023

# Canonical sample spacing of the sensor stream (seconds).
DEFAULT_SAMPLE_INTERVAL = 0.02


class GestureLabel(Enum):
    """The closed set of frame labels.

    RELAX is the resting hand, EXTEND/FIST/ONE are the recognized gestures,
    TRANSITION marks frames where the hand is moving between states.
    """

    RELAX = 0
    EXTEND = 1
    FIST = 2
    ONE = 3
    TRANSITION = 4

    def __str__(self) -> str:
        return self.name

    @property
    def class_index(self) -> int:
        """Stable integer encoding used for one-hot targets and matrices."""
        return self.value

    @classmethod
    def from_class_index(cls, index: int) -> "GestureLabel":
        return cls(index)


# Gestures that carry a signature (everything except RELAX and TRANSITION).
GESTURES = (GestureLabel.EXTEND, GestureLabel.FIST, GestureLabel.ONE)

# Row/column order of scoreable classes in confusion matrices.
SCOREABLE_CLASSES = (
    GestureLabel.RELAX,
    GestureLabel.EXTEND,
    GestureLabel.FIST,
    GestureLabel.ONE,
)

_LABELS_BY_NAME = {label.name: label for label in GestureLabel}


def parse_label(text: str) -> GestureLabel:
    """Parse a label token, ignoring case and surrounding whitespace."""
    token = text.strip()
    label = _LABELS_BY_NAME.get(token.upper())
    if label is None:
        raise ValueError(f"unknown gesture label: {token!r}")
    return label


def _check_intensity(value) -> int:
    try:
        as_int = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"channel value is not an integer: {value!r}") from None
    if as_int != value:
        raise ValueError(f"channel value is not an integer: {value!r}")
    if not INTENSITY_MIN <= as_int <= INTENSITY_MAX:
        raise ValueError(
            f"channel value {as_int} outside [{INTENSITY_MIN}, {INTENSITY_MAX}]"
        )
    return as_int


@dataclass(frozen=True)
class SensorFrame:
    """One timestamped reading of the five scaled light intensities."""

    t_rel: float  # seconds since trace start
    t_unix: float  # absolute seconds; carried through but never interpreted
    channels: tuple  # 5 intensities, each in [0, 1023]

    def __post_init__(self):
        if not math.isfinite(self.t_rel) or self.t_rel < 0:
            raise ValueError(f"t_rel must be finite and non-negative, got {self.t_rel}")
        if not math.isfinite(self.t_unix):
            raise ValueError(f"t_unix must be finite, got {self.t_unix}")
        channels = tuple(self.channels)
        if len(channels) != NUM_CHANNELS:
            raise ValueError(f"expected {NUM_CHANNELS} channels, got {len(channels)}")
        object.__setattr__(self, "channels", tuple(_check_intensity(v) for v in channels))


@dataclass(frozen=True)
class LabeledTrace:
    """An ordered sequence of frames with per-frame ground-truth labels."""

    frames: tuple = field(default=())
    labels: tuple = field(default=())
    sample_interval: float = DEFAULT_SAMPLE_INTERVAL

    def __post_init__(self):
        frames = tuple(self.frames)
        labels = tuple(self.labels)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "labels", labels)
        if len(frames) != len(labels):
            raise ValueError(
                f"frames and labels differ in length: {len(frames)} != {len(labels)}"
            )
        if self.sample_interval <= 0:
            raise ValueError(f"sample_interval must be positive, got {self.sample_interval}")
        lo = 0.5 * self.sample_interval * (1 - 1e-9)
        hi = 1.5 * self.sample_interval * (1 + 1e-9)
        for prev, cur in zip(frames, frames[1:]):
            dt = cur.t_rel - prev.t_rel
            if dt <= 0:
                raise ValueError(
                    f"t_rel must be strictly increasing ({prev.t_rel} -> {cur.t_rel})"
                )
            if not lo <= dt <= hi:
                raise ValueError(
                    f"frame spacing {dt} outside 50% of sample_interval "
                    f"{self.sample_interval}"
                )

    def __len__(self) -> int:
        return len(self.frames)


def segment_trace(trace: LabeledTrace) -> list:
    """Split a trace into maximal runs of identical labels.

    Returns (label, start_index, end_index) triples with end exclusive,
    covering every index exactly once, in trace order.
    """
    if len(trace) == 0:
        raise ValueError("cannot segment an empty trace")
    segments = []
    start = 0
    for i in range(1, len(trace)):
        if trace.labels[i] != trace.labels[start]:
            segments.append((trace.labels[start], start, i))
            start = i
    segments.append((trace.labels[start], start, len(trace)))
    return segments
