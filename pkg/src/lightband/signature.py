"""Signature learning and tolerance-match gesture classification.

A signature is the mean intensity change (gesture plateau minus the
preceding relax plateau) per gesture and sensor. Classification compares
each frame's baseline deltas against the signatures: a gesture matches only
if every active sensor lands within the tolerance band around its signature
value, and a freshly changed label is smoothed to TRANSITION.
"""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field

from .baseline import BaselineConfig, BaselineTracker
from .types import GESTURES, GestureLabel, LabeledTrace, SensorFrame, parse_label, segment_trace

DEFAULT_ACTIVE_SENSORS = (2, 3, 4)  # 1-based; the short fibers react the most
DEFAULT_TOLERANCE = 0.10
DEFAULT_TRANSITION_HORIZON = 10
MIN_SEGMENT_FRAMES = 5

SIGNATURE_CSV_HEADER = "gesture,sensor,delta"


@dataclass(frozen=True)
class SignatureTable:
    """Per-(gesture, sensor) intensity deltas for the active sensors.

    Deltas are signed: negative means the sensor dips below the relax
    baseline during the gesture. Immutable once built, safe to share.
    """

    deltas: dict  # (GestureLabel, sensor index 1..5) -> float
    active_sensors: tuple = DEFAULT_ACTIVE_SENSORS

    def __post_init__(self):
        object.__setattr__(self, "active_sensors", tuple(self.active_sensors))
        for sensor in self.active_sensors:
            if not 1 <= sensor <= 5:
                raise ValueError(f"sensor index {sensor} outside 1..5")
        for (gesture, sensor), delta in self.deltas.items():
            if gesture not in GESTURES:
                raise ValueError(f"{gesture} cannot carry a signature")
            if not math.isfinite(delta):
                raise ValueError(f"non-finite delta for ({gesture}, sensor {sensor})")
        for gesture in self.gestures:
            for sensor in self.active_sensors:
                if (gesture, sensor) not in self.deltas:
                    raise ValueError(
                        f"missing entry for ({gesture}, sensor {sensor})"
                    )

    @property
    def gestures(self) -> tuple:
        present = {g for g, _ in self.deltas}
        return tuple(g for g in GESTURES if g in present)

    def delta(self, gesture: GestureLabel, sensor: int) -> float:
        return self.deltas[(gesture, sensor)]


def generate_signatures(
    traces,
    active=DEFAULT_ACTIVE_SENSORS,
    gestures=GESTURES,
    min_segment_frames: int = MIN_SEGMENT_FRAMES,
) -> SignatureTable:
    """Learn a SignatureTable from labeled traces.

    For every gesture segment preceded by a RELAX segment (one intervening
    TRANSITION segment is skipped), the per-sensor delta is the mean
    intensity of the gesture segment minus the mean of that relax segment.
    The signature is the average of these deltas over all such pairs.

    Raises ValueError if a requested gesture has no relax/gesture pair, or
    if a segment used by a pair is shorter than min_segment_frames.
    """
    gestures = tuple(gestures)
    sums = {}
    counts = {}
    for trace in traces:
        segments = segment_trace(trace)
        for idx, (label, start, end) in enumerate(segments):
            if label not in gestures:
                continue
            prev = idx - 1
            if prev >= 0 and segments[prev][0] is GestureLabel.TRANSITION:
                prev -= 1
            if prev < 0 or segments[prev][0] is not GestureLabel.RELAX:
                continue
            _, r_start, r_end = segments[prev]
            for name, seg_len in (("relax", r_end - r_start), (label.name, end - start)):
                if seg_len < min_segment_frames:
                    raise ValueError(
                        f"{name} segment of {seg_len} frames is shorter than "
                        f"{min_segment_frames}"
                    )
            gesture_mean = _segment_means(trace, start, end)
            relax_mean = _segment_means(trace, r_start, r_end)
            for sensor in active:
                key = (label, sensor)
                delta = gesture_mean[sensor - 1] - relax_mean[sensor - 1]
                sums[key] = sums.get(key, 0.0) + delta
                counts[key] = counts.get(key, 0) + 1
    for gesture in gestures:
        if not any(g is gesture for g, _ in counts):
            raise ValueError(f"no relax/gesture pairs found for {gesture}")
    deltas = {key: sums[key] / counts[key] for key in sums}
    return SignatureTable(deltas=deltas, active_sensors=tuple(active))


def _segment_means(trace: LabeledTrace, start: int, end: int) -> list:
    totals = [0.0] * 5
    for frame in trace.frames[start:end]:
        for ch in range(5):
            totals[ch] += frame.channels[ch]
    n = end - start
    return [t / n for t in totals]


@dataclass
class ClassifierState:
    """Streaming classifier state: tolerance plus recent raw-label history.

    Raw (pre-smoothing) labels feed the history, so a genuine new gesture
    surfaces after exactly transition_horizon stable readings.
    """

    tolerance: float = DEFAULT_TOLERANCE
    transition_horizon: int = DEFAULT_TRANSITION_HORIZON
    abs_floor: float = 0.0  # optional absolute tolerance floor, off by default
    recent_labels: deque = field(default_factory=deque)

    def __post_init__(self):
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be non-negative, got {self.tolerance}")
        if self.transition_horizon < 1:
            raise ValueError(
                f"transition_horizon must be at least 1, got {self.transition_horizon}"
            )
        self.recent_labels = deque(self.recent_labels, maxlen=self.transition_horizon)


def classify_frame(
    frame: SensorFrame,
    baselines,
    table: SignatureTable,
    state: ClassifierState,
) -> GestureLabel:
    """Classify one frame given the current per-channel baselines.

    A gesture matches when, on every active sensor, the reading's delta from
    the baseline is within tolerance * |signature| of the signature value.
    Ties go to the gesture with the smallest mean relative error; no match
    means RELAX. If the raw label differs from any of the last
    transition_horizon raw labels the emitted label is TRANSITION, but the
    raw label still enters the history.
    """
    deltas = {
        sensor: frame.channels[sensor - 1] - baselines[sensor - 1]
        for sensor in table.active_sensors
    }
    best = None
    best_err = math.inf
    for gesture in table.gestures:
        sigs = []
        for sensor in table.active_sensors:
            try:
                sigs.append(table.delta(gesture, sensor))
            except KeyError:
                raise ValueError(
                    f"signature table has no entry for ({gesture}, sensor {sensor})"
                ) from None
        total_err = 0.0
        matched = True
        for sensor, sig in zip(table.active_sensors, sigs):
            err = abs(deltas[sensor] - sig)
            band = max(state.tolerance * abs(sig), state.abs_floor)
            if err > band:
                matched = False
                break
            total_err += err / abs(sig) if sig != 0 else 0.0
        if matched:
            mean_err = total_err / len(table.active_sensors)
            if mean_err < best_err:
                best = gesture
                best_err = mean_err
    raw = best if best is not None else GestureLabel.RELAX
    emitted = raw
    if any(prev is not raw for prev in state.recent_labels):
        emitted = GestureLabel.TRANSITION
    state.recent_labels.append(raw)
    return emitted


def classify_trace(
    trace: LabeledTrace,
    table: SignatureTable,
    cfg: BaselineConfig = BaselineConfig(),
    state: ClassifierState = None,
) -> list:
    """Run baseline tracking plus per-frame classification over a trace."""
    if state is None:
        state = ClassifierState()
    tracker = BaselineTracker(cfg)
    labels = []
    for frame in trace.frames:
        baselines = tracker.update(frame)
        labels.append(classify_frame(frame, baselines, table, state))
    return labels


def write_signature_csv(table: SignatureTable, sink) -> None:
    """Write `gesture,sensor,delta` rows, full float precision."""
    rows = sorted(
        table.deltas.items(), key=lambda item: (item[0][0].value, item[0][1])
    )
    text = SIGNATURE_CSV_HEADER + "\n" + "".join(
        f"{gesture.name.lower()},{sensor},{delta!r}\n"
        for (gesture, sensor), delta in rows
    )
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", newline="") as handle:
            handle.write(text)
    else:
        sink.write(text)


def read_signature_csv(source, active=None) -> SignatureTable:
    """Read a signature table; active sensors default to those in the file."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", newline="") as handle:
            lines = handle.read().splitlines()
    else:
        lines = [line.rstrip("\r\n") for line in source]
    if not lines or lines[0].strip() != SIGNATURE_CSV_HEADER:
        raise ValueError("missing or malformed signature header")
    deltas = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tokens = [t.strip() for t in line.split(",")]
        if len(tokens) != 3:
            raise ValueError(f"line {lineno}: expected 3 fields, got {len(tokens)}")
        try:
            gesture = parse_label(tokens[0])
            sensor = int(tokens[1])
            delta = float(tokens[2])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        deltas[(gesture, sensor)] = delta
    if active is None:
        active = tuple(sorted({sensor for _, sensor in deltas}))
    return SignatureTable(deltas=deltas, active_sensors=tuple(active))
