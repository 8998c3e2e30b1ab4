import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R, flat_rows, make_trace, random_rows
from lightband.baseline import BaselineConfig, BaselineTracker, ewma_step


def brute_force_baselines(frames, alpha, window):
    """Reference: full EWMA history plus a scan-max over the trailing window."""
    history = []
    smoothed = None
    out = []
    for frame in frames:
        if smoothed is None:
            smoothed = [float(v) for v in frame.channels]
        else:
            smoothed = [
                (1 - alpha) * prev + alpha * x
                for prev, x in zip(smoothed, frame.channels)
            ]
        history.append((frame.t_rel, list(smoothed)))
        cutoff = frame.t_rel - window
        out.append(
            [
                max(values[ch] for t, values in history if t > cutoff)
                for ch in range(5)
            ]
        )
    return out


def test_ewma_examples():
    assert ewma_step(100.0, 200.0, 0.2) == 120.0
    assert ewma_step(7.0, 42.0, 1.0) == 42.0


@given(st.floats(-1e6, 1e6), st.floats(0.01, 1.0))
def test_ewma_fixed_point_on_constant(c, alpha):
    assert ewma_step(c, c, alpha) == pytest.approx(c)


def test_ewma_alpha_range():
    with pytest.raises(ValueError, match="alpha"):
        ewma_step(1.0, 2.0, 0.0)
    with pytest.raises(ValueError, match="alpha"):
        ewma_step(1.0, 2.0, 1.5)


def test_config_validation():
    with pytest.raises(ValueError):
        BaselineConfig(alpha=0.0)
    with pytest.raises(ValueError):
        BaselineConfig(window=0.0)


def test_first_frame_initializes_to_reading():
    trace = make_trace([[800, 10, 500, 1023, 0]], [R])
    tracker = BaselineTracker()
    assert tracker.update(trace.frames[0]) == [800, 10, 500, 1023, 0]


def test_constant_stream_is_fixed_point():
    trace = make_trace(flat_rows(800, 300), [R] * 300)
    tracker = BaselineTracker()
    for frame in trace.frames:
        assert tracker.update(frame) == [800.0] * 5


def test_step_down_decays_to_new_level():
    # 900 for 2s, then 600 held for 10s: baseline must settle at 600
    rows = flat_rows(900, 100) + flat_rows(600, 500)
    trace = make_trace(rows, [R] * 600)
    cfg = BaselineConfig()
    tracker = BaselineTracker(cfg)
    got = [tracker.update(frame) for frame in trace.frames]
    expected = brute_force_baselines(trace.frames, cfg.alpha, cfg.window)
    assert np.allclose(got, expected, atol=1e-12, rtol=0)
    assert got[0] == [900.0] * 5
    assert all(abs(v - 600.0) < 1e-6 for v in got[-1])


@settings(deadline=None, max_examples=40)
@given(
    st.integers(0, 2**32 - 1),
    st.integers(1, 250),
    st.floats(0.05, 1.0),
    st.sampled_from([0.1, 0.5, 1.0, 4.0]),
)
def test_oracle_equivalence_random_streams(seed, n, alpha, window):
    rng = np.random.default_rng(seed)
    trace = make_trace(random_rows(rng, n), [R] * n)
    cfg = BaselineConfig(alpha=alpha, window=window)
    tracker = BaselineTracker(cfg)
    got = [tracker.update(frame) for frame in trace.frames]
    expected = brute_force_baselines(trace.frames, alpha, window)
    assert np.allclose(got, expected, atol=1e-12, rtol=0)


@given(st.integers(0, 2**32 - 1), st.integers(1, 150))
def test_baseline_at_least_current_smoothed(seed, n):
    rng = np.random.default_rng(seed)
    trace = make_trace(random_rows(rng, n), [R] * n)
    tracker = BaselineTracker()
    for frame in trace.frames:
        baselines = tracker.update(frame)
        for b, s in zip(baselines, tracker.smoothed):
            assert b >= s - 1e-12


def test_baseline_equals_smoothed_on_rising_input():
    # rising readings give a non-decreasing smoothed sequence, so the window
    # max is exactly the newest smoothed value
    rows = [[i * 5] * 5 for i in range(200)]
    trace = make_trace(rows, [R] * 200)
    tracker = BaselineTracker()
    for frame in trace.frames:
        baselines = tracker.update(frame)
        assert baselines == tracker.smoothed


def test_square_wave_keeps_relax_plateau_estimate():
    # relax 900 for 6s, dip to 600 for 2s (shorter than the 4s window)
    rows = flat_rows(900, 300) + flat_rows(600, 100) + flat_rows(900, 300)
    trace = make_trace(rows, [R] * 700)
    tracker = BaselineTracker()
    plateau_end_smoothed = None
    for i, frame in enumerate(trace.frames):
        baselines = tracker.update(frame)
        if i == 299:
            plateau_end_smoothed = tracker.smoothed[0]
        if 300 <= i < 400:
            assert baselines[0] >= plateau_end_smoothed - 1e-12


def test_non_monotonic_timestamp_rejected():
    tracker = BaselineTracker()
    trace = make_trace(flat_rows(10, 2), [R, R])
    tracker.update(trace.frames[1])
    with pytest.raises(ValueError, match="non-monotonic"):
        tracker.update(trace.frames[0])
