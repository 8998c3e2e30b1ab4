import io
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import E, F, O, R, T
from lightband.ingest import read_collection_csv, write_collection_csv
from lightband.simulate import (
    DEFAULT_PROFILES,
    FiberOptics,
    GestureProfile,
    SimConfig,
    attenuation_for_dip,
    critical_angle,
    read_profile_csv,
    read_script,
    refractive_index,
    synth_trace,
    transmitted_intensity,
    write_profile_csv,
)
from lightband.types import segment_trace

C_VACUUM = 299_792_458.0


def test_refractive_index_examples():
    assert refractive_index(C_VACUUM, C_VACUUM) == 1.0
    assert refractive_index(C_VACUUM, C_VACUUM / 1.444) == pytest.approx(1.444)
    with pytest.raises(ValueError, match="positive"):
        refractive_index(C_VACUUM, 0.0)
    with pytest.raises(ValueError, match="faster"):
        refractive_index(C_VACUUM, C_VACUUM * 1.01)


def test_critical_angle_glass_fiber():
    angle = critical_angle(1.444, 1.000350)
    assert angle == pytest.approx(43.85, abs=0.05)


def test_critical_angle_root_two():
    assert critical_angle(1.0, 1.0 / math.sqrt(2)) == pytest.approx(45.0)


def test_critical_angle_errors():
    with pytest.raises(ValueError, match="total internal reflection"):
        critical_angle(1.0, 1.0)
    with pytest.raises(ValueError, match="total internal reflection"):
        critical_angle(1.0, 1.5)
    with pytest.raises(ValueError, match="positive"):
        critical_angle(-1.0, 0.5)


def test_fiber_optics_invariant():
    fiber = FiberOptics(n_medium=1.444)
    assert fiber.critical_angle_deg() == pytest.approx(43.85, abs=0.05)
    with pytest.raises(ValueError):
        FiberOptics(n_medium=1.0)


def test_transmitted_intensity():
    assert transmitted_intensity(0.0, 0.5, 800) == 800
    k = attenuation_for_dip(800, -223.0)
    assert transmitted_intensity(1.0, k, 800) == 577
    assert transmitted_intensity(1e9, 0.5, 800) == 0
    with pytest.raises(ValueError, match="deflection"):
        transmitted_intensity(-1.0, 0.5, 800)


def test_transmitted_intensity_monotone():
    k = 0.3
    values = [transmitted_intensity(d / 10, k, 1000) for d in range(20)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_profile_validation():
    with pytest.raises(ValueError, match="scriptable"):
        GestureProfile(R, (-1.0, 0.0, 0.0, 0.0, 0.0))
    with pytest.raises(ValueError, match="nonzero"):
        GestureProfile(E, (0.0,) * 5)
    with pytest.raises(ValueError, match="5 deltas"):
        GestureProfile(E, (-1.0,))


def test_sim_config_validation():
    with pytest.raises(ValueError, match="positive"):
        SimConfig(gesture_hold=0.0)
    with pytest.raises(ValueError, match="baseline"):
        SimConfig(baseline_levels=(0.0, 500, 500, 500, 500))
    with pytest.raises(ValueError, match="5 baseline"):
        SimConfig(baseline_levels=(500, 500))


def test_empty_script_is_one_relax_hold():
    cfg = SimConfig(noise_sigma=0.0, drift=0.0)
    trace = synth_trace([], DEFAULT_PROFILES, cfg)
    assert len(trace) == round(cfg.relax_hold / cfg.sample_interval)
    assert all(label is R for label in trace.labels)
    assert all(f.channels == (340, 760, 650, 800, 930) for f in trace.frames)


def test_zero_noise_extend_plateau_matches_calibration():
    cfg = SimConfig(noise_sigma=0.0, drift=0.0, gesture_hold=1.0, relax_hold=1.0)
    trace = synth_trace([E], DEFAULT_PROFILES, cfg)
    segments = segment_trace(trace)
    assert [s[0] for s in segments] == [R, T, E, T]
    _, start, end = segments[2]
    plateau = {f.channels[3] for f in trace.frames[start:end]}
    assert plateau == {577}  # 800 relax level dipping by 223


def test_zero_noise_plateau_deltas_equal_profile():
    cfg = SimConfig(noise_sigma=0.0, drift=0.0, gesture_hold=1.0, relax_hold=1.0)
    trace = synth_trace([E, F, O], DEFAULT_PROFILES, cfg)
    segments = segment_trace(trace)
    profiles = {p.gesture: p for p in DEFAULT_PROFILES}
    for idx, (label, start, end) in enumerate(segments):
        if label not in profiles:
            continue
        _, r_start, r_end = segments[idx - 2]  # relax precedes the up-ramp
        for ch in range(5):
            relax_mean = sum(f.channels[ch] for f in trace.frames[r_start:r_end]) / (
                r_end - r_start
            )
            gesture_mean = sum(f.channels[ch] for f in trace.frames[start:end]) / (
                end - start
            )
            assert gesture_mean - relax_mean == profiles[label].deltas[ch]


def test_segment_structure_matches_script():
    cfg = SimConfig(gesture_hold=0.3, relax_hold=0.2, transition_time=0.1, seed=3)
    trace = synth_trace([E, F, O, E], DEFAULT_PROFILES, cfg)
    labels = [s[0] for s in segment_trace(trace)]
    assert labels == [R, T, E, T, R, T, F, T, R, T, O, T, R, T, E, T]


def test_determinism_under_seed():
    cfg = SimConfig(gesture_hold=0.5, relax_hold=0.3, seed=42)
    a = synth_trace([E, F], DEFAULT_PROFILES, cfg)
    b = synth_trace([E, F], DEFAULT_PROFILES, cfg)
    assert a.frames == b.frames and a.labels == b.labels
    c = synth_trace([E, F], DEFAULT_PROFILES, SimConfig(gesture_hold=0.5, relax_hold=0.3, seed=43))
    assert c.frames != a.frames


@settings(deadline=None, max_examples=15)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 50.0), st.floats(0.0, 2.0))
def test_channels_always_in_range(seed, noise, drift):
    cfg = SimConfig(
        gesture_hold=0.3, relax_hold=0.2, transition_time=0.1,
        noise_sigma=noise, drift=drift, seed=seed,
        baseline_levels=(30.0, 990.0, 500.0, 800.0, 100.0),
    )
    profiles = (
        GestureProfile(E, (-25.0, -100.0, -300.0, -223.0, 20.0)),
        GestureProfile(F, (10.0, 30.0, -400.0, -100.0, -90.0)),
    )
    trace = synth_trace([E, F], profiles, cfg)
    for frame in trace.frames:
        assert all(0 <= v <= 1023 for v in frame.channels)


def test_missing_profile_error():
    with pytest.raises(ValueError, match="no profile"):
        synth_trace([O], DEFAULT_PROFILES[:2], SimConfig())


def test_out_of_range_configuration_error():
    cfg = SimConfig(baseline_levels=(100.0, 760.0, 650.0, 800.0, 930.0))
    profiles = (GestureProfile(E, (-150.0, -150.0, -180.0, -223.0, -12.0)),)
    with pytest.raises(ValueError, match="channel 1"):
        synth_trace([E], profiles, cfg)


def test_generated_trace_round_trips_through_csv():
    cfg = SimConfig(gesture_hold=0.3, relax_hold=0.2, transition_time=0.1, seed=11)
    trace = synth_trace([E, O], DEFAULT_PROFILES, cfg)
    sink = io.StringIO()
    write_collection_csv(trace, sink)
    back = read_collection_csv(io.StringIO(sink.getvalue()))
    assert back.frames == trace.frames
    assert back.labels == trace.labels


def test_read_script():
    assert read_script(io.StringIO("extend\nfist\n\none\n")) == [E, F, O]
    with pytest.raises(ValueError, match="line 2"):
        read_script(io.StringIO("extend\nrelax\n"))
    with pytest.raises(ValueError, match="line 1"):
        read_script(io.StringIO("wave\n"))


def test_profile_csv_round_trip():
    sink = io.StringIO()
    write_profile_csv(DEFAULT_PROFILES, sink)
    back = read_profile_csv(io.StringIO(sink.getvalue()))
    assert set(back) == set(DEFAULT_PROFILES)
