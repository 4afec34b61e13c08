import numpy as np
import pytest
from scipy.signal.windows import tukey

from features.audio import (
    Recording, acoustic_summary, hnr_track, intensity_track, jitter_shimmer,
    pitch_track, syllable_nuclei,
)
from utils.errors import ConfigError, RecordingTooShortError

from conftest import hann_bursts, pulse_train, sine


def _rec(x, sr):
    return Recording(samples=x, sample_rate_hz=sr)


def test_sine_440_median_f0():
    track = pitch_track(_rec(sine(440.0, 44100, 1.0), 44100))
    f0 = track.defined_values()
    assert f0.size > 0.9 * len(track)
    assert abs(np.median(f0) - 440.0) <= 2.0


@pytest.mark.parametrize("sr", [8000, 16000, 44100])
@pytest.mark.parametrize("freq", [100.0, 250.0, 400.0])
def test_f0_tracks_sines_across_rates(sr, freq):
    f0 = pitch_track(_rec(sine(freq, sr, 0.5), sr)).defined_values()
    assert f0.size > 0
    assert abs(np.median(f0) - freq) / freq < 0.01


def test_frame_count_follows_window_and_hop():
    track = pitch_track(_rec(sine(200.0, 16000, 1.0), 16000))
    assert len(track) == (16000 - 640) // 160 + 1
    assert len(intensity_track(_rec(sine(200.0, 16000, 1.0), 16000))) == len(track)


def test_white_noise_is_mostly_unvoiced():
    rng = np.random.default_rng(3)
    track = pitch_track(_rec(0.01 * rng.standard_normal(16000), 16000))
    assert np.mean(track.defined_mask) <= 0.1


def test_silence_has_undefined_voice_measures():
    summary = acoustic_summary(_rec(np.zeros(16000), 16000))
    assert summary["voiced_ratio"] == 0.0
    assert summary["speech_rate"] == 0.0
    assert summary["f0_mean"] is None
    assert summary["jitter_local"] is None
    assert summary["shimmer_local"] is None
    assert summary["hnr_mean"] is None
    assert summary["total_pause_s"] == pytest.approx(summary["duration_s"])
    assert summary["phonation_time_s"] == 0.0
    assert summary["articulation_rate"] is None


def test_periodic_pulse_train_has_no_jitter():
    r = pulse_train([80], [1.0], n_pulses=100)
    jitter, shimmer = jitter_shimmer(r, pitch_track(r))
    assert jitter is not None and jitter < 1e-3
    assert shimmer is not None and shimmer < 1e-3


def test_alternating_periods_jitter():
    r = pulse_train([80, 88], [1.0], n_pulses=101)
    jitter, _ = jitter_shimmer(r, pitch_track(r))
    assert jitter == pytest.approx(0.0952, abs=0.005)


def test_alternating_amplitudes_shimmer():
    r = pulse_train([80], [1.0, 0.8], n_pulses=100)
    jitter, shimmer = jitter_shimmer(r, pitch_track(r))
    assert shimmer == pytest.approx(0.2 / 0.9, abs=0.005)
    assert jitter < 1e-3


def test_too_few_periods_gives_undefined_jitter():
    r = _rec(np.zeros(16000), 16000)
    assert jitter_shimmer(r, pitch_track(r)) == (None, None)


def test_hnr_of_sine_in_equal_power_noise_is_near_zero_db():
    sr = 44100
    rng = np.random.default_rng(11)
    clean = sine(440.0, sr, 1.0, amp=0.5)
    noisy = clean + rng.normal(scale=0.5 / np.sqrt(2.0), size=clean.size)
    noisy /= np.max(np.abs(noisy))
    r = _rec(noisy, sr)
    hnr = hnr_track(r, pitch_track(r)).defined_values()
    assert hnr.size > 0
    assert abs(np.mean(hnr)) <= 3.0


def test_hnr_of_pure_sine_is_high_and_bounded():
    r = _rec(sine(300.0, 16000, 0.5), 16000)
    hnr = hnr_track(r, pitch_track(r)).defined_values()
    assert np.all(hnr <= 60.0)
    assert np.mean(hnr) > 30.0


def test_hnr_is_undefined_on_unvoiced_frames():
    r = _rec(np.zeros(8000), 16000)
    assert hnr_track(r, pitch_track(r)).defined_values().size == 0


def test_five_bursts_give_five_nuclei():
    r = hann_bursts(5, slot_s=0.45, burst_s=0.15)
    count, times = syllable_nuclei(r, pitch_track(r))
    assert abs(count - 5) <= 1
    assert times == sorted(times)


def test_steady_sine_is_one_nucleus():
    r = _rec(sine(200.0, 16000, 1.0), 16000)
    count, _ = syllable_nuclei(r, pitch_track(r))
    assert count == 1


def test_one_second_gap_is_one_pause():
    sr = 16000
    block = sine(200.0, sr, 1.0) * tukey(sr, alpha=0.05)
    x = np.concatenate([block, np.zeros(sr), block])
    summary = acoustic_summary(_rec(x, sr))
    assert summary["pause_count"] == 1.0
    assert summary["total_pause_s"] == pytest.approx(1.0, abs=0.1)
    assert summary["phonation_time_s"] == pytest.approx(2.0, abs=0.1)
    assert summary["duration_s"] == pytest.approx(3.0)


def test_speech_and_articulation_rate_without_pauses():
    r = hann_bursts(10, slot_s=0.5)
    summary = acoustic_summary(r)
    assert summary["syllable_count"] == 10.0
    assert summary["pause_count"] == 0.0
    assert summary["mean_pause_s"] is None
    assert summary["speech_rate"] == pytest.approx(2.0, abs=0.2)
    assert summary["articulation_rate"] == pytest.approx(2.0, abs=0.2)


def test_summary_is_deterministic():
    r = hann_bursts(3, slot_s=0.4, burst_s=0.2)
    assert acoustic_summary(r) == acoustic_summary(r)


def test_recording_shorter_than_a_frame_is_rejected():
    with pytest.raises(RecordingTooShortError):
        pitch_track(_rec(np.zeros(100), 16000))


def test_invalid_pitch_range_is_rejected():
    with pytest.raises(ValueError):
        pitch_track(_rec(sine(200.0, 16000, 0.2), 16000), fmin_hz=300.0, fmax_hz=200.0)


def test_recording_rejects_low_sample_rate():
    with pytest.raises(ValueError):
        Recording(samples=np.zeros(100), sample_rate_hz=4000)


def test_pitch_range_too_narrow_for_the_window_is_a_config_error():
    sr = 8000
    with pytest.raises(ConfigError):
        pitch_track(_rec(0.5 * sine(22.0, sr, 1.0), sr), fmin_hz=20.0, fmax_hz=25.0)


def test_recording_rejects_samples_outside_unit_range():
    with pytest.raises(ValueError):
        Recording(samples=np.full(1000, 1.5), sample_rate_hz=16000)


@pytest.mark.parametrize("scale", [0.1, 0.3, 1.0])
def test_voiced_ratio_does_not_depend_on_level(scale):
    r = hann_bursts(4, slot_s=0.4, burst_s=0.2)
    reference = float(np.mean(pitch_track(r).defined_mask))
    scaled = _rec(scale * r.samples, r.sample_rate_hz)
    assert float(np.mean(pitch_track(scaled).defined_mask)) == pytest.approx(reference)
