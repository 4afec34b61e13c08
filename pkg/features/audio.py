"""
음향 특징 추출
운율(피치/강도), 음질(jitter/shimmer), 잡음(HNR), 발화 속도(음절 핵/휴지) 요약
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import next_fast_len
from scipy.signal import find_peaks, get_window

from utils.errors import ConfigError, RecordingTooShortError
from utils.wav_io import MIN_SAMPLE_RATE_HZ, decode_wav, encode_wav

logger = logging.getLogger(__name__)


# 프레임 구성: 40 ms Hann 윈도, 10 ms hop
FRAME_WINDOW_S = 0.04
FRAME_HOP_S = 0.01

# 피치 탐색 기본값
DEFAULT_PITCH_FLOOR_HZ = 75.0
DEFAULT_PITCH_CEILING_HZ = 500.0
VOICING_THRESHOLD = 0.45
OCTAVE_COST = 0.01
SILENCE_THRESHOLD = 0.03  # 전체 최대 진폭 대비

# 주기 교란(jitter/shimmer) 측정 범위
SHORTEST_PERIOD_S = 0.0001
LONGEST_PERIOD_S = 0.02
MAX_PERIOD_FACTOR = 1.3
MAX_AMPLITUDE_FACTOR = 1.6

HNR_MIN_DB = -20.0
HNR_MAX_DB = 60.0
INTENSITY_FLOOR_DB = -120.0

# 음절 핵 / 휴지
NUCLEUS_RISE_DB = 2.0
NUCLEUS_MIN_DIP_DB = 2.0
NUCLEUS_MIN_GAP_S = 0.1
SILENCE_DROP_DB = 15.0
MIN_PAUSE_S = 0.3


AcousticSummary = Dict[str, Optional[float]]


@dataclass(frozen=True)
class Recording:
    """디코딩된 모노 PCM 녹음"""

    samples: np.ndarray
    sample_rate_hz: int
    source_path: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples 는 비어 있지 않은 1차원 배열이어야 합니다")
        if self.sample_rate_hz < MIN_SAMPLE_RATE_HZ:
            raise ValueError(f"sample_rate_hz 는 {MIN_SAMPLE_RATE_HZ} 이상이어야 합니다")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples 에 유한하지 않은 값이 있습니다")
        if np.max(np.abs(samples)) > 1.0:
            raise ValueError("samples 는 [-1, 1] 범위여야 합니다")
        object.__setattr__(self, "samples", samples)

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz


@dataclass(frozen=True)
class FrameTrack:
    """
    프레임 단위 트랙

    values 의 NaN 은 정의되지 않은 프레임(무성음 등)을 뜻한다.
    strengths 는 피치 트랙에서만 채워지는 프레임별 정규화 자기상관 최대값이다.
    """

    hop_s: float
    window_s: float
    values: np.ndarray
    strengths: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return self.values.size

    @property
    def defined_mask(self) -> np.ndarray:
        return ~np.isnan(self.values)

    def defined_values(self) -> np.ndarray:
        return self.values[self.defined_mask]

    def frame_times(self) -> np.ndarray:
        """프레임 중심 시각(초)"""
        return np.arange(self.values.size) * self.hop_s + self.window_s / 2.0


def parse_wav(blob: bytes, source_path: str = "") -> Recording:
    """WAV 바이트열 → Recording"""
    samples, sample_rate = decode_wav(blob)
    return Recording(samples=samples, sample_rate_hz=sample_rate, source_path=source_path)


def write_wav(samples: np.ndarray, sample_rate_hz: int, codec: str = "pcm16") -> bytes:
    """샘플 → WAV 바이트열 (parse_wav 의 역연산)"""
    return encode_wav(samples, sample_rate_hz, codec=codec)


def load_recording(path: str) -> Recording:
    with open(path, "rb") as f:
        return parse_wav(f.read(), source_path=path)


def _frame_geometry(r: Recording) -> Tuple[int, int, int]:
    """(window, hop, n_frames) 샘플 단위"""
    window = int(round(FRAME_WINDOW_S * r.sample_rate_hz))
    hop = int(round(FRAME_HOP_S * r.sample_rate_hz))
    if r.samples.size < window:
        raise RecordingTooShortError(
            f"녹음이 분석 프레임({FRAME_WINDOW_S * 1000:.0f} ms)보다 짧습니다: {r.duration_s:.3f} s"
        )
    n_frames = (r.samples.size - window) // hop + 1
    return window, hop, n_frames


def _frames(r: Recording) -> np.ndarray:
    window, hop, n_frames = _frame_geometry(r)
    return sliding_window_view(r.samples, window)[::hop][:n_frames]


def pitch_track(
    r: Recording,
    fmin_hz: float = DEFAULT_PITCH_FLOOR_HZ,
    fmax_hz: float = DEFAULT_PITCH_CEILING_HZ,
) -> FrameTrack:
    """
    자기상관 기반 F0 추적

    Hann 윈도 자기상관을 윈도 자기상관으로 나눠 보정하고, 후보 피크 중
    octave cost 를 뺀 강도가 가장 큰 lag 를 선택한다.

    Args:
        r: 녹음
        fmin_hz: 피치 하한
        fmax_hz: 피치 상한

    Returns:
        프레임별 F0(Hz) 트랙. 무성 프레임은 NaN
    """
    sr = r.sample_rate_hz
    if not 0 < fmin_hz < fmax_hz < sr / 2:
        raise ValueError(f"피치 범위 오류: 0 < {fmin_hz} < {fmax_hz} < {sr / 2}")

    frames = _frames(r)
    n_frames, window = frames.shape
    taper = get_window("hann", window)

    centered = frames - frames.mean(axis=1, keepdims=True)
    weighted = centered * taper
    nfft = next_fast_len(2 * window)
    power = np.abs(np.fft.rfft(weighted, nfft, axis=1)) ** 2
    acf = np.fft.irfft(power, nfft, axis=1)[:, :window]

    taper_acf = np.fft.irfft(np.abs(np.fft.rfft(taper, nfft)) ** 2, nfft)[:window]
    taper_acf = taper_acf / taper_acf[0]

    lag_min = max(2, int(np.floor(sr / fmax_hz)))
    lag_max = min(window - 2, int(np.ceil(sr / fmin_hz)))
    if lag_max < lag_min:
        raise ConfigError(
            f"피치 범위 {fmin_hz}-{fmax_hz} Hz 는 {FRAME_WINDOW_S * 1000:.0f} ms 분석 창으로 추적할 수 없습니다"
        )

    energy = acf[:, 0]
    has_energy = energy > 0
    safe_energy = np.where(has_energy, energy, 1.0)
    corr = acf[:, lag_min - 1:lag_max + 2] / safe_energy[:, None]
    corr = corr / taper_acf[lag_min - 1:lag_max + 2]

    left, mid, right = corr[:, :-2], corr[:, 1:-1], corr[:, 2:]
    is_peak = (mid > left) & (mid >= right)

    # 포물선 보간으로 lag / 피크 값 정밀화
    denom = left - 2.0 * mid + right
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = np.where(denom < 0, 0.5 * (left - right) / denom, 0.0)
    delta = np.clip(delta, -0.5, 0.5)
    peak_value = mid - 0.25 * (left - right) * delta
    lags = np.arange(lag_min, lag_max + 1)[None, :] + delta

    strength = peak_value - OCTAVE_COST * np.log2(fmin_hz * lags / sr)
    strength = np.where(is_peak, strength, -np.inf)
    best = np.argmax(strength, axis=1)
    rows = np.arange(n_frames)
    best_lag = lags[rows, best]
    best_value = np.where(np.isfinite(strength[rows, best]), peak_value[rows, best], np.nan)

    global_peak = np.max(np.abs(r.samples))
    local_peak = np.max(np.abs(frames), axis=1)
    loud_enough = local_peak >= SILENCE_THRESHOLD * global_peak if global_peak > 0 else np.zeros(n_frames, bool)

    voiced = has_energy & loud_enough & (best_value >= VOICING_THRESHOLD)
    f0 = np.where(voiced, sr / best_lag, np.nan)

    return FrameTrack(
        hop_s=FRAME_HOP_S,
        window_s=FRAME_WINDOW_S,
        values=f0,
        strengths=np.where(has_energy, best_value, np.nan),
    )


def intensity_track(r: Recording) -> FrameTrack:
    """프레임별 강도(dB, 바닥값 -120 dB)"""
    frames = _frames(r)
    taper = get_window("hann", frames.shape[1])
    centered = frames - frames.mean(axis=1, keepdims=True)
    power = np.sum((centered * taper) ** 2, axis=1) / np.sum(taper ** 2)
    db = 10.0 * np.log10(np.maximum(power, 10 ** (INTENSITY_FLOOR_DB / 10)))
    return FrameTrack(hop_s=FRAME_HOP_S, window_s=FRAME_WINDOW_S, values=db)


def _voiced_regions(pitch: FrameTrack, sr: int) -> List[Tuple[int, int, float]]:
    """유성 프레임 구간 → (시작 샘플, 끝 샘플, 구간 F0 중앙값)"""
    window = int(round(pitch.window_s * sr))
    hop = int(round(pitch.hop_s * sr))
    voiced = pitch.defined_mask
    regions = []
    i = 0
    while i < voiced.size:
        if not voiced[i]:
            i += 1
            continue
        j = i
        while j + 1 < voiced.size and voiced[j + 1]:
            j += 1
        regions.append((i * hop, j * hop + window, float(np.median(pitch.values[i:j + 1]))))
        i = j + 1
    return regions


def _glottal_pulses(segment: np.ndarray, sr: int, f0_hz: float) -> Tuple[np.ndarray, np.ndarray]:
    """구간 내 성문 펄스 시각(초)과 진폭"""
    top = segment.max()
    if top <= 0:
        return np.empty(0), np.empty(0)
    distance = max(1, int(0.4 * sr / f0_hz))
    peaks, _ = find_peaks(segment, distance=distance, height=0.3 * top)
    times, amps = [], []
    for p in peaks:
        a, b, c = segment[p - 1], segment[p], segment[p + 1]
        denom = a - 2.0 * b + c
        delta = 0.5 * (a - c) / denom if denom < 0 else 0.0
        times.append((p + delta) / sr)
        amps.append(b - 0.25 * (a - c) * delta)
    return np.asarray(times), np.asarray(amps)


def jitter_shimmer(r: Recording, pitch: FrameTrack) -> Tuple[Optional[float], Optional[float]]:
    """
    local jitter / local shimmer

    jitter = mean|T_i - T_{i-1}| / mean T, shimmer 는 펄스 진폭에 대해 같은 식.
    연속 주기가 3개 미만이면 (None, None).
    """
    sr = r.sample_rate_hz
    period_diffs, periods = [], []
    amp_diffs, amps_used = [], []

    for start, end, f0 in _voiced_regions(pitch, sr):
        times, amps = _glottal_pulses(r.samples[start:end], sr, f0)
        if times.size < 2:
            continue
        t = np.diff(times)
        valid = (t >= SHORTEST_PERIOD_S) & (t <= LONGEST_PERIOD_S)
        periods.extend(t[valid])

        for i in range(1, t.size):
            if valid[i] and valid[i - 1] and max(t[i], t[i - 1]) / min(t[i], t[i - 1]) <= MAX_PERIOD_FACTOR:
                period_diffs.append(abs(t[i] - t[i - 1]))

        for i in range(t.size):
            if not valid[i]:
                continue
            a0, a1 = amps[i], amps[i + 1]
            if min(a0, a1) > 0 and max(a0, a1) / min(a0, a1) <= MAX_AMPLITUDE_FACTOR:
                amp_diffs.append(abs(a1 - a0))
                amps_used.extend((a0, a1))

    if len(periods) < 3 or not period_diffs:
        return None, None

    jitter = float(np.mean(period_diffs) / np.mean(periods))
    shimmer = float(np.mean(amp_diffs) / np.mean(amps_used)) if amp_diffs else None
    return jitter, shimmer


def hnr_track(r: Recording, pitch: FrameTrack) -> FrameTrack:
    """유성 프레임별 HNR(dB) = 10·log10(r/(1-r)), [-20, 60] 으로 제한"""
    if pitch.strengths is None:
        raise ValueError("pitch_track 결과(strengths 포함)가 필요합니다")
    voiced = pitch.defined_mask
    s = np.clip(np.where(voiced, pitch.strengths, 0.5), 1e-12, 1.0 - 1e-12)
    hnr = np.clip(10.0 * np.log10(s / (1.0 - s)), HNR_MIN_DB, HNR_MAX_DB)
    return FrameTrack(
        hop_s=pitch.hop_s,
        window_s=pitch.window_s,
        values=np.where(voiced, hnr, np.nan),
    )


def syllable_nuclei(
    r: Recording,
    pitch: FrameTrack,
    intensity: Optional[FrameTrack] = None,
) -> Tuple[int, List[float]]:
    """
    음절 핵 검출

    강도 피크 중 (중앙값 + 2 dB) 이상, 피크 위치가 유성, 서로 100 ms 이상 떨어진 것.
    기준값은 강도 최대값을 넘지 않도록 제한해 유성 녹음이면 최소 한 개의 핵이 남는다.
    인접 핵 사이에 2 dB 이상의 골이 없으면 더 큰 쪽 하나로 합친다.

    Returns:
        (핵 개수, 핵 시각 목록)
    """
    if intensity is None:
        intensity = intensity_track(r)
    db = intensity.values
    voiced = pitch.defined_mask[:db.size]

    threshold = min(float(np.median(db)) + NUCLEUS_RISE_DB, float(db.max()))
    padded = np.concatenate(([INTENSITY_FLOOR_DB - 1.0], db, [INTENSITY_FLOOR_DB - 1.0]))
    distance = max(1, int(round(NUCLEUS_MIN_GAP_S / intensity.hop_s)))
    candidates, _ = find_peaks(padded, distance=distance)
    candidates = [p - 1 for p in candidates if db[p - 1] >= threshold and voiced[p - 1]]

    nuclei: List[int] = []
    for p in candidates:
        if not nuclei:
            nuclei.append(p)
            continue
        prev = nuclei[-1]
        dip = db[prev:p + 1].min()
        if min(db[prev], db[p]) - dip >= NUCLEUS_MIN_DIP_DB:
            nuclei.append(p)
        elif db[p] > db[prev]:
            nuclei[-1] = p

    times = intensity.frame_times()
    return len(nuclei), [float(times[p]) for p in nuclei]


def _pauses(pitch: FrameTrack, intensity: FrameTrack, duration_s: float) -> List[float]:
    """
    무성 또는 저강도(중앙값 - 15 dB 미만) 프레임이 0.3 s 넘게 이어진 구간들의 길이

    모든 프레임이 조용하면 녹음 전체를 휴지 하나로 본다.
    """
    db = intensity.values
    silent = db < np.median(db) - SILENCE_DROP_DB
    quiet = silent | ~pitch.defined_mask[:db.size]
    if quiet.all():
        return [duration_s] if duration_s > MIN_PAUSE_S else []

    durations = []
    run = 0
    for flag in np.append(quiet, False):
        if flag:
            run += 1
            continue
        if run * intensity.hop_s > MIN_PAUSE_S:
            durations.append(run * intensity.hop_s)
        run = 0
    return durations


def _describe(prefix: str, values: np.ndarray) -> AcousticSummary:
    if values.size == 0:
        return {f"{prefix}_{k}": None for k in ("mean", "sd", "p5", "p95")}
    return {
        f"{prefix}_mean": float(np.mean(values)),
        f"{prefix}_sd": float(np.std(values)),
        f"{prefix}_p5": float(np.percentile(values, 5)),
        f"{prefix}_p95": float(np.percentile(values, 95)),
    }


def acoustic_summary(
    r: Recording,
    fmin_hz: float = DEFAULT_PITCH_FLOOR_HZ,
    fmax_hz: float = DEFAULT_PITCH_CEILING_HZ,
) -> AcousticSummary:
    """
    녹음 1개의 음향 특징 맵

    정의되지 않는 값(무성 녹음의 jitter 등)은 0 이 아니라 None 으로 둔다.
    """
    pitch = pitch_track(r, fmin_hz, fmax_hz)
    intensity = intensity_track(r)
    hnr = hnr_track(r, pitch)
    jitter, shimmer = jitter_shimmer(r, pitch)
    n_syllables, _ = syllable_nuclei(r, pitch, intensity)
    pauses = _pauses(pitch, intensity, r.duration_s)

    duration = r.duration_s
    total_pause = float(sum(pauses))
    phonation = max(duration - total_pause, 0.0)

    summary: AcousticSummary = {}
    summary.update(_describe("f0", pitch.defined_values()))
    summary.update(_describe("intensity", intensity.values))
    summary.update(_describe("hnr", hnr.defined_values()))
    summary.update({
        "jitter_local": jitter,
        "shimmer_local": shimmer,
        "syllable_count": float(n_syllables),
        "speech_rate": n_syllables / duration,
        "articulation_rate": n_syllables / phonation if phonation > 0 else None,
        "voiced_ratio": float(np.mean(pitch.defined_mask)),
        "pause_count": float(len(pauses)),
        "mean_pause_s": total_pause / len(pauses) if pauses else None,
        "total_pause_s": total_pause,
        "phonation_time_s": phonation,
        "duration_s": duration,
    })
    logger.debug("음향 요약 완료: %s (%.2f s, 음절 %d)", r.source_path, duration, n_syllables)
    return summary
