"""
공용 테스트 빌더 (합성 신호, 전사 파일, 임베딩 표, 코호트 CSV)
"""

import os
import sys
from datetime import date, timedelta
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pytest

# 루트 패키지(utils, features, analysis, cli) import 경로
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from features.audio import Recording  # noqa: E402
from utils.config import SEED_WORDS  # noqa: E402
from utils.wav_io import encode_wav  # noqa: E402


def sine(freq_hz: float, sr: int, duration_s: float, amp: float = 0.5) -> np.ndarray:
    t = np.arange(int(round(duration_s * sr))) / sr
    return amp * np.sin(2 * np.pi * freq_hz * t)


def pulse_train(periods: Sequence[int], amps: Sequence[float], n_pulses: int, sr: int = 16000) -> Recording:
    """
    Hann 펄스 열 (주기/진폭을 순환 사용), 샘플 단위 정수 주기
    """
    pulse = np.hanning(15)
    positions, pos = [], 40
    for i in range(n_pulses):
        positions.append(pos)
        pos += periods[i % len(periods)]
    x = np.zeros(pos + 40)
    for i, p in enumerate(positions):
        x[p - 7:p + 8] += amps[i % len(amps)] * pulse
    return Recording(samples=x, sample_rate_hz=sr)


def hann_bursts(n_bursts: int, slot_s: float, sr: int = 16000, freq_hz: float = 200.0,
                burst_s: Optional[float] = None) -> Recording:
    """slot_s 간격 슬롯마다 Hann 포락선 사인 버스트 (burst_s 가 없으면 슬롯 전체)"""
    burst_s = burst_s or slot_s
    slot = int(round(slot_s * sr))
    burst = int(round(burst_s * sr))
    tone = sine(freq_hz, sr, burst_s, amp=0.8)[:burst] * np.hanning(burst)
    x = np.zeros(slot * n_bursts)
    for i in range(n_bursts):
        x[i * slot:i * slot + burst] = tone
    return Recording(samples=x, sample_rate_hz=sr)


def write_transcript(path: Path, session_id: str, model: str, words: Sequence[str],
                     confidences: Optional[Sequence[Optional[float]]] = None) -> Path:
    lines = [f"#session={session_id} model={model}"]
    for i, w in enumerate(words):
        c = None if confidences is None else confidences[i]
        lines.append(w if c is None else f"{w}\t{c}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_embeddings(path: Path, table: Dict[str, Sequence[float]]) -> Path:
    lines = [" ".join([w, *(repr(float(v)) for v in vec)]) for w, vec in table.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def seed_table(extra: Optional[Dict[str, Sequence[float]]] = None, dim: int = 12, seed: int = 7) -> Dict[str, List[float]]:
    """시드 단어 10개 + 그림 묘사 단어가 들어 있는 랜덤 임베딩 표"""
    rng = np.random.default_rng(seed)
    words = list(SEED_WORDS) + ["the", "boy", "is", "looking", "at", "cookie", "jar", "mother", "water"]
    table = {w: rng.normal(size=dim).tolist() for w in words}
    table.update(extra or {})
    return table


@pytest.fixture
def embeddings_file(tmp_path):
    return write_embeddings(tmp_path / "vectors.txt", seed_table())


class CohortBuilder:
    """participants.csv / ecas.csv / sessions.csv 와 세션 파일을 만드는 빌더"""

    def __init__(self, root: Path):
        self.root = root
        self.participants: List[str] = []
        self.ecas: List[str] = []
        self.sessions: List[str] = []

    def add_participant(self, pid: str, group: str = "ALS", sex: str = "F", age: float = 60.0,
                        education: float = 12.0, alsfrs_total: str = "40", alsfrs_speech: str = "3"):
        self.participants.append(f"{pid},{group},{sex},{age},{education},{alsfrs_total},{alsfrs_speech}")

    def add_ecas(self, pid: str, test_date: date, total: float, memory: float = 20.0,
                 language: float = 20.0, verbal_fluency: float = 15.0, executive: float = 30.0,
                 visuospatial: float = 12.0):
        self.ecas.append(
            f"{pid},{test_date.isoformat()},{language},{verbal_fluency},{executive},{memory},{visuospatial},{total}"
        )

    def add_session(self, sid: str, pid: str, record_date: date, wav: Optional[bytes] = None,
                    words: Sequence[str] = ("the", "boy", "is", "looking", "at", "the", "cookie", "jar")):
        audio = self.root / f"{sid}.wav"
        audio.write_bytes(wav if wav is not None else encode_wav(sine(200.0, 16000, 1.0), 16000))
        write_transcript(self.root / f"{sid}_small.txt", sid, "small", list(words)[:-1], [0.8] * (len(words) - 1))
        write_transcript(self.root / f"{sid}_large.txt", sid, "large", list(words), [0.95] * len(words))
        self.sessions.append(f"{sid},{pid},{record_date.isoformat()},{sid}.wav,{sid}_small.txt,{sid}_large.txt")

    def write(self) -> Dict[str, Path]:
        paths = {
            "participants": self.root / "participants.csv",
            "ecas": self.root / "ecas.csv",
            "sessions": self.root / "sessions.csv",
        }
        paths["participants"].write_text(
            "id,group,sex,age_years,education_years,alsfrs_total,alsfrs_speech\n"
            + "".join(line + "\n" for line in self.participants), encoding="utf-8")
        paths["ecas"].write_text(
            "participant_id,test_date,language,verbal_fluency,executive,memory,visuospatial,total\n"
            + "".join(line + "\n" for line in self.ecas), encoding="utf-8")
        paths["sessions"].write_text(
            "session_id,participant_id,record_date,audio_path,small_transcript,large_transcript\n"
            + "".join(line + "\n" for line in self.sessions), encoding="utf-8")
        return paths


@pytest.fixture
def cohort_builder(tmp_path):
    return CohortBuilder(tmp_path)


def days(n: int) -> timedelta:
    return timedelta(days=n)
