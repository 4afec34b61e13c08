"""
코호트 데이터 모델과 연구 분석
참가자/세션/ECAS 점수, ±60일 매칭, 기준값 이상 판정, 인구통계 요약과 상관표
"""

import logging
from datetime import date
from typing import Dict, Iterable, List, Literal, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, model_validator

from utils.config import DEFAULT_MAXIMA, SCORE_NAMES
from utils.errors import DuplicateSessionError, EmptyGroupError, UnknownParticipantError

logger = logging.getLogger(__name__)

GROUPS = ("ALS", "non-ALS")
SUMMARY_VARIABLES = ("age_years", "education_years", "alsfrs_r_total", "alsfrs_r_speech")
CORRELATION_VARIABLES = ("age_years", "education_years", "alsfrs_r_speech", "alsfrs_r_total")
SUB_SCORES = tuple(s for s in SCORE_NAMES if s != "total")

class Participant(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(min_length=1)
    group: Literal["ALS", "non-ALS"]
    sex: Literal["F", "M"]
    age_years: float = Field(ge=0)
    education_years: float = Field(ge=0)
    alsfrs_r_total: Optional[int] = Field(default=None, ge=0, le=48)
    alsfrs_r_speech: Optional[int] = Field(default=None, ge=0, le=4)


class EcasScores(BaseModel):
    """ECAS 하위 점수와 총점 (점수가 낮을수록 손상)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    participant_id: str = Field(min_length=1)
    test_date: date
    language: Optional[float] = Field(default=None, ge=0)
    verbal_fluency: Optional[float] = Field(default=None, ge=0)
    executive: Optional[float] = Field(default=None, ge=0)
    memory: Optional[float] = Field(default=None, ge=0)
    visuospatial: Optional[float] = Field(default=None, ge=0)
    total: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _within_maxima(self, info: ValidationInfo) -> 'EcasScores':
        # context={"maxima": {...}} 로 검사 판본별 만점을 넘긴다
        maxima = (info.context or {}).get("maxima", DEFAULT_MAXIMA)
        for name, limit in maxima.items():
            value = getattr(self, name)
            if value is not None and value > limit:
                raise ValueError(f"{name}={value} 가 만점 {limit} 을 넘습니다")
        return self

    @model_validator(mode="after")
    def _total_bounds_sub_scores(self) -> 'EcasScores':
        if self.total is not None:
            for name in SUB_SCORES:
                value = getattr(self, name)
                if value is not None and value > self.total:
                    raise ValueError(f"{name}={value} 가 total={self.total} 보다 큽니다")
        return self

    def score(self, name: str) -> Optional[float]:
        return getattr(self, name)


class Session(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    session_id: str = Field(min_length=1)
    participant_id: str = Field(min_length=1)
    record_date: date
    audio_path: str
    small_transcript: str
    large_transcript: str


def match_sessions(
    sessions: Sequence[Session],
    ecas: Mapping[str, EcasScores],
    window_days: int = 60,
    known_participants: Optional[Iterable[str]] = None,
) -> Dict[str, List[Session]]:
    """
    ECAS 검사일 ±window_days (경계 포함) 안의 세션 선택

    Args:
        sessions: 전체 세션
        ecas: 참가자 id → ECAS 점수
        window_days: 허용 일수
        known_participants: 주어지면 모든 세션의 participant_id 가 여기에 있어야 함

    Returns:
        참가자 id → 선택된 세션 목록 (참가자 id, 녹음일 순 정렬). 매칭이 없는 참가자는 제외
    """
    seen = set()
    for s in sessions:
        if s.session_id in seen:
            raise DuplicateSessionError(f"중복 session_id: {s.session_id}")
        seen.add(s.session_id)

    if known_participants is not None:
        known = set(known_participants)
        unknown = sorted({s.participant_id for s in sessions} - known)
        if unknown:
            raise UnknownParticipantError(f"participants 에 없는 참가자의 세션: {unknown}")

    by_participant: Dict[str, List[Session]] = {}
    for s in sessions:
        by_participant.setdefault(s.participant_id, []).append(s)

    matched: Dict[str, List[Session]] = {}
    for pid in sorted(by_participant):
        scores = ecas.get(pid)
        if scores is None:
            logger.warning("참가자 %s 제외: ECAS 점수 없음", pid)
            continue
        selected = [
            s for s in by_participant[pid]
            if abs((s.record_date - scores.test_date).days) <= window_days
        ]
        if not selected:
            logger.warning("참가자 %s 제외: ECAS ±%d일 안의 녹음 없음", pid, window_days)
            continue
        matched[pid] = sorted(selected, key=lambda s: (s.record_date, s.session_id))

    logger.info("세션 매칭: 참가자 %d명, 세션 %d개", len(matched), sum(len(v) for v in matched.values()))
    return matched


def flag_abnormal(scores: EcasScores, cutoffs: Mapping[str, float]) -> Dict[str, Optional[bool]]:
    """점수 <= 기준값 이면 이상(True). 점수가 없으면 None"""
    flags: Dict[str, Optional[bool]] = {}
    for name, cutoff in cutoffs.items():
        value = scores.score(name)
        flags[name] = None if value is None else bool(value <= cutoff)
    return flags


def _format_mean_sd(mean: float, sd: float, n: int) -> str:
    text = f"{mean:.1f} +/- {sd:.1f}"
    return f"{text} (n=1)" if n == 1 else text


def cohort_summary(
    participants: Sequence[Participant],
    groups: Sequence[str] = GROUPS,
) -> pd.DataFrame:
    """
    그룹별 / 전체 인구통계 요약 (mean ± sd, 표본 표준편차)

    Returns:
        열: variable, group, n, mean, sd, text
    """
    frame = pd.DataFrame([p.model_dump() for p in participants])
    rows = []
    for group in [*groups, "overall"]:
        if group == "overall":
            subset = frame
        else:
            subset = frame[frame["group"] == group] if not frame.empty else frame
        if subset.empty:
            raise EmptyGroupError(f"참가자가 없는 그룹입니다: {group}")

        n = len(subset)
        rows.append({"variable": "participants", "group": group, "n": n,
                     "mean": np.nan, "sd": np.nan, "text": f"N={n}"})

        sex_counts = subset["sex"].value_counts()
        rows.append({"variable": "sex", "group": group, "n": n, "mean": np.nan, "sd": np.nan,
                     "text": f"F:{int(sex_counts.get('F', 0))}, M:{int(sex_counts.get('M', 0))}"})

        for variable in SUMMARY_VARIABLES:
            values = subset[variable].dropna().astype(float)
            if values.empty:
                rows.append({"variable": variable, "group": group, "n": 0,
                             "mean": np.nan, "sd": np.nan, "text": "n/a"})
                continue
            mean = float(values.mean())
            sd = float(values.std(ddof=1)) if len(values) > 1 else 0.0
            rows.append({"variable": variable, "group": group, "n": len(values),
                         "mean": mean, "sd": sd, "text": _format_mean_sd(mean, sd, len(values))})

    return pd.DataFrame(rows, columns=["variable", "group", "n", "mean", "sd", "text"])


def _score_frame(participants: Sequence[Participant], scores: Mapping[str, EcasScores]) -> pd.DataFrame:
    rows = []
    for p in sorted(participants, key=lambda p: p.id):
        s = scores.get(p.id)
        if s is None:
            continue
        row = p.model_dump()
        row.update({name: s.score(name) for name in SCORE_NAMES})
        rows.append(row)
    columns = [*Participant.model_fields, *SCORE_NAMES]
    return pd.DataFrame(rows, columns=columns)


def score_correlations(
    participants: Sequence[Participant],
    scores: Mapping[str, EcasScores],
    variables: Sequence[str] = CORRELATION_VARIABLES,
    score_names: Sequence[str] = SCORE_NAMES,
) -> pd.DataFrame:
    """
    점수 × 변수 Spearman 상관 (결측은 쌍별 제거, 쌍이 3개 미만이거나 상수면 NaN)

    Returns:
        index = score, columns = variables
    """
    frame = _score_frame(participants, scores)
    table = pd.DataFrame(index=list(score_names), columns=list(variables), dtype=float)
    for score in score_names:
        for variable in variables:
            pair = frame[[score, variable]].dropna().astype(float)
            if len(pair) < 3 or pair[score].nunique() < 2 or pair[variable].nunique() < 2:
                table.loc[score, variable] = np.nan
                continue
            table.loc[score, variable] = pair[score].corr(pair[variable], method="spearman")
    table.index.name = "score"
    return table


def score_descriptives(
    scores: Mapping[str, EcasScores],
    score_names: Sequence[str] = SCORE_NAMES,
    maxima: Optional[Mapping[str, float]] = None,
    cutoffs: Optional[Mapping[str, float]] = None,
) -> pd.DataFrame:
    """
    점수별 n / mean / sd / min / max 와 설정된 만점(max_possible), 기준값(cutoff)

    만점이나 기준값이 없는 점수는 NaN.
    """
    maxima = maxima or {}
    cutoffs = cutoffs or {}
    rows = []
    for name in score_names:
        values = pd.Series([s.score(name) for s in scores.values()], dtype=float).dropna()
        rows.append({
            "score": name,
            "n": len(values),
            "mean": values.mean() if len(values) else np.nan,
            "sd": values.std(ddof=1) if len(values) > 1 else (0.0 if len(values) == 1 else np.nan),
            "min": values.min() if len(values) else np.nan,
            "max": values.max() if len(values) else np.nan,
            "max_possible": maxima.get(name, np.nan),
            "cutoff": cutoffs.get(name, np.nan),
        })
    return pd.DataFrame(rows, columns=["score", "n", "mean", "sd", "min", "max", "max_possible", "cutoff"])


def flag_table(
    participants: Sequence[Participant],
    scores: Mapping[str, EcasScores],
    cutoffs: Mapping[str, float],
) -> pd.DataFrame:
    """참가자별 점수와 이상 판정 (외부 swarm plot 용 데이터)"""
    rows = []
    for p in sorted(participants, key=lambda p: p.id):
        s = scores.get(p.id)
        if s is None:
            continue
        row = {"participant_id": p.id, "group": p.group}
        row.update({name: s.score(name) for name in SCORE_NAMES})
        row.update({f"{name}_abnormal": flag for name, flag in flag_abnormal(s, cutoffs).items()})
        rows.append(row)
    columns = ["participant_id", "group", *SCORE_NAMES, *(f"{name}_abnormal" for name in cutoffs)]
    return pd.DataFrame(rows, columns=columns)


def abnormality_rates(
    participants: Sequence[Participant],
    scores: Mapping[str, EcasScores],
    cutoffs: Mapping[str, float],
    groups: Sequence[str] = GROUPS,
) -> pd.DataFrame:
    """그룹별 / 점수별 이상 비율(%)"""
    flags = flag_table(participants, scores, cutoffs)
    rows = []
    for name in cutoffs:
        for group in groups:
            column = flags.loc[flags["group"] == group, f"{name}_abnormal"].dropna()
            n = len(column)
            n_abnormal = int(column.astype(bool).sum())
            rows.append({
                "score": name,
                "group": group,
                "n": n,
                "n_abnormal": n_abnormal,
                "percent_abnormal": 100.0 * n_abnormal / n if n else np.nan,
            })
    return pd.DataFrame(rows, columns=["score", "group", "n", "n_abnormal", "percent_abnormal"])
