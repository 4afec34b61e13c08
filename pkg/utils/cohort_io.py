"""
코호트 CSV 로더 (participants / ecas / sessions)
행 단위로 pydantic 검증을 하고, 오류에는 파일:행 번호와 열 이름을 붙인다
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Type

import pandas as pd
from pydantic import BaseModel, ValidationError

from analysis.cohort import EcasScores, Participant, Session
from .config import DEFAULT_MAXIMA
from .errors import CohortFormatError

logger = logging.getLogger(__name__)


PARTICIPANT_COLUMNS = ("id", "group", "sex", "age_years", "education_years", "alsfrs_total", "alsfrs_speech")
ECAS_COLUMNS = (
    "participant_id", "test_date", "language", "verbal_fluency",
    "executive", "memory", "visuospatial", "total",
)
SESSION_COLUMNS = (
    "session_id", "participant_id", "record_date", "audio_path",
    "small_transcript", "large_transcript",
)

# CSV 열 이름 → 모델 필드 이름
_PARTICIPANT_RENAMES = {"alsfrs_total": "alsfrs_r_total", "alsfrs_speech": "alsfrs_r_speech"}


def _read_table(path: str, required: Sequence[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError:
        raise CohortFormatError(f"파일이 없습니다: {path}")
    except pd.errors.EmptyDataError:
        raise CohortFormatError(f"{path}: 빈 파일입니다 (헤더 행 필요)")
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise CohortFormatError(f"{path}: CSV 파싱 오류: {e}")

    frame.columns = [c.strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise CohortFormatError(f"{path}: 필수 열이 없습니다: {missing}")
    if frame.empty:
        raise CohortFormatError(f"{path}: 데이터 행이 없습니다")
    return frame


def _validate_rows(
    path: str,
    frame: pd.DataFrame,
    model: Type[BaseModel],
    renames: Dict[str, str] = None,
    context: Optional[Dict[str, Any]] = None,
) -> List[BaseModel]:
    renames = renames or {}
    records = []
    for offset, raw in enumerate(frame.to_dict(orient="records")):
        row_no = offset + 2  # 헤더가 1행
        values = {
            renames.get(k, k): (v.strip() or None)
            for k, v in raw.items()
            if renames.get(k, k) in model.model_fields
        }
        try:
            records.append(model.model_validate(values, context=context))
        except ValidationError as e:
            problems = "; ".join(
                f"열 {'.'.join(str(p) for p in err['loc']) or '(행)'}: {err['msg']}"
                for err in e.errors()
            )
            raise CohortFormatError(f"{path}:{row_no}: {problems}")
    return records


def load_participants(path: str) -> List[Participant]:
    frame = _read_table(path, PARTICIPANT_COLUMNS)
    participants = _validate_rows(path, frame, Participant, _PARTICIPANT_RENAMES)
    ids = [p.id for p in participants]
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    if duplicates:
        raise CohortFormatError(f"{path}: 중복 참가자 id: {duplicates}")
    logger.info("참가자 %d명 로드: %s", len(participants), path)
    return participants


def load_ecas(path: str, maxima: Optional[Mapping[str, float]] = None) -> Dict[str, EcasScores]:
    """ecas.csv → 참가자 id → EcasScores (참가자당 한 행, 하위 점수는 maxima 이하)"""
    frame = _read_table(path, ECAS_COLUMNS)
    scores: Dict[str, EcasScores] = {}
    for row_no, record in enumerate(_validate_rows(path, frame, EcasScores, context={"maxima": dict(maxima or DEFAULT_MAXIMA)}), start=2):
        if record.participant_id in scores:
            raise CohortFormatError(f"{path}:{row_no}: 참가자 {record.participant_id} 의 ECAS 행이 중복됩니다")
        scores[record.participant_id] = record
    logger.info("ECAS 점수 %d건 로드: %s", len(scores), path)
    return scores


def load_sessions(path: str) -> List[Session]:
    """
    sessions.csv 로드

    audio/transcript 상대 경로는 sessions.csv 가 있는 디렉터리 기준으로 바꾼다.
    """
    frame = _read_table(path, SESSION_COLUMNS)
    base = Path(path).resolve().parent
    sessions = []
    for s in _validate_rows(path, frame, Session):
        resolved = {
            key: str(Path(value) if Path(value).is_absolute() else base / value)
            for key, value in (
                ("audio_path", s.audio_path),
                ("small_transcript", s.small_transcript),
                ("large_transcript", s.large_transcript),
            )
        }
        sessions.append(s.model_copy(update=resolved))
    logger.info("세션 %d개 로드: %s", len(sessions), path)
    return sessions
