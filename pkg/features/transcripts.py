"""
전사 데이터 모델, 토큰화, small/large ASR 전사 파일 로드
"""

import logging
import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from utils.errors import ConfidenceRangeError, SessionMismatchError, TranscriptSchemaError

logger = logging.getLogger(__name__)


# 토큰 양끝에서 제거할 문장부호 (ASCII + 유니코드 따옴표/줄표)
_EDGE_PUNCT = "!\"#$%&'()*+,./:;<=>?@[\\]^_`{|}~“”‘’«»…–—"
_HEADER = re.compile(r"^#session=(?P<session>\S+)\s+model=(?P<model>\S+)\s*$")


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    confidence: Optional[float] = None


@dataclass(frozen=True)
class SessionTranscripts:
    """세션 1개의 small/large 모델 전사"""

    session_id: str
    small: Tuple[Token, ...] = field(default_factory=tuple)
    large: Tuple[Token, ...] = field(default_factory=tuple)
    model_small_name: str = "small"
    model_large_name: str = "large"

    def normalized(self, model: str = "large") -> List[str]:
        """정규화된 토큰 목록 (model: "small" 또는 "large")"""
        if model not in ("small", "large"):
            raise ValueError(f"model 은 'small' 또는 'large' 이어야 합니다: {model!r}")
        tokens = self.small if model == "small" else self.large
        return [t.normalized for t in tokens]


def normalize_piece(piece: str) -> str:
    return piece.strip(_EDGE_PUNCT).lower()


def tokenize(raw: str, confidence: Optional[float] = None) -> List[Token]:
    """
    원문 텍스트 토큰화

    공백으로 나눈 뒤 하이픈으로 한 번 더 나누고, 양끝 문장부호를 제거해 소문자로 정규화한다.
    단어 안의 아포스트로피("don't")는 유지한다. 정규화 결과가 빈 토큰은 버린다.

    Args:
        raw: 원문
        confidence: 모든 토큰에 붙일 confidence (없으면 None)

    Returns:
        Token 목록 (원래 순서 유지)
    """
    tokens = []
    for chunk in raw.split():
        for piece in chunk.split("-"):
            norm = normalize_piece(piece)
            if norm:
                tokens.append(Token(surface=piece, normalized=norm, confidence=confidence))
    return tokens


class _TokenRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    surface: str = Field(min_length=1)
    confidence: Optional[float] = None


def read_transcript(path: str) -> Tuple[str, str, List[Token]]:
    """
    전사 파일 1개 로드

    형식: 첫 줄 `#session=<id> model=<name>`, 이후 한 줄에 토큰 하나 `surface<TAB>confidence`
    (confidence 는 생략 가능)

    Returns:
        (session_id, model_name, tokens)
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
    except UnicodeDecodeError as e:
        raise TranscriptSchemaError(f"{path}: UTF-8 이 아닙니다 ({e})")

    if not lines:
        raise TranscriptSchemaError(f"{path}: 헤더가 없습니다")
    header = _HEADER.match(lines[0].strip())
    if header is None:
        raise TranscriptSchemaError(
            f"{path}: 헤더 형식은 '#session=<id> model=<name>' 이어야 합니다: {lines[0]!r}"
        )

    tokens: List[Token] = []
    record_index = 0
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) > 2:
            raise TranscriptSchemaError(f"{path}:{line_no}: 필드가 너무 많습니다 ({len(parts)})")
        conf_text = parts[1].strip() if len(parts) == 2 else ""
        try:
            record = _TokenRecord(
                surface=parts[0].strip(),
                confidence=float(conf_text) if conf_text else None,
            )
        except (ValueError, ValidationError) as e:
            raise TranscriptSchemaError(f"{path}:{line_no}: 토큰 레코드 오류: {e}")

        if record.confidence is not None and not 0.0 <= record.confidence <= 1.0:
            raise ConfidenceRangeError(
                f"{path}:{line_no}: 토큰 {record_index} 의 confidence {record.confidence} 가 [0, 1] 밖입니다",
                token_index=record_index,
            )
        tokens.extend(tokenize(record.surface, confidence=record.confidence))
        record_index += 1

    return header.group("session"), header.group("model"), tokens


def load_session_transcripts(path_small: str, path_large: str) -> SessionTranscripts:
    """small/large 전사 파일 쌍 로드 (session id 가 같아야 함)"""
    small_session, small_model, small_tokens = read_transcript(path_small)
    large_session, large_model, large_tokens = read_transcript(path_large)
    if small_session != large_session:
        raise SessionMismatchError(
            f"session id 불일치: {path_small}={small_session!r}, {path_large}={large_session!r}"
        )
    logger.debug(
        "전사 로드: %s (small %d 토큰, large %d 토큰)",
        small_session, len(small_tokens), len(large_tokens),
    )
    return SessionTranscripts(
        session_id=small_session,
        small=tuple(small_tokens),
        large=tuple(large_tokens),
        model_small_name=small_model,
        model_large_name=large_model,
    )
