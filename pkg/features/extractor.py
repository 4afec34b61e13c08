"""
세션 × 특징 세트 단위 특징 추출기
실패 격리는 호출 측(safe_runner.run_isolated)이 맡는다
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

from analysis.cohort import Session
from utils.config import RunConfig, validate_feature_set
from utils.errors import ConfigError
from .audio import acoustic_summary, load_recording
from .intelligibility import intelligibility_features
from .lexgraph import windowed_metrics
from .psycholing import PosTagger, psycholinguistic_features
from .semantics import EmbeddingTable, action_word_features
from .transcripts import SessionTranscripts, load_session_transcripts

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureVector:
    """세션 1개 × 특징 세트 1개의 특징 맵"""

    session_id: str
    participant_id: str
    feature_set: str
    features: Dict[str, Optional[float]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "session_id": self.session_id,
            "participant_id": self.participant_id,
            "feature_set": self.feature_set,
            "features": dict(self.features),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'FeatureVector':
        return cls(
            session_id=payload["session_id"],
            participant_id=payload["participant_id"],
            feature_set=payload["feature_set"],
            features=dict(payload["features"]),
        )


class SessionExtractor:
    """세션 특징 추출기 (설정/임베딩/태거는 공유 읽기 전용)"""

    def __init__(
        self,
        config: RunConfig,
        embeddings: Optional[EmbeddingTable] = None,
        tagger: Optional[PosTagger] = None,
    ):
        self.config = config
        self.embeddings = embeddings
        self.tagger = tagger

    def _transcripts(self, session: Session) -> SessionTranscripts:
        st = load_session_transcripts(session.small_transcript, session.large_transcript)
        if st.session_id != session.session_id:
            logger.warning(
                "전사 헤더 session id(%s)가 sessions.csv(%s)와 다릅니다",
                st.session_id, session.session_id,
            )
        return st

    def extract(self, session: Session, feature_set: str) -> FeatureVector:
        """
        특징 세트 하나 추출 (실패 시 예외)

        Args:
            session: 세션
            feature_set: FEATURE_SETS 태그

        Returns:
            FeatureVector
        """
        validate_feature_set(feature_set)

        if feature_set == "acoustic":
            recording = load_recording(session.audio_path)
            features = acoustic_summary(
                recording,
                fmin_hz=self.config.pitch_floor_hz,
                fmax_hz=self.config.pitch_ceiling_hz,
            )
        else:
            st = self._transcripts(session)
            tokens = st.normalized("large")
            if feature_set == "intelligibility":
                features = intelligibility_features(st)
            elif feature_set == "psycholinguistic":
                features = psycholinguistic_features(tokens, self.tagger)
            elif feature_set == "graph":
                features = windowed_metrics(tokens, self.config.graph_windows)
            else:
                if self.embeddings is None:
                    raise ConfigError("action_words 특징에는 임베딩 파일(paths.embeddings)이 필요합니다")
                features = action_word_features(tokens, self.embeddings)

        return FeatureVector(
            session_id=session.session_id,
            participant_id=session.participant_id,
            feature_set=feature_set,
            features=features,
        )

