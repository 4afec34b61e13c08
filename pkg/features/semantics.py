"""
행동어 의미 특징
발화 단어와 행동/비행동 시드 단어 사이의 임베딩 코사인 유사도 분포 요약
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.stats import kurtosis, skew

from utils.config import SEED_WORDS
from utils.errors import EmbeddingFormatError, SeedVocabularyError

logger = logging.getLogger(__name__)

FEATURE_PREFIX = "sem_"
DESCRIPTORS = ("min", "p5", "p50", "p95", "max", "iqr", "skewness", "kurtosis")


@dataclass(frozen=True)
class EmbeddingTable:
    """단어 → 벡터 표 (words: 단어 → vectors 행 번호)"""

    words: Dict[str, int]
    vectors: np.ndarray

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.words[word]]


def load_embeddings(path: str) -> EmbeddingTable:
    """
    단어 벡터 텍스트 파일 로드 (`word v1 v2 ... vd`)

    Args:
        path: 파일 경로

    Returns:
        EmbeddingTable (단어는 소문자화, 중복 단어는 마지막 행 사용)
    """
    words: Dict[str, int] = {}
    rows: List[np.ndarray] = []
    dimension = None

    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            parts = line.rstrip("\n").split(" ")
            if not line.strip():
                continue
            word, comps = parts[0].lower(), [c for c in parts[1:] if c]
            if not comps:
                raise EmbeddingFormatError(f"{path}:{line_no}: 벡터 성분이 없습니다")
            try:
                vec = np.array([float(c) for c in comps], dtype=np.float64)
            except ValueError:
                raise EmbeddingFormatError(f"{path}:{line_no}: 숫자가 아닌 성분이 있습니다")
            if not np.all(np.isfinite(vec)):
                raise EmbeddingFormatError(f"{path}:{line_no}: 유한하지 않은 성분이 있습니다")

            if dimension is None:
                dimension = vec.size
            elif vec.size != dimension:
                raise EmbeddingFormatError(
                    f"{path}:{line_no}: 차원 불일치 (기대 {dimension}, 실제 {vec.size})"
                )

            if word in words:
                logger.warning("%s:%d: 중복 단어 %r, 마지막 행을 사용합니다", path, line_no, word)
                rows[words[word]] = vec
            else:
                words[word] = len(rows)
                rows.append(vec)

    if not rows:
        raise EmbeddingFormatError(f"{path}: 빈 임베딩 파일입니다")

    logger.info("임베딩 로드: %s (%d 단어, %d 차원)", path, len(rows), dimension)
    return EmbeddingTable(words=words, vectors=np.vstack(rows))


def validate_seeds(table: EmbeddingTable, seeds: Sequence[str] = SEED_WORDS) -> None:
    """시드 단어가 모두 표에 있는지 시작 시점에 확인"""
    missing = [s for s in seeds if s not in table]
    if missing:
        raise SeedVocabularyError(f"임베딩 표에 없는 시드 단어: {missing}")


def _unit(v: np.ndarray) -> Optional[np.ndarray]:
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else None


def similarity_distribution(tokens: Sequence[str], seed: str, table: EmbeddingTable) -> List[float]:
    """
    토큰별 시드 코사인 유사도 (표에 없는 토큰과 영벡터는 건너뜀, 토큰 순서 유지)
    """
    if seed not in table:
        raise SeedVocabularyError(f"임베딩 표에 없는 시드 단어: {seed!r}")
    seed_unit = _unit(table.vector(seed))
    if seed_unit is None:
        raise SeedVocabularyError(f"시드 단어 벡터가 영벡터입니다: {seed!r}")

    sims = []
    for token in tokens:
        if token not in table:
            continue
        unit = _unit(table.vector(token))
        if unit is None:
            continue
        sims.append(float(np.clip(np.dot(unit, seed_unit), -1.0, 1.0)))
    return sims


def describe_distribution(values: Sequence[float]) -> Dict[str, Optional[float]]:
    """min/p5/p50/p95/max/iqr/skewness/kurtosis (값 3개 미만 또는 상수면 skew/kurt 는 None)"""
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        return {name: None for name in DESCRIPTORS}

    p5, p25, p50, p75, p95 = np.percentile(x, [5, 25, 50, 75, 95], method="linear")
    out: Dict[str, Optional[float]] = {
        "min": float(x.min()),
        "p5": float(p5),
        "p50": float(p50),
        "p95": float(p95),
        "max": float(x.max()),
        "iqr": float(p75 - p25),
        "skewness": None,
        "kurtosis": None,
    }
    if x.size >= 3 and np.ptp(x) > 0:
        out["skewness"] = float(skew(x, bias=True))
        out["kurtosis"] = float(kurtosis(x, fisher=True, bias=True))
    return out


@dataclass(frozen=True)
class SeedDescriptors:
    per_seed: Dict[str, Dict[str, Optional[float]]]
    coverage: Optional[float]


def seed_descriptors(
    tokens: Sequence[str],
    table: EmbeddingTable,
    seeds: Sequence[str] = SEED_WORDS,
) -> SeedDescriptors:
    """시드 단어별 유사도 분포 기술통계 + coverage(표에 있는 발화 토큰 비율)"""
    validate_seeds(table, seeds)
    per_seed = {
        seed: describe_distribution(similarity_distribution(tokens, seed, table))
        for seed in seeds
    }
    covered = sum(1 for t in tokens if t in table)
    return SeedDescriptors(
        per_seed=per_seed,
        coverage=covered / len(tokens) if tokens else None,
    )


def action_word_features(
    tokens: Sequence[str],
    table: EmbeddingTable,
    seeds: Sequence[str] = SEED_WORDS,
) -> Dict[str, Optional[float]]:
    """seed_descriptors 를 sem_{seed}_{descriptor} 특징 맵으로 펼침"""
    described = seed_descriptors(tokens, table, seeds)
    features: Dict[str, Optional[float]] = {}
    for seed in seeds:
        for name, value in described.per_seed[seed].items():
            features[f"{FEATURE_PREFIX}{seed}_{name}"] = value
    features[f"{FEATURE_PREFIX}coverage"] = described.coverage
    return features
