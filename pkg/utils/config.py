"""
실행 설정(RunConfig) 관리 클래스와 파이프라인 상수
"""

import hashlib

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError


# 패키지 루트 (data/ 디렉터리 위치 계산용)
PACKAGE_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_POS_LEXICON = str(PACKAGE_ROOT / "data" / "pos_lexicon.tsv")


# 특징 세트 (언어 4종 + 음향 1종)
FEATURE_SETS = {
    "acoustic": "운율, 음질, 잡음 측정, 발화 속도",
    "psycholinguistic": "품사 비율, Honore/Brunet 어휘 풍부도",
    "intelligibility": "small/large ASR 전사 차이(WER/MER/WIL)와 confidence 통계",
    "graph": "고정 윈도(30/50/100) 단어 인접 그래프 지표",
    "action_words": "행동/비행동 시드 단어와의 임베딩 유사도 분포",
}

# ECAS 인지 하위 점수 + 총점
SCORE_NAMES = ("language", "verbal_fluency", "executive", "memory", "visuospatial", "total")

# 시드 단어
ACTION_SEEDS = ("action", "act", "move", "play", "energetic")
NON_ACTION_SEEDS = ("inaction", "sleep", "rest", "sit", "wait")
SEED_WORDS = ACTION_SEEDS + NON_ACTION_SEEDS

# 이상 판정 기준값 (점수 <= 기준값 이면 이상). 나머지 하위 점수는 설정 파일에서 지정
DEFAULT_CUTOFFS = {"total": 105.0}

# 하위 점수 만점 (점수 > 만점 이면 행 오류). 검사 판본에 맞게 설정 파일에서 덮어쓴다
DEFAULT_MAXIMA = {"memory": 24.0}

# 40 ms 분석 창에 두 주기가 들어가는 최저 피치
MIN_PITCH_FLOOR_HZ = 50.0

# 품사 태거 종류
POS_TAGGERS = ("lexicon", "nltk")

# 인구통계 공변량으로 쓸 수 있는 참가자 변수
COVARIATE_NAMES = ("age_years", "education_years", "alsfrs_r_total", "alsfrs_r_speech")


@dataclass
class RunConfig:
    """배치 실행 설정 클래스"""

    # 입력 경로
    participants_csv: Optional[str] = None
    ecas_csv: Optional[str] = None
    sessions_csv: Optional[str] = None
    embeddings_path: Optional[str] = None
    pos_lexicon_path: str = DEFAULT_POS_LEXICON
    pos_tagger: str = "lexicon"

    # 출력
    output_dir: str = "output"

    # 연구 설계 상수
    window_days: int = 60
    graph_windows: Tuple[int, ...] = (30, 50, 100)
    pitch_floor_hz: float = 75.0
    pitch_ceiling_hz: float = 500.0

    # 모델링
    k_folds: int = 10
    n_permutations: int = 1000
    master_seed: int = 0
    ridge_lambda: float = 1e-6
    n_jobs: int = 1
    extract_timeout_s: Optional[float] = None  # 세션/세트 1건당, None 이면 무제한

    cutoffs: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_CUTOFFS))
    maxima: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_MAXIMA))

    @classmethod
    def create_default(cls) -> 'RunConfig':
        """기본 설정으로 RunConfig 생성"""
        return cls()

    @classmethod
    def from_toml(cls, path: str) -> 'RunConfig':
        """
        TOML 설정 파일 로드

        상대 경로는 설정 파일이 있는 디렉터리를 기준으로 해석한다.

        Args:
            path: 설정 파일 경로

        Returns:
            RunConfig
        """
        config_path = Path(path)
        try:
            with open(config_path, "rb") as f:
                raw = tomllib.load(f)
        except FileNotFoundError:
            raise ConfigError(f"설정 파일을 찾을 수 없습니다: {path}")
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"TOML 구문 오류 ({path}): {e}")

        try:
            parsed = _ConfigFile.model_validate(raw)
        except ValidationError as e:
            raise ConfigError(f"설정 파일 검증 실패 ({path}):\n{e}")

        base = config_path.resolve().parent

        def _resolve(value: Optional[str]) -> Optional[str]:
            if value is None:
                return None
            p = Path(value)
            return str(p if p.is_absolute() else base / p)

        cutoffs = dict(DEFAULT_CUTOFFS)
        cutoffs.update(parsed.cutoffs)
        maxima = dict(DEFAULT_MAXIMA)
        maxima.update(parsed.maxima)

        return cls(
            participants_csv=_resolve(parsed.paths.participants),
            ecas_csv=_resolve(parsed.paths.ecas),
            sessions_csv=_resolve(parsed.paths.sessions),
            embeddings_path=_resolve(parsed.paths.embeddings),
            pos_lexicon_path=_resolve(parsed.paths.pos_lexicon) or DEFAULT_POS_LEXICON,
            pos_tagger=parsed.study.pos_tagger,
            output_dir=_resolve(parsed.paths.output_dir) or "output",
            window_days=parsed.study.window_days,
            graph_windows=tuple(parsed.study.graph_windows),
            pitch_floor_hz=parsed.study.pitch_floor_hz,
            pitch_ceiling_hz=parsed.study.pitch_ceiling_hz,
            k_folds=parsed.model.k_folds,
            n_permutations=parsed.model.n_permutations,
            master_seed=parsed.model.master_seed,
            ridge_lambda=parsed.model.ridge_lambda,
            n_jobs=parsed.model.n_jobs,
            extract_timeout_s=parsed.model.extract_timeout_s,
            cutoffs=cutoffs,
            maxima=maxima,
        )

    def with_overrides(self, **overrides) -> 'RunConfig':
        """명령행 플래그 적용 (None 값은 무시, 플래그가 파일보다 우선)"""
        values = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **values)

    def validate(self) -> None:
        """설정 유효성 검증 (실패 시 ConfigError)"""
        if self.k_folds < 2:
            raise ConfigError(f"k_folds 는 2 이상이어야 합니다: {self.k_folds}")
        if self.window_days < 0:
            raise ConfigError(f"window_days 는 0 이상이어야 합니다: {self.window_days}")
        if not self.graph_windows or any(w < 1 for w in self.graph_windows):
            raise ConfigError(f"graph_windows 값이 잘못되었습니다: {self.graph_windows}")
        if self.n_permutations < 100:
            raise ConfigError(f"n_permutations 는 100 이상이어야 합니다: {self.n_permutations}")
        if self.ridge_lambda < 0:
            raise ConfigError(f"ridge_lambda 는 0 이상이어야 합니다: {self.ridge_lambda}")
        if self.n_jobs < 1:
            raise ConfigError(f"n_jobs 는 1 이상이어야 합니다: {self.n_jobs}")
        if self.extract_timeout_s is not None and self.extract_timeout_s <= 0:
            raise ConfigError(f"extract_timeout_s 는 0 보다 커야 합니다: {self.extract_timeout_s}")
        if not 0 < self.pitch_floor_hz < self.pitch_ceiling_hz:
            raise ConfigError("pitch_floor_hz < pitch_ceiling_hz 이어야 합니다")
        if self.pitch_floor_hz < MIN_PITCH_FLOOR_HZ:
            raise ConfigError(f"pitch_floor_hz 는 {MIN_PITCH_FLOOR_HZ} Hz 이상이어야 합니다: {self.pitch_floor_hz}")
        if self.pos_tagger not in POS_TAGGERS:
            raise ConfigError(f"알 수 없는 pos_tagger: {self.pos_tagger!r} (가능: {list(POS_TAGGERS)})")
        unknown = set(self.cutoffs) - set(SCORE_NAMES)
        if unknown:
            raise ConfigError(f"알 수 없는 cutoff 점수: {sorted(unknown)} (가능: {list(SCORE_NAMES)})")
        unknown = set(self.maxima) - set(SCORE_NAMES)
        if unknown:
            raise ConfigError(f"알 수 없는 maxima 점수: {sorted(unknown)} (가능: {list(SCORE_NAMES)})")
        if any(v <= 0 for v in self.maxima.values()):
            raise ConfigError(f"maxima 값은 0 보다 커야 합니다: {self.maxima}")

        for name, value in self.referenced_paths().items():
            if not Path(value).exists():
                raise ConfigError(f"{name} 경로가 존재하지 않습니다: {value}")

    def referenced_paths(self) -> Dict[str, str]:
        """설정된 입력 경로 목록"""
        candidates = {
            "participants_csv": self.participants_csv,
            "ecas_csv": self.ecas_csv,
            "sessions_csv": self.sessions_csv,
            "embeddings_path": self.embeddings_path,
            "pos_lexicon_path": self.pos_lexicon_path,
        }
        return {k: v for k, v in candidates.items() if v}

    def require(self, *names: str) -> None:
        """서브커맨드에 필요한 경로가 설정되었는지 확인"""
        missing = [n for n in names if not getattr(self, n)]
        if missing:
            raise ConfigError(f"필수 설정이 없습니다: {missing}")


def derive_seed(master_seed: int, name: str) -> int:
    """
    master_seed 에서 이름 붙은 하위 시드 생성

    플랫폼/실행 순서와 무관하게 같은 (master_seed, name) 은 같은 시드를 준다.
    """
    digest = hashlib.sha256(f"{master_seed}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def validate_feature_set(tag: str) -> str:
    if tag not in FEATURE_SETS:
        raise ConfigError(f"알 수 없는 feature set: {tag!r} (가능: {list(FEATURE_SETS)})")
    return tag


def validate_score_name(name: str) -> str:
    if name not in SCORE_NAMES:
        raise ConfigError(f"알 수 없는 score: {name!r} (가능: {list(SCORE_NAMES)})")
    return name


# TOML 스키마 (오타 키는 오류)
class _PathsSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    participants: Optional[str] = None
    ecas: Optional[str] = None
    sessions: Optional[str] = None
    embeddings: Optional[str] = None
    pos_lexicon: Optional[str] = None
    output_dir: Optional[str] = None


class _StudySection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    window_days: int = Field(default=60, ge=0)
    graph_windows: List[int] = Field(default_factory=lambda: [30, 50, 100])
    pitch_floor_hz: float = 75.0
    pitch_ceiling_hz: float = 500.0
    pos_tagger: str = "lexicon"


class _ModelSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k_folds: int = Field(default=10, ge=2)
    n_permutations: int = Field(default=1000, ge=100)
    master_seed: int = 0
    ridge_lambda: float = Field(default=1e-6, ge=0)
    n_jobs: int = Field(default=1, ge=1)
    extract_timeout_s: Optional[float] = Field(default=None, gt=0)


class _ConfigFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    paths: _PathsSection = Field(default_factory=_PathsSection)
    study: _StudySection = Field(default_factory=_StudySection)
    model: _ModelSection = Field(default_factory=_ModelSection)
    cutoffs: Dict[str, float] = Field(default_factory=dict)
    maxima: Dict[str, float] = Field(default_factory=dict)
