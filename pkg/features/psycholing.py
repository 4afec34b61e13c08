"""
심리언어학 특징
품사 비율과 어휘 풍부도(Honore 통계량, Brunet 지수)
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

from utils.config import DEFAULT_POS_LEXICON, POS_TAGGERS
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

FEATURE_PREFIX = "psy_"

PENN_TAGS = frozenset({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS",
    "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO",
    "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB",
})

# 태그 그룹 (other 가 나머지를 채워 전체 태그셋을 분할)
TAG_GROUPS = {
    "nouns": {"NN", "NNS", "NNP", "NNPS"},
    "verbs": {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD"},
    "adjectives": {"JJ", "JJR", "JJS"},
    "adverbs": {"RB", "RBR", "RBS", "WRB"},
    "pronouns": {"PRP", "PRP$"},
    "wh_pronouns": {"WP", "WP$"},
    "determiners": {"DT", "PDT", "WDT"},
    "prepositions": {"IN", "TO"},
    "interjections": {"UH"},
}
TAG_GROUPS["other"] = set(PENN_TAGS) - set().union(*TAG_GROUPS.values())

# 미등록 단어용 접미사 규칙 (긴 접미사 먼저)
SUFFIX_RULES: Tuple[Tuple[str, str], ...] = (
    ("ness", "NN"), ("ment", "NN"), ("tion", "NN"), ("sion", "NN"), ("ship", "NN"),
    ("hood", "NN"), ("ity", "NN"), ("dom", "NN"),
    ("ous", "JJ"), ("ful", "JJ"), ("less", "JJ"), ("able", "JJ"), ("ible", "JJ"),
    ("ive", "JJ"), ("ic", "JJ"), ("al", "JJ"),
    ("ing", "VBG"), ("ed", "VBD"), ("ly", "RB"), ("est", "JJS"),
)
DEFAULT_TAG = "NN"


@dataclass(frozen=True)
class PosTagged:
    tokens: Tuple[Tuple[str, str], ...]

    @property
    def tags(self) -> List[str]:
        return [tag for _, tag in self.tokens]


@dataclass(frozen=True)
class LexicalStats:
    n_tokens: int
    vocab: int
    hapax: int
    honore: Optional[float]
    brunet: Optional[float]


class PosTagger(Protocol):
    def tag_tokens(self, tokens: Sequence[str]) -> List[str]:
        ...


class LexiconTagger:
    """어휘 사전 + 접미사 규칙 + NN 기본값 태거"""

    def __init__(self, lexicon: Dict[str, str]):
        self.lexicon = dict(lexicon)

    @classmethod
    def from_file(cls, path: str = DEFAULT_POS_LEXICON) -> 'LexiconTagger':
        """
        `word<TAB>tag` 형식 사전 로드 (# 으로 시작하는 줄은 주석)

        같은 단어가 여러 번 나오면 처음 것을 쓴다.
        """
        lexicon: Dict[str, str] = {}
        try:
            with open(path, "r", encoding="utf-8") as f:
                for line_no, line in enumerate(f, start=1):
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    parts = line.split("\t")
                    if len(parts) != 2:
                        raise ConfigError(f"{path}:{line_no}: 'word<TAB>tag' 형식이 아닙니다")
                    word, tag = parts[0].lower(), parts[1]
                    if tag not in PENN_TAGS:
                        raise ConfigError(f"{path}:{line_no}: 알 수 없는 태그 {tag!r}")
                    lexicon.setdefault(word, tag)
        except OSError as e:
            raise ConfigError(f"품사 사전을 읽을 수 없습니다: {path} ({e})")

        logger.debug("품사 사전 로드: %s (%d 단어)", path, len(lexicon))
        return cls(lexicon)

    def tag(self, word: str) -> str:
        if word in self.lexicon:
            return self.lexicon[word]
        if word.replace(".", "", 1).isdigit():
            return "CD"
        for suffix, tag in SUFFIX_RULES:
            if word.endswith(suffix) and len(word) > len(suffix) + 2:
                return tag
        return DEFAULT_TAG

    def tag_tokens(self, tokens: Sequence[str]) -> List[str]:
        return [self.tag(t) for t in tokens]


class NltkTagger:
    """
    NLTK 평균 퍼셉트론 태거 (앞뒤 단어 문맥 사용)

    태거 모델 데이터는 자동으로 내려받지 않는다.
    미리 설치: python -m nltk.downloader averaged_perceptron_tagger_eng
    """

    def __init__(self):
        try:
            from nltk.tag import PerceptronTagger
        except ImportError:
            raise ConfigError("pos_tagger = 'nltk' 에는 nltk 패키지가 필요합니다")
        try:
            self._tagger = PerceptronTagger()
        except LookupError as e:
            raise ConfigError(f"NLTK 태거 데이터가 없습니다: {e}")

    def tag_tokens(self, tokens: Sequence[str]) -> List[str]:
        if not tokens:
            return []
        # 문장 부호 태그(., :, `` 등)는 SYM
        return [tag if tag in PENN_TAGS else "SYM" for _, tag in self._tagger.tag(list(tokens))]


def make_tagger(kind: str = "lexicon", lexicon_path: str = DEFAULT_POS_LEXICON) -> PosTagger:
    """설정의 pos_tagger 이름 → 태거"""
    if kind == "lexicon":
        return LexiconTagger.from_file(lexicon_path)
    if kind == "nltk":
        return NltkTagger()
    raise ConfigError(f"알 수 없는 pos_tagger: {kind!r} (가능: {list(POS_TAGGERS)})")


@lru_cache(maxsize=4)
def default_tagger(path: str = DEFAULT_POS_LEXICON) -> LexiconTagger:
    return LexiconTagger.from_file(path)


def pos_tag(tokens: Sequence[str], tagger: Optional[PosTagger] = None) -> PosTagged:
    tagger = tagger or default_tagger()
    return PosTagged(tokens=tuple(zip(tokens, tagger.tag_tokens(tokens))))


def pos_proportions(pt: PosTagged) -> Dict[str, Optional[float]]:
    """태그 그룹별 비율 (빈 입력이면 모두 None)"""
    n = len(pt.tokens)
    if n == 0:
        return {f"prop_{group}": None for group in TAG_GROUPS}
    counts = Counter(pt.tags)
    return {
        f"prop_{group}": sum(counts[tag] for tag in tags) / n
        for group, tags in TAG_GROUPS.items()
    }


def lexical_stats(tokens: Sequence[str]) -> LexicalStats:
    """
    어휘 풍부도

    Honore R = 100·ln(N) / (1 - V1/V), Brunet W = N^(V^-0.165).
    N=0 이면 둘 다 None, V1=V 이면 Honore 만 None.
    """
    counts = Counter(tokens)
    n = len(tokens)
    v = len(counts)
    v1 = sum(1 for c in counts.values() if c == 1)

    if n == 0:
        return LexicalStats(n_tokens=0, vocab=0, hapax=0, honore=None, brunet=None)

    honore = None if v1 == v else 100.0 * math.log(n) / (1.0 - v1 / v)
    brunet = n ** (v ** -0.165)
    return LexicalStats(n_tokens=n, vocab=v, hapax=v1, honore=honore, brunet=brunet)


def psycholinguistic_features(
    tokens: Sequence[str],
    tagger: Optional[PosTagger] = None,
) -> Dict[str, Optional[float]]:
    """large 모델 전사 토큰 → psy_ 특징 맵"""
    features: Dict[str, Optional[float]] = {}
    features.update(pos_proportions(pos_tag(tokens, tagger)))

    stats = lexical_stats(tokens)
    features.update({
        "n_tokens": float(stats.n_tokens),
        "vocab_size": float(stats.vocab),
        "hapax": float(stats.hapax),
        "type_token_ratio": stats.vocab / stats.n_tokens if stats.n_tokens else None,
        "honore": stats.honore,
        "brunet": stats.brunet,
    })
    return {FEATURE_PREFIX + k: v for k, v in features.items()}
