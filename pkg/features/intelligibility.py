"""
명료도 특징
small 모델 전사를 가설, large 모델 전사를 기준으로 한 WER/MER/WIL 과 confidence 통계
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .transcripts import SessionTranscripts, Token

FEATURE_PREFIX = "intel_"


@dataclass(frozen=True)
class AlignmentResult:
    hits: int
    substitutions: int
    deletions: int
    insertions: int
    n_ref: int
    n_hyp: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions


def align(ref: Sequence[str], hyp: Sequence[str]) -> AlignmentResult:
    """
    최소 편집 거리 정렬 (S/D/I 단위 비용)

    최소 비용 경로 중 대각(일치/치환) 단계가 가장 많은 경로를 고른다.
    비용 E 와 대각 단계 수 k 만으로 D = n - k, I = m - k, S = E - D - I 가
    정해지므로 ref/hyp 를 바꾸면 D 와 I 만 서로 바뀐다.
    """
    n, m = len(ref), len(hyp)
    cost = np.zeros((n + 1, m + 1), dtype=np.int64)
    cost[:, 0] = np.arange(n + 1)
    cost[0, :] = np.arange(m + 1)
    diag_steps = np.zeros((n + 1, m + 1), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            # (비용, -대각 단계 수) 사전순 최소
            c, neg_k = min(
                (cost[i - 1, j - 1] + (ref[i - 1] != hyp[j - 1]), -(diag_steps[i - 1, j - 1] + 1)),
                (cost[i - 1, j] + 1, -diag_steps[i - 1, j]),
                (cost[i, j - 1] + 1, -diag_steps[i, j - 1]),
            )
            cost[i, j] = c
            diag_steps[i, j] = -neg_k

    errors = int(cost[n, m])
    k = int(diag_steps[n, m])
    d, ins = n - k, m - k
    s = errors - d - ins
    return AlignmentResult(hits=k - s, substitutions=s, deletions=d, insertions=ins, n_ref=n, n_hyp=m)


def wer_mer_wil(a: AlignmentResult) -> Tuple[Optional[float], Optional[float], Optional[float]]:
    """
    (wer, mer, wil)

    양쪽이 모두 비면 세 값 모두 None. 기준이 비면 wer 는 None.
    한쪽만 비어 있으면 H=0 이므로 wil 은 1.0 이다.
    """
    if a.n_ref == 0 and a.n_hyp == 0:
        return None, None, None

    wer = a.errors / a.n_ref if a.n_ref > 0 else None
    mer = a.errors / (a.hits + a.errors)
    if a.n_ref == 0 or a.n_hyp == 0:
        wil = 1.0
    else:
        wil = 1.0 - (a.hits / a.n_ref) * (a.hits / a.n_hyp)
    return wer, mer, wil


def _confidence_stats(tokens: Sequence[Token]) -> Dict[str, Optional[float]]:
    values = np.array([t.confidence for t in tokens if t.confidence is not None], dtype=np.float64)
    if values.size == 0:
        return {"mean": None, "min": None, "sd": None}
    return {
        "mean": float(values.mean()),
        "min": float(values.min()),
        "sd": float(values.std()),
    }


def intelligibility_features(st: SessionTranscripts) -> Dict[str, Optional[float]]:
    """
    세션 1개의 명료도 특징 맵

    Args:
        st: small/large 전사

    Returns:
        intel_wer, intel_mer, intel_wil, intel_length_ratio,
        intel_conf_{small,large}_{mean,min,sd}, intel_conf_diff_mean
    """
    ref = st.normalized("large")
    hyp = st.normalized("small")
    wer, mer, wil = wer_mer_wil(align(ref, hyp))

    features: Dict[str, Optional[float]] = {
        "wer": wer,
        "mer": mer,
        "wil": wil,
        "length_ratio": len(hyp) / len(ref) if ref else None,
    }

    small_conf = _confidence_stats(st.small)
    large_conf = _confidence_stats(st.large)
    for stat in ("mean", "min", "sd"):
        features[f"conf_small_{stat}"] = small_conf[stat]
        features[f"conf_large_{stat}"] = large_conf[stat]

    if small_conf["mean"] is None or large_conf["mean"] is None:
        features["conf_diff_mean"] = None
    else:
        features["conf_diff_mean"] = large_conf["mean"] - small_conf["mean"]

    return {FEATURE_PREFIX + k: v for k, v in features.items()}
