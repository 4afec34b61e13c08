"""
데이터셋 구성, 선형 회귀 학습, k-fold 교차검증(Spearman), 순열 검정, 가중치 보고
"""

import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import rankdata
from sklearn.impute import SimpleImputer
from sklearn.linear_model import LinearRegression, Ridge
from sklearn.model_selection import KFold
from sklearn.preprocessing import StandardScaler

from utils.config import derive_seed
from utils.errors import DegenerateDesignError, InsufficientDataError
from .cohort import EcasScores

logger = logging.getLogger(__name__)

MIN_ROWS = 10
MAX_MISSING_FRACTION = 0.5
MIN_PERMUTATIONS = 100
TOP_K = 5

FeatureMap = Mapping[str, Optional[float]]


@dataclass(frozen=True)
class Dataset:
    """
    참가자당 한 행의 모델링 데이터

    X_raw 는 결측(NaN)을 그대로 둔 행렬로 fold 내부 대치에 쓰고,
    X 는 전체 데이터 중앙값으로 대치한 행렬로 전체 재학습과 CSV 출력에 쓴다.
    """

    feature_names: Tuple[str, ...]
    X_raw: np.ndarray
    X: np.ndarray
    y: np.ndarray
    row_ids: Tuple[str, ...]
    feature_set_tag: str
    target_name: str
    dropped_features: Tuple[str, ...] = ()

    @property
    def n_rows(self) -> int:
        return self.y.size


@dataclass(frozen=True)
class FitResult:
    keep_mask: np.ndarray
    means: np.ndarray
    scales: np.ndarray
    weights: np.ndarray
    intercept: float

    def predict(self, X: np.ndarray) -> np.ndarray:
        Z = (X[:, self.keep_mask] - self.means) / self.scales
        return Z @ self.weights + self.intercept


@dataclass(frozen=True)
class FoldRecord:
    """fold 하나의 테스트 행과 학습 행에서만 구한 통계"""

    test_index: np.ndarray
    impute_medians: np.ndarray
    fit: FitResult


@dataclass(frozen=True)
class CvResult:
    spearman_r: Optional[float]
    oof_predictions: np.ndarray
    folds: List[FoldRecord]


@dataclass
class EvalReport:
    feature_set: str
    target: str
    spearman_r: Optional[float]
    p_value: float
    oof_predictions: List[float]
    row_ids: List[str]
    top_weights: List[Tuple[str, float]]
    seed: int
    cv_seed: int
    permutation_seed: int
    n_permutations: int
    k_folds: int
    ridge_lambda: float
    n_rows: int
    feature_names: List[str] = field(default_factory=list)
    dropped_features: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "feature_set": self.feature_set,
            "target": self.target,
            "spearman_r": self.spearman_r,
            "p_value": self.p_value,
            "oof_predictions": dict(zip(self.row_ids, self.oof_predictions)),
            "top_weights": [{"name": n, "weight": w} for n, w in self.top_weights],
            "seed": self.seed,
            "cv_seed": self.cv_seed,
            "permutation_seed": self.permutation_seed,
            "n_permutations": self.n_permutations,
            "k_folds": self.k_folds,
            "ridge_lambda": self.ridge_lambda,
            "n_rows": self.n_rows,
            "feature_names": self.feature_names,
            "dropped_features": self.dropped_features,
        }


def _mean_vector(vectors: Sequence[FeatureMap], names: Sequence[str]) -> np.ndarray:
    matrix = np.array(
        [[np.nan if v.get(n) is None else float(v[n]) for n in names] for v in vectors],
        dtype=np.float64,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=RuntimeWarning)  # 전부 NaN 인 열
        return np.nanmean(matrix, axis=0)


def assemble(
    features: Mapping[str, Sequence[FeatureMap]],
    scores: Mapping[str, EcasScores],
    target_name: str,
    feature_set_tag: str,
    covariates: Optional[Mapping[str, FeatureMap]] = None,
    min_rows: int = MIN_ROWS,
) -> Dataset:
    """
    참가자별 특징 → Dataset

    여러 세션의 특징 벡터는 평균(결측 제외)하고, 50% 넘게 결측인 특징은 버린다.

    Args:
        features: 참가자 id → 세션별 특징 맵 목록
        scores: 참가자 id → ECAS 점수
        target_name: 목표 점수 이름
        feature_set_tag: 특징 세트 태그
        covariates: 참가자 id → 추가 열(예: age_years)
        min_rows: 최소 행 수

    Returns:
        Dataset (행은 참가자 id 정렬 순, 특징은 이름 정렬 순 뒤에 공변량)
    """
    row_ids = sorted(
        pid for pid, vectors in features.items()
        if vectors and pid in scores and scores[pid].score(target_name) is not None
    )
    if len(row_ids) < min_rows:
        raise InsufficientDataError(
            f"{feature_set_tag}/{target_name}: 행이 {len(row_ids)}개로 최소 {min_rows}개보다 적습니다"
        )

    names = sorted({name for pid in row_ids for v in features[pid] for name in v})
    X_raw = np.vstack([_mean_vector(features[pid], names) for pid in row_ids]) if names else np.empty((len(row_ids), 0))

    if covariates is not None:
        cov_names = sorted({name for c in covariates.values() for name in c})
        cov_matrix = np.array(
            [[np.nan if covariates.get(pid, {}).get(n) is None else float(covariates[pid][n]) for n in cov_names]
             for pid in row_ids],
            dtype=np.float64,
        ).reshape(len(row_ids), len(cov_names))
        X_raw = np.hstack([X_raw, cov_matrix])
        names = names + cov_names

    missing_fraction = np.isnan(X_raw).mean(axis=0) if X_raw.size else np.empty(0)
    keep = missing_fraction <= MAX_MISSING_FRACTION
    dropped = tuple(n for n, k in zip(names, keep) if not k)
    if dropped:
        logger.warning("%s/%s: 결측 50%% 초과 특징 %d개 제외: %s", feature_set_tag, target_name, len(dropped), list(dropped))

    X_raw = X_raw[:, keep]
    names = [n for n, k in zip(names, keep) if k]
    if not names:
        raise InsufficientDataError(f"{feature_set_tag}/{target_name}: 남은 특징이 없습니다")

    medians = np.nanmedian(X_raw, axis=0)
    X = np.where(np.isnan(X_raw), medians, X_raw)
    y = np.array([scores[pid].score(target_name) for pid in row_ids], dtype=np.float64)

    return Dataset(
        feature_names=tuple(names),
        X_raw=X_raw,
        X=X,
        y=y,
        row_ids=tuple(row_ids),
        feature_set_tag=feature_set_tag,
        target_name=target_name,
        dropped_features=dropped,
    )


def fit(X: np.ndarray, y: np.ndarray, ridge_lambda: float = 1e-6) -> FitResult:
    """
    상수 열 제거 → z-score 표준화 → ||y - Xw - b||² + λ||w||² 최소화

    λ=0 이면 최소제곱(LinearRegression)
    """
    if ridge_lambda < 0:
        raise ValueError(f"ridge_lambda 는 0 이상이어야 합니다: {ridge_lambda}")
    if X.shape[0] < 2:
        raise InsufficientDataError(f"학습 행이 {X.shape[0]}개입니다 (최소 2)")

    keep = np.ptp(X, axis=0) > 0 if X.shape[1] else np.zeros(0, dtype=bool)
    if not keep.any():
        raise DegenerateDesignError("모든 특징이 상수입니다")

    scaler = StandardScaler().fit(X[:, keep])
    Z = scaler.transform(X[:, keep])
    model = Ridge(alpha=ridge_lambda) if ridge_lambda > 0 else LinearRegression()
    model.fit(Z, y)

    return FitResult(
        keep_mask=keep,
        means=scaler.mean_,
        scales=scaler.scale_,
        weights=np.asarray(model.coef_, dtype=np.float64),
        intercept=float(model.intercept_),
    )


def spearman(a: Sequence[float], b: Sequence[float]) -> Optional[float]:
    """평균 순위의 Pearson 상관. 어느 한쪽 순위 분산이 0이면 None"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size != b.size:
        raise ValueError(f"길이가 다릅니다: {a.size} != {b.size}")
    if a.size < 3:
        raise InsufficientDataError(f"Spearman 상관에는 3쌍 이상이 필요합니다 (n={a.size})")

    ra, rb = rankdata(a), rankdata(b)
    if np.ptp(ra) == 0 or np.ptp(rb) == 0:
        return None
    r = float(np.corrcoef(ra, rb)[0, 1])
    return float(np.clip(r, -1.0, 1.0))


def cross_validate(ds: Dataset, k: int = 10, seed: int = 0, ridge_lambda: float = 1e-6) -> CvResult:
    """
    seed 로 섞은 k-fold 교차검증

    대치 중앙값과 표준화 통계는 각 fold 의 학습 행에서만 구한다.
    Spearman r 은 모든 fold 의 out-of-fold 예측을 모아 한 번 계산한다.
    """
    if ds.n_rows < k:
        raise InsufficientDataError(f"행 수({ds.n_rows})가 fold 수({k})보다 적습니다")

    oof = np.empty(ds.n_rows, dtype=np.float64)
    folds: List[FoldRecord] = []
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed)
    for train_idx, test_idx in splitter.split(ds.X_raw):
        imputer = SimpleImputer(strategy="median", keep_empty_features=True)
        X_train = imputer.fit_transform(ds.X_raw[train_idx])
        X_test = imputer.transform(ds.X_raw[test_idx])

        fold_fit = fit(X_train, ds.y[train_idx], ridge_lambda)
        oof[test_idx] = fold_fit.predict(X_test)
        folds.append(FoldRecord(test_index=test_idx, impute_medians=imputer.statistics_.copy(), fit=fold_fit))

    return CvResult(spearman_r=spearman(oof, ds.y), oof_predictions=oof, folds=folds)


def kfold_cv(ds: Dataset, k: int = 10, seed: int = 0, ridge_lambda: float = 1e-6) -> Tuple[Optional[float], np.ndarray]:
    result = cross_validate(ds, k, seed, ridge_lambda)
    return result.spearman_r, result.oof_predictions


def _null_replicate(ds: Dataset, k: int, seed: int, cv_seed: int, ridge_lambda: float, index: int) -> float:
    rng = np.random.default_rng([seed, index])
    shuffled = replace(ds, y=rng.permutation(ds.y))
    try:
        r = cross_validate(shuffled, k, cv_seed, ridge_lambda).spearman_r
    except DegenerateDesignError:
        r = None
    return np.nan if r is None else r


def permutation_null(
    ds: Dataset,
    k: int = 10,
    n_perm: int = 1000,
    seed: int = 0,
    cv_seed: int = 0,
    ridge_lambda: float = 1e-6,
    n_jobs: int = 1,
) -> np.ndarray:
    """
    y 를 섞어 교차검증을 반복한 귀무 분포 r 값 (정의되지 않으면 NaN)

    반복 i 는 default_rng([seed, i]) 를 쓰므로 결과는 실행 순서/병렬도와 무관하다.
    """
    if n_perm < MIN_PERMUTATIONS:
        raise ValueError(f"n_perm 은 {MIN_PERMUTATIONS} 이상이어야 합니다: {n_perm}")

    def _run(i: int) -> float:
        return _null_replicate(ds, k, seed, cv_seed, ridge_lambda, i)

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as executor:
            null = list(executor.map(_run, range(n_perm)))
    else:
        null = [_run(i) for i in range(n_perm)]
    return np.asarray(null, dtype=np.float64)


def p_value_from_null(observed_r: Optional[float], null: np.ndarray) -> float:
    """p = (1 + #{null ≥ observed}) / (n + 1). 정의되지 않은 null r 은 0 으로 본다"""
    if observed_r is None or not np.isfinite(observed_r):
        return 1.0
    null = np.nan_to_num(np.asarray(null, dtype=np.float64), nan=0.0)
    return float((1 + np.count_nonzero(null >= observed_r)) / (null.size + 1))


def permutation_test(
    ds: Dataset,
    k: int = 10,
    n_perm: int = 1000,
    seed: int = 0,
    cv_seed: int = 0,
    ridge_lambda: float = 1e-6,
    n_jobs: int = 1,
) -> float:
    observed_r, _ = kfold_cv(ds, k, cv_seed, ridge_lambda)
    null = permutation_null(ds, k, n_perm, seed, cv_seed, ridge_lambda, n_jobs)
    return p_value_from_null(observed_r, null)


def top_weights(fit_result: FitResult, names: Sequence[str], k: int = TOP_K) -> List[Tuple[str, float]]:
    """
    |가중치| 내림차순 상위 k 개, 최대 |가중치| 로 정규화 (첫 항목은 ±1)
    """
    kept_names = [n for n, keep in zip(names, fit_result.keep_mask) if keep]
    weights = fit_result.weights
    order = sorted(range(len(kept_names)), key=lambda i: (-abs(weights[i]), kept_names[i]))
    scale = np.max(np.abs(weights)) if weights.size else 0.0
    if scale == 0:
        return [(kept_names[i], 0.0) for i in order[:k]]
    return [(kept_names[i], float(weights[i] / scale)) for i in order[:k]]


def evaluate(
    ds: Dataset,
    k: int = 10,
    n_perm: int = 1000,
    master_seed: int = 0,
    ridge_lambda: float = 1e-6,
    n_jobs: int = 1,
) -> EvalReport:
    """교차검증 + 순열 검정 + 전체 재학습 가중치를 묶은 평가 보고서"""
    name = f"{ds.feature_set_tag}:{ds.target_name}"
    cv_seed = derive_seed(master_seed, f"cv:{name}")
    perm_seed = derive_seed(master_seed, f"perm:{name}")

    cv = cross_validate(ds, k, cv_seed, ridge_lambda)
    null = permutation_null(ds, k, n_perm, perm_seed, cv_seed, ridge_lambda, n_jobs)
    p_value = p_value_from_null(cv.spearman_r, null)
    full_fit = fit(ds.X, ds.y, ridge_lambda)

    logger.info("%s: r=%s, p=%.4g (n=%d)", name, cv.spearman_r, p_value, ds.n_rows)
    return EvalReport(
        feature_set=ds.feature_set_tag,
        target=ds.target_name,
        spearman_r=cv.spearman_r,
        p_value=p_value,
        oof_predictions=[float(v) for v in cv.oof_predictions],
        row_ids=list(ds.row_ids),
        top_weights=top_weights(full_fit, ds.feature_names),
        seed=master_seed,
        cv_seed=cv_seed,
        permutation_seed=perm_seed,
        n_permutations=n_perm,
        k_folds=k,
        ridge_lambda=ridge_lambda,
        n_rows=ds.n_rows,
        feature_names=list(ds.feature_names),
        dropped_features=list(ds.dropped_features),
    )
