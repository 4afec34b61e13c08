"""
서브커맨드 본체 (extract / evaluate / cohort-report / permtest)
"""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from analysis.cohort import (
    EcasScores, Participant, Session,
    abnormality_rates, cohort_summary, flag_table, match_sessions,
    score_correlations, score_descriptives,
)
from analysis.inference import (
    Dataset, EvalReport, assemble, evaluate, kfold_cv, p_value_from_null, permutation_null,
)
from features.extractor import FeatureVector, SessionExtractor
from features.psycholing import PosTagger, make_tagger
from features.safe_runner import run_isolated
from features.semantics import EmbeddingTable, load_embeddings, validate_seeds
from utils.cohort_io import load_ecas, load_participants, load_sessions
from utils.config import FEATURE_SETS, SCORE_NAMES, RunConfig, derive_seed, validate_feature_set, validate_score_name
from utils.errors import ConfigError, InsufficientDataError, DegenerateDesignError
from utils.report_io import (
    format_result_line, format_table_cell, read_json, write_csv, write_json,
)

logger = logging.getLogger(__name__)


# 출력 트리
def features_dir(config: RunConfig) -> Path:
    return Path(config.output_dir) / "features"


def feature_path(config: RunConfig, feature_set: str, session_id: str) -> Path:
    return features_dir(config) / feature_set / f"{session_id}.json"


def feature_tag(feature_set: str, covariates: Sequence[str] = ()) -> str:
    """공변량을 덧붙인 특징 세트 태그 (예: action_words+age_years)"""
    return feature_set + "".join(f"+{c}" for c in covariates)


def result_stem(feature_set: str, target: str, covariates: Sequence[str] = ()) -> str:
    return f"{feature_tag(feature_set, covariates)}__{target}"


def cmd_extract(
    config: RunConfig,
    session_filter: Optional[Sequence[str]] = None,
    feature_sets: Optional[Sequence[str]] = None,
) -> int:
    """
    세션별 특징 파일 생성

    (세션, 특징 세트) 단위로 실패를 격리해 extract_errors.json 에 기록한다.

    Returns:
        종료 코드 (모두 실패하면 1)
    """
    config.require("sessions_csv")
    feature_sets = list(feature_sets or FEATURE_SETS)
    for tag in feature_sets:
        validate_feature_set(tag)

    sessions = load_sessions(config.sessions_csv)
    if session_filter is not None:
        wanted = set(session_filter)
        unknown = sorted(wanted - {s.session_id for s in sessions})
        if unknown:
            raise ConfigError(f"sessions.csv 에 없는 session id: {unknown}")
        sessions = [s for s in sessions if s.session_id in wanted]
    if not sessions:
        raise ConfigError("추출할 세션이 없습니다")

    embeddings: Optional[EmbeddingTable] = None
    if "action_words" in feature_sets:
        config.require("embeddings_path")
        embeddings = load_embeddings(config.embeddings_path)
        validate_seeds(embeddings)
    tagger: Optional[PosTagger] = None
    if "psycholinguistic" in feature_sets:
        tagger = make_tagger(config.pos_tagger, config.pos_lexicon_path)

    extractor = SessionExtractor(config, embeddings=embeddings, tagger=tagger)
    tasks = [(s, tag) for s in sessions for tag in feature_sets]
    print(f"🔄 특징 추출: 세션 {len(sessions)}개 × 세트 {len(feature_sets)}개")

    results = run_isolated(
        lambda task: extractor.extract(*task), tasks,
        n_jobs=config.n_jobs, timeout_seconds=config.extract_timeout_s,
    )

    errors = []
    n_written = 0
    for (session, tag), result in zip(tasks, results):
        if result["success"]:
            write_json(str(feature_path(config, tag, session.session_id)), result["content"].to_dict())
            n_written += 1
        else:
            logger.warning("%s/%s 추출 실패: %s", session.session_id, tag, result["error"])
            errors.append({
                "session_id": session.session_id,
                "feature_set": tag,
                "error_type": result["error_type"],
                "error": result["error"],
            })
    write_json(str(features_dir(config) / "extract_errors.json"), errors)

    if n_written == 0:
        print(f"❌ 모든 추출이 실패했습니다 ({len(errors)}건)")
        return 1
    if errors:
        print(f"⚠️ 특징 파일 {n_written}개 작성, 실패 {len(errors)}건 (extract_errors.json)")
    else:
        print(f"✅ 특징 파일 {n_written}개 작성")
    return 0


def _load_cohort(config: RunConfig) -> Tuple[List[Participant], Dict[str, EcasScores]]:
    config.require("participants_csv", "ecas_csv")
    return load_participants(config.participants_csv), load_ecas(config.ecas_csv, config.maxima)


def _matched_sessions(config: RunConfig) -> Tuple[Dict[str, List[Session]], Dict[str, EcasScores], List[Participant]]:
    config.require("sessions_csv", "ecas_csv")
    ecas = load_ecas(config.ecas_csv, config.maxima)
    participants = load_participants(config.participants_csv) if config.participants_csv else []
    known = [p.id for p in participants] if participants else None
    matched = match_sessions(load_sessions(config.sessions_csv), ecas, config.window_days, known)
    return matched, ecas, participants


def build_dataset(
    config: RunConfig,
    feature_set: str,
    target: str,
    covariates: Sequence[str] = (),
    cohort: Optional[Tuple] = None,
) -> Dataset:
    """매칭된 세션의 특징 파일을 읽어 (특징 세트, 목표 점수) Dataset 구성"""
    validate_feature_set(feature_set)
    validate_score_name(target)
    matched, ecas, participants = cohort or _matched_sessions(config)

    features: Dict[str, List[Dict]] = {}
    for pid, sessions in matched.items():
        for s in sessions:
            path = feature_path(config, feature_set, s.session_id)
            if not path.exists():
                logger.warning("특징 파일 없음, 세션 제외: %s", path)
                continue
            features.setdefault(pid, []).append(FeatureVector.from_dict(read_json(str(path))).features)

    covariate_rows = None
    if covariates:
        if not participants:
            raise ConfigError("--covariate 에는 participants 경로가 필요합니다")
        covariate_rows = {p.id: {c: getattr(p, c) for c in covariates} for p in participants}

    ds = assemble(features, ecas, target, feature_set, covariates=covariate_rows)
    if covariates:
        ds = replace(ds, feature_set_tag=feature_tag(feature_set, covariates))
    return ds


def _write_dataset(config: RunConfig, ds: Dataset, stem: str) -> None:
    frame = pd.DataFrame(ds.X, columns=list(ds.feature_names))
    frame.insert(0, ds.target_name, ds.y)
    frame.insert(0, "participant_id", list(ds.row_ids))
    write_csv(str(Path(config.output_dir) / "datasets" / f"{stem}.csv"), frame)


def _evaluate_one(config: RunConfig, feature_set: str, target: str, covariates: Sequence[str], cohort=None) -> EvalReport:
    ds = build_dataset(config, feature_set, target, covariates, cohort)
    stem = result_stem(feature_set, target, covariates)
    _write_dataset(config, ds, stem)
    report = evaluate(
        ds,
        k=config.k_folds,
        n_perm=config.n_permutations,
        master_seed=config.master_seed,
        ridge_lambda=config.ridge_lambda,
        n_jobs=config.n_jobs,
    )
    write_json(str(Path(config.output_dir) / "reports" / f"{stem}.json"), report.to_dict())
    return report


def cmd_evaluate(config: RunConfig, feature_set: str, target: str, covariates: Sequence[str] = ()) -> int:
    """(특징 세트, 점수) 하나 평가 → reports/<set>__<target>.json"""
    validate_feature_set(feature_set)
    validate_score_name(target)
    print(f"🔄 평가: {feature_set} → {target}")
    report = _evaluate_one(config, feature_set, target, covariates)
    print(f"✅ {feature_set} / {target}: {format_result_line(report.spearman_r, report.p_value)}")
    for name, weight in report.top_weights:
        print(f"   {weight:+.2f}  {name}")
    return 0


def cmd_evaluate_all(config: RunConfig, covariates: Sequence[str] = ()) -> int:
    """
    모든 (특징 세트 × 점수) 평가 → reports/results_grid.csv

    조합별 데이터 부족은 'n/a' 셀로 남기고, 모두 실패하면 1
    """
    cohort = _matched_sessions(config)
    grid = pd.DataFrame(index=list(FEATURE_SETS), columns=list(SCORE_NAMES), dtype=object)
    n_ok = 0
    for feature_set in FEATURE_SETS:
        for target in SCORE_NAMES:
            try:
                report = _evaluate_one(config, feature_set, target, covariates, cohort)
            except (InsufficientDataError, DegenerateDesignError) as e:
                print(f"⚠️ {feature_set} / {target}: {e}")
                grid.loc[feature_set, target] = "n/a"
                continue
            grid.loc[feature_set, target] = format_table_cell(report.spearman_r, report.p_value)
            print(f"✅ {feature_set} / {target}: {format_result_line(report.spearman_r, report.p_value)}")
            n_ok += 1

    grid.index.name = "feature_set"
    write_csv(str(Path(config.output_dir) / "reports" / "results_grid.csv"), grid, index=True)
    if n_ok == 0:
        print("❌ 평가 가능한 조합이 없습니다")
        return 1
    return 0


def cmd_cohort_report(config: RunConfig) -> int:
    """인구통계 요약, 점수 상관, 이상 판정 표(CSV)"""
    participants, ecas = _load_cohort(config)
    known = {p.id for p in participants}
    orphan = sorted(set(ecas) - known)
    if orphan:
        logger.warning("participants 에 없는 ECAS 참가자 무시: %s", orphan)

    out = Path(config.output_dir) / "cohort"
    summary = cohort_summary(participants)
    write_csv(str(out / "summary.csv"), summary)
    write_csv(str(out / "correlations.csv"), score_correlations(participants, ecas), index=True)
    write_csv(str(out / "descriptives.csv"), score_descriptives(
        {k: v for k, v in ecas.items() if k in known}, maxima=config.maxima, cutoffs=config.cutoffs,
    ))
    write_csv(str(out / "flags.csv"), flag_table(participants, ecas, config.cutoffs))
    write_csv(str(out / "abnormality.csv"), abnormality_rates(participants, ecas, config.cutoffs))

    if config.sessions_csv:
        matched = match_sessions(load_sessions(config.sessions_csv), ecas, config.window_days, known)
        rows = [
            {
                "participant_id": pid,
                "session_id": s.session_id,
                "record_date": s.record_date.isoformat(),
                "days_from_test": (s.record_date - ecas[pid].test_date).days,
            }
            for pid, sessions in matched.items() for s in sessions
        ]
        write_csv(str(out / "matched_sessions.csv"),
                  pd.DataFrame(rows, columns=["participant_id", "session_id", "record_date", "days_from_test"]))

    counts = summary[summary["variable"] == "participants"].set_index("group")["n"]
    print(f"✅ 코호트 보고서: ALS N={counts.get('ALS', 0)}, non-ALS N={counts.get('non-ALS', 0)} → {out}")
    return 0


def cmd_permtest(config: RunConfig, feature_set: str, target: str, covariates: Sequence[str] = ()) -> int:
    """순열 귀무 분포와 p 값만 계산 → permtest/<stem>.csv, permtest/<stem>__null.csv"""
    ds = build_dataset(config, feature_set, target, covariates)
    name = f"{ds.feature_set_tag}:{ds.target_name}"
    cv_seed = derive_seed(config.master_seed, f"cv:{name}")
    perm_seed = derive_seed(config.master_seed, f"perm:{name}")

    observed_r, _ = kfold_cv(ds, config.k_folds, cv_seed, config.ridge_lambda)
    print(f"🔄 순열 검정 {config.n_permutations}회: {feature_set} → {target}")
    null = permutation_null(ds, config.k_folds, config.n_permutations, perm_seed, cv_seed,
                            config.ridge_lambda, config.n_jobs)
    p_value = p_value_from_null(observed_r, null)

    stem = result_stem(feature_set, target, covariates)
    out = Path(config.output_dir) / "permtest"
    write_csv(str(out / f"{stem}__null.csv"),
              pd.DataFrame({"replicate": np.arange(null.size), "null_r": null}))
    write_csv(str(out / f"{stem}.csv"), pd.DataFrame([{
        "feature_set": ds.feature_set_tag,
        "target": target,
        "observed_r": np.nan if observed_r is None else observed_r,
        "p_value": p_value,
        "n_permutations": config.n_permutations,
        "seed": config.master_seed,
        "permutation_seed": perm_seed,
    }]))
    print(f"✅ {feature_set} / {target}: {format_result_line(observed_r, p_value)}")
    return 0
