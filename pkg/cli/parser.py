"""
명령행 인자 파서와 RunConfig 구성
"""

import argparse
import logging
from typing import List, Optional

from utils.config import COVARIATE_NAMES, FEATURE_SETS, SCORE_NAMES, RunConfig


def _common_options() -> argparse.ArgumentParser:
    """모든 서브커맨드가 공유하는 옵션"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML 설정 파일")
    common.add_argument("--seed", type=int, metavar="N", help="master seed (설정 파일보다 우선)")
    common.add_argument("--out", metavar="DIR", help="출력 디렉터리")
    common.add_argument("--verbose", "-v", action="store_true", help="DEBUG 로그 출력")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="speech-cognition",
        description="음성/전사 특징으로 ECAS 인지 점수를 예측하는 배치 파이프라인",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    extract = sub.add_parser("extract", parents=[common], help="세션별 특징 파일 생성")
    extract.add_argument("--sessions", metavar="ID[,ID...]", help="추출할 session id 목록 (쉼표 구분)")
    extract.add_argument("--feature-set", choices=list(FEATURE_SETS), action="append",
                         help="추출할 특징 세트 (반복 가능, 기본: 전체)")
    extract.add_argument("--jobs", type=int, metavar="N", help="동시 추출 스레드 수")
    extract.add_argument("--timeout", type=float, metavar="SEC", help="(세션, 특징 세트) 1건당 제한 시간(초)")

    evaluate = sub.add_parser("evaluate", parents=[common], help="교차검증 + 순열 검정 보고서")
    evaluate.add_argument("--feature-set", metavar="TAG", help=f"특징 세트 ({', '.join(FEATURE_SETS)})")
    evaluate.add_argument("--target", metavar="SCORE", help=f"목표 점수 ({', '.join(SCORE_NAMES)})")
    evaluate.add_argument("--all", action="store_true", help="모든 (특징 세트 × 점수) 조합 평가")
    evaluate.add_argument("--covariate", action="append", choices=list(COVARIATE_NAMES),
                          help="특징에 덧붙일 참가자 변수 (반복 가능)")
    evaluate.add_argument("--permutations", type=int, metavar="N", help="순열 횟수")
    evaluate.add_argument("--jobs", type=int, metavar="N", help="순열 검정 스레드 수")

    sub.add_parser("cohort-report", parents=[common], help="코호트 요약/상관/이상 판정 표")

    permtest = sub.add_parser("permtest", parents=[common], help="순열 귀무 분포만 실행")
    permtest.add_argument("--feature-set", metavar="TAG", required=True)
    permtest.add_argument("--target", metavar="SCORE", required=True)
    permtest.add_argument("--covariate", action="append", choices=list(COVARIATE_NAMES))
    permtest.add_argument("--permutations", type=int, metavar="N")
    permtest.add_argument("--jobs", type=int, metavar="N")

    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    설정 파일 + 명령행 플래그 → 검증된 RunConfig

    플래그가 설정 파일 값보다 우선한다.
    """
    config = RunConfig.from_toml(args.config) if args.config else RunConfig.create_default()
    config = config.with_overrides(
        master_seed=args.seed,
        output_dir=args.out,
        n_jobs=getattr(args, "jobs", None),
        n_permutations=getattr(args, "permutations", None),
        extract_timeout_s=getattr(args, "timeout", None),
    )
    config.validate()
    return config


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def parse_session_filter(raw: Optional[str]) -> Optional[List[str]]:
    if raw is None:
        return None
    return [s.strip() for s in raw.split(",") if s.strip()]
