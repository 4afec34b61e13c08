"""
음성 기반 ALS 인지 점수 예측 파이프라인 메인 실행 파일
extract / evaluate / cohort-report / permtest 서브커맨드
"""

import os
import sys
from typing import List, Optional

# 현재 디렉토리를 Python 경로에 추가
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from cli.commands import cmd_cohort_report, cmd_evaluate, cmd_evaluate_all, cmd_extract, cmd_permtest
from cli.parser import build_config, build_parser, configure_logging, parse_session_filter
from utils.errors import CohortFormatError, ConfigError, SpeechCognitionError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def run(argv: Optional[List[str]] = None) -> int:
    """
    명령 실행

    Returns:
        종료 코드 (0 성공, 1 평가 실패 / 추출 전부 실패, 2 사용법 / 설정 오류)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    configure_logging(args.verbose)

    try:
        config = build_config(args)
        covariates = tuple(getattr(args, "covariate", None) or ())

        if args.command == "extract":
            return cmd_extract(config, parse_session_filter(args.sessions), args.feature_set)

        if args.command == "evaluate":
            if args.all:
                return cmd_evaluate_all(config, covariates)
            if not args.feature_set or not args.target:
                raise ConfigError("evaluate 에는 --feature-set 과 --target (또는 --all)이 필요합니다")
            return cmd_evaluate(config, args.feature_set, args.target, covariates)

        if args.command == "cohort-report":
            return cmd_cohort_report(config)

        return cmd_permtest(config, args.feature_set, args.target, covariates)

    except (ConfigError, CohortFormatError) as e:
        print(f"❌ 설정/입력 오류: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SpeechCognitionError as e:
        print(f"❌ 실행 실패: {e}", file=sys.stderr)
        return EXIT_FAILURE


def main():
    """메인 애플리케이션 함수"""
    sys.exit(run())


if __name__ == "__main__":
    main()
