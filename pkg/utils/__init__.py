"""
유틸리티 패키지 (설정, 예외, WAV 코덱, 결과 파일 작성)
"""

from .config import FEATURE_SETS, SCORE_NAMES, RunConfig, derive_seed
from .errors import ConfigError, SpeechCognitionError
from .report_io import format_result_line, format_table_cell, write_csv, write_json

__all__ = [
    'RunConfig',
    'FEATURE_SETS',
    'SCORE_NAMES',
    'derive_seed',
    'SpeechCognitionError',
    'ConfigError',
    'format_result_line',
    'format_table_cell',
    'write_csv',
    'write_json'
]
