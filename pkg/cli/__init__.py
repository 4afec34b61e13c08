"""
명령행 인터페이스 패키지
"""

from .parser import build_parser, build_config
from .commands import cmd_extract, cmd_evaluate, cmd_evaluate_all, cmd_cohort_report, cmd_permtest

__all__ = [
    'build_parser',
    'build_config',
    'cmd_extract',
    'cmd_evaluate',
    'cmd_evaluate_all',
    'cmd_cohort_report',
    'cmd_permtest'
]
