"""
코호트 분석 및 회귀 모델 평가 패키지
"""

from .cohort import Participant, EcasScores, Session, match_sessions, flag_abnormal, cohort_summary
from .inference import Dataset, FitResult, EvalReport, assemble, fit, spearman, kfold_cv, evaluate

__all__ = [
    'Participant',
    'EcasScores',
    'Session',
    'match_sessions',
    'flag_abnormal',
    'cohort_summary',
    'Dataset',
    'FitResult',
    'EvalReport',
    'assemble',
    'fit',
    'spearman',
    'kfold_cv',
    'evaluate'
]
