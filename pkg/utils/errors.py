"""
파이프라인 공통 예외 계층
모든 예외는 SpeechCognitionError 를 상속하므로 CLI 에서 한 번에 처리할 수 있다
"""


class SpeechCognitionError(Exception):
    """파이프라인 최상위 예외"""
    pass


class ConfigError(SpeechCognitionError):
    """설정 파일/플래그 오류 (CLI 종료 코드 2)"""
    pass


# WAV 디코딩
class WavFormatError(SpeechCognitionError):
    """WAV 파일 형식 오류"""
    pass


class WavHeaderError(WavFormatError):
    """RIFF/WAVE 헤더 또는 청크 구조 손상"""
    pass


class UnsupportedCodecError(WavFormatError):
    """지원하지 않는 코덱 태그/비트 깊이/샘플링 레이트"""
    pass


class TruncatedDataError(WavFormatError):
    """data 청크가 선언된 크기보다 짧음"""
    pass


class RecordingTooShortError(SpeechCognitionError):
    """분석 프레임 하나보다 짧은 녹음"""
    pass


# 전사 파일
class TranscriptSchemaError(SpeechCognitionError):
    """전사 파일 스키마 위반"""
    pass


class ConfidenceRangeError(TranscriptSchemaError):
    """confidence 값이 [0, 1] 범위를 벗어남"""

    def __init__(self, message: str, token_index: int):
        super().__init__(message)
        self.token_index = token_index


class SessionMismatchError(TranscriptSchemaError):
    """small/large 전사 파일의 session id 불일치"""
    pass


# 임베딩
class EmbeddingFormatError(SpeechCognitionError):
    """단어 벡터 파일 형식 오류"""
    pass


class SeedVocabularyError(ConfigError):
    """시드 단어가 임베딩 테이블에 없음 (시작 시점 설정 오류)"""
    pass


# 코호트
class CohortFormatError(SpeechCognitionError):
    """코호트 CSV 형식 오류 (행/열 진단 포함)"""
    pass


class CohortError(SpeechCognitionError):
    """코호트 분석 오류"""
    pass


class DuplicateSessionError(CohortError):
    pass


class UnknownParticipantError(CohortError):
    pass


class EmptyGroupError(CohortError):
    pass


# 모델링
class InsufficientDataError(SpeechCognitionError):
    """모델링에 필요한 행/특징이 부족함"""
    pass


class DegenerateDesignError(SpeechCognitionError):
    """모든 특징이 상수인 설계 행렬"""
    pass
