"""
음성/전사 특징 추출 패키지
음향 1종 + 언어 4종(명료도, 심리언어학, 그래프, 행동어) 특징 세트
"""

from .audio import Recording, FrameTrack, parse_wav, acoustic_summary
from .transcripts import Token, SessionTranscripts, tokenize, load_session_transcripts
from .intelligibility import align, wer_mer_wil, intelligibility_features
from .psycholing import LexiconTagger, NltkTagger, make_tagger, pos_tag, lexical_stats, psycholinguistic_features
from .semantics import EmbeddingTable, load_embeddings, action_word_features
from .lexgraph import build_graph, graph_metrics, windowed_metrics
from .extractor import FeatureVector, SessionExtractor

__all__ = [
    'Recording',
    'FrameTrack',
    'parse_wav',
    'acoustic_summary',
    'Token',
    'SessionTranscripts',
    'tokenize',
    'load_session_transcripts',
    'align',
    'wer_mer_wil',
    'intelligibility_features',
    'LexiconTagger',
    'NltkTagger',
    'make_tagger',
    'pos_tag',
    'lexical_stats',
    'psycholinguistic_features',
    'EmbeddingTable',
    'load_embeddings',
    'action_word_features',
    'build_graph',
    'graph_metrics',
    'windowed_metrics',
    'FeatureVector',
    'SessionExtractor'
]
