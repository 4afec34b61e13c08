"""
단어 인접 그래프 특징
노드 = 고유 단어, 방향 간선 = 인접 단어 쌍. 고정 크기 윈도별 그래프 지표의 평균
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import networkx as nx
import numpy as np

MAX_LOOP_LENGTH = 5
METRIC_NAMES = (
    "n_nodes", "n_edges", "degree_mean", "degree_sd",
    *(f"loops_{k}" for k in range(1, MAX_LOOP_LENGTH + 1)),
    "lsc_size",
)


@dataclass(frozen=True)
class GraphMetrics:
    n_nodes: int
    n_edges: int
    degree_mean: float
    degree_sd: float
    loops: Dict[int, int]
    lsc_size: int

    def as_dict(self) -> Dict[str, float]:
        out = {
            "n_nodes": float(self.n_nodes),
            "n_edges": float(self.n_edges),
            "degree_mean": self.degree_mean,
            "degree_sd": self.degree_sd,
        }
        for k in range(1, MAX_LOOP_LENGTH + 1):
            out[f"loops_{k}"] = float(self.loops.get(k, 0))
        out["lsc_size"] = float(self.lsc_size)
        return out


def build_graph(tokens: Sequence[str]) -> nx.DiGraph:
    """
    토큰 열 → 방향 그래프

    간선 속성 multiplicity 에 같은 인접 쌍이 나온 횟수를 기록한다 (자기 루프 허용).
    """
    g = nx.DiGraph()
    g.add_nodes_from(tokens)
    for (u, v), count in Counter(zip(tokens, tokens[1:])).items():
        g.add_edge(u, v, multiplicity=count)
    return g


def graph_metrics(g: nx.DiGraph) -> Optional[GraphMetrics]:
    """
    그래프 지표 계산 (빈 그래프면 None)

    차수 = 고유 간선 기준 in + out, loops_k = 길이 k 단순 순환 수(회전 동치는 1개로),
    lsc_size = 가장 큰 강연결 성분의 노드 수
    """
    if g.number_of_nodes() == 0:
        return None

    degrees = np.array([d for _, d in g.degree()], dtype=np.float64)
    loops = Counter(len(c) for c in nx.simple_cycles(g, length_bound=MAX_LOOP_LENGTH))
    lsc = max(len(c) for c in nx.strongly_connected_components(g))

    return GraphMetrics(
        n_nodes=g.number_of_nodes(),
        n_edges=g.number_of_edges(),
        degree_mean=float(degrees.mean()),
        degree_sd=float(degrees.std()),
        loops=dict(loops),
        lsc_size=lsc,
    )


def windowed_metrics(
    tokens: Sequence[str],
    window_sizes: Sequence[int] = (30, 50, 100),
) -> Dict[str, Optional[float]]:
    """
    윈도 크기별 그래프 지표 평균 (stride 1)

    토큰 수가 윈도보다 적으면 전체를 윈도 하나로 본다. 토큰이 없으면 모든 값이 None.

    Returns:
        w{w}_{metric} 특징 맵
    """
    tokens = list(tokens)
    features: Dict[str, Optional[float]] = {}
    for w in window_sizes:
        if w < 1:
            raise ValueError(f"윈도 크기는 1 이상이어야 합니다: {w}")
        if not tokens:
            features.update({f"w{w}_{m}": None for m in METRIC_NAMES})
            continue

        n_windows = max(1, len(tokens) - w + 1)
        per_window = [
            graph_metrics(build_graph(tokens[start:start + w])).as_dict()
            for start in range(n_windows)
        ]
        for metric in METRIC_NAMES:
            features[f"w{w}_{metric}"] = float(np.mean([m[metric] for m in per_window]))
    return features
