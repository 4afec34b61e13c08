from collections import Counter

import numpy as np
import pytest

from features.lexgraph import METRIC_NAMES, build_graph, graph_metrics, windowed_metrics

SENTENCE = "the boy is looking for looking at the insect".split()


def _oracle_cycles(tokens, max_len=5):
    """가장 작은 노드에서 시작하는 DFS 로 단순 순환을 길이별로 센다"""
    adj = {}
    for u, v in zip(tokens, tokens[1:]):
        adj.setdefault(u, set()).add(v)
    counts = Counter()

    def dfs(start, node, path):
        for nxt in adj.get(node, ()):
            if nxt == start:
                counts[len(path)] += 1
            elif nxt > start and nxt not in path and len(path) < max_len:
                dfs(start, nxt, path + [nxt])

    for start in sorted(set(tokens)):
        dfs(start, start, [start])
    return counts


def _oracle_lsc(tokens):
    nodes = sorted(set(tokens))
    index = {w: i for i, w in enumerate(nodes)}
    reach = np.eye(len(nodes), dtype=bool)
    for u, v in zip(tokens, tokens[1:]):
        reach[index[u], index[v]] = True
    for k in range(len(nodes)):
        reach = reach | (reach[:, [k]] & reach[[k], :])
    mutual = reach & reach.T
    return int(mutual.sum(axis=1).max())


def test_build_graph_nodes_and_edges():
    g = build_graph(["a", "b", "a"])
    assert set(g.nodes) == {"a", "b"}
    assert set(g.edges) == {("a", "b"), ("b", "a")}


def test_repeated_pairs_count_multiplicity():
    g = build_graph(["a", "b", "a", "b"])
    assert g["a"]["b"]["multiplicity"] == 2
    assert g["b"]["a"]["multiplicity"] == 1


def test_self_loop():
    g = build_graph(["a", "a"])
    assert list(g.edges) == [("a", "a")]
    m = graph_metrics(g)
    assert m.loops == {1: 1}
    assert m.lsc_size == 1


def test_two_cycle_metrics():
    m = graph_metrics(build_graph(["a", "b", "a"]))
    assert m.loops.get(2) == 1
    assert m.lsc_size == 2
    assert m.degree_mean == 2.0
    assert m.degree_sd == 0.0


def test_repetition_sentence():
    m = graph_metrics(build_graph(SENTENCE))
    assert m.n_nodes == 7
    assert m.n_edges == 8
    assert m.loops.get(2) == 1
    assert m.loops.get(5) == 1
    assert m.lsc_size == 6
    assert m.as_dict()["loops_3"] == 0.0


def test_empty_graph_has_no_metrics():
    assert graph_metrics(build_graph([])) is None


def test_metrics_match_brute_force_oracles():
    rng = np.random.default_rng(77)
    vocab = ["a", "b", "c", "d", "e"]
    for _ in range(1000):
        tokens = rng.choice(vocab, size=rng.integers(1, 16)).tolist()
        m = graph_metrics(build_graph(tokens))
        expected = _oracle_cycles(tokens)
        for k in range(1, 6):
            assert m.loops.get(k, 0) == expected.get(k, 0)
        assert m.lsc_size == _oracle_lsc(tokens)
        assert m.n_nodes == len(set(tokens))
        assert m.n_edges == len(set(zip(tokens, tokens[1:])))


def test_short_text_is_one_window():
    tokens = SENTENCE + ["again"]
    f = windowed_metrics(tokens, window_sizes=(30,))
    whole = graph_metrics(build_graph(tokens)).as_dict()
    assert {k[len("w30_"):]: v for k, v in f.items()} == whole


def test_constant_sequence_windows():
    f = windowed_metrics(["a"] * 40, window_sizes=(30,))
    assert f["w30_n_nodes"] == 1.0
    assert f["w30_loops_1"] == 1.0
    assert f["w30_lsc_size"] == 1.0


def test_two_windows_are_averaged():
    rng = np.random.default_rng(4)
    tokens = rng.choice(list("abcdefgh"), size=31).tolist()
    f = windowed_metrics(tokens, window_sizes=(30,))
    first = graph_metrics(build_graph(tokens[:30])).as_dict()
    second = graph_metrics(build_graph(tokens[1:])).as_dict()
    for metric in METRIC_NAMES:
        assert f[f"w30_{metric}"] == pytest.approx((first[metric] + second[metric]) / 2)


def test_default_windows_and_empty_input():
    f = windowed_metrics([])
    assert len(f) == 3 * len(METRIC_NAMES)
    assert all(v is None for v in f.values())
    assert "w100_lsc_size" in f


def test_invalid_window_size():
    with pytest.raises(ValueError):
        windowed_metrics(["a"], window_sizes=(0,))
