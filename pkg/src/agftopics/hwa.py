"""Word-association scoring over a window co-occurrence graph.

Words are rated tf-idf style (Kr), pruned to the top h percent, and the
survivors are linked by directed association strengths: CIMAWA combines
the forward co-occurrence ratio with a damped backward ratio, and the
associative gravity force (AGF) scales CIMAWA by the keyword-rating
ratio of the endpoints. AGF is asymmetric by construction, so the result
is a directed weighted graph over the keywords.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cooc import CoocGraph


@dataclass
class AgfGraph:
    """Directed keyword graph; node payload is the keyword rating."""

    kr: dict[str, float] = field(default_factory=dict)
    edges: dict[tuple[str, str], float] = field(default_factory=dict)

    @property
    def nodes(self) -> list[str]:
        return sorted(self.kr)

    def agf(self, x: str, y: str) -> float:
        return self.edges.get((x, y), 0.0)


def keyword_rating(graph: CoocGraph) -> dict[str, float]:
    """Kr(w) = tf(w) * ln(batch_size / df(w)), natural log."""
    if graph.batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    ratings = {}
    for word, tf in graph.tf.items():
        df = graph.df.get(word, 0)
        if df < 1 or df > graph.batch_size:
            raise ValueError(
                f"df({word}) = {df} violates 1 <= df <= batch_size = {graph.batch_size}"
            )
        ratings[word] = tf * math.log(graph.batch_size / df)
    return ratings


def select_keywords(
    ratings: dict[str, float], h: float, tf: dict[str, int] | None = None
) -> list[str]:
    """Top ceil(h% of |W|) words by rating, sorted descending.

    Ties at the cut break by higher tf, then lexicographic word order.
    Words rated 0 are excluded even inside the cut: their rating ratio is
    degenerate downstream and they carry no discriminative value.
    """
    if not 0 < h <= 100:
        raise ValueError(f"h must lie in (0, 100], got {h}")
    if not ratings:
        raise ValueError("ratings must be non-empty")
    tf = tf or {}
    count = math.ceil(h / 100 * len(ratings))
    ordered = sorted(ratings, key=lambda w: (-ratings[w], -tf.get(w, 0), w))
    return [w for w in ordered[:count] if ratings[w] > 0]


def cimawa(x: str, y: str, graph: CoocGraph, delta: float) -> float:
    """CooC(x,y)/tf(y) + delta * CooC(x,y)/tf(x)."""
    if x == y:
        raise ValueError("cimawa requires two distinct words")
    tf_x = graph.tf.get(x, 0)
    tf_y = graph.tf.get(y, 0)
    if tf_x <= 0 or tf_y <= 0:
        raise ValueError(f"cimawa requires positive tf for both words: {x!r}, {y!r}")
    cooc = graph.cooc(x, y)
    return cooc / tf_y + delta * cooc / tf_x


def build_agf_graph(
    graph: CoocGraph, keywords: list[str], ratings: dict[str, float], delta: float
) -> AgfGraph:
    """Directed graph over the keywords: for every ordered pair with
    positive co-occurrence, agf(x,y) = cimawa(x,y) * kr(x)/kr(y)."""
    for word in keywords:
        if ratings.get(word, 0.0) <= 0:
            raise ValueError(f"keyword {word!r} has non-positive rating")
    agf = AgfGraph(kr={w: ratings[w] for w in keywords})
    keyword_list = sorted(keywords)
    for x in keyword_list:
        for y in keyword_list:
            if x == y:
                continue
            if graph.cooc(x, y) <= 0:
                continue
            agf.edges[(x, y)] = cimawa(x, y, graph, delta) * ratings[x] / ratings[y]
    return agf


def save_agf_graph(graph: AgfGraph, nodes_path: str, edges_path: str) -> None:
    """Persist as a `word kr` node list and `src dst agf` edge list."""
    with open(nodes_path, "w", encoding="utf-8") as fh:
        for word in graph.nodes:
            fh.write(f"{word}\t{graph.kr[word]!r}\n")
    with open(edges_path, "w", encoding="utf-8") as fh:
        for (x, y), weight in sorted(graph.edges.items()):
            fh.write(f"{x}\t{y}\t{weight!r}\n")


def load_agf_graph(nodes_path: str, edges_path: str) -> AgfGraph:
    graph = AgfGraph()
    with open(nodes_path, encoding="utf-8") as fh:
        for line in fh:
            word, kr = line.rstrip("\n").split("\t")
            graph.kr[word] = float(kr)
    with open(edges_path, encoding="utf-8") as fh:
        for line in fh:
            x, y, weight = line.rstrip("\n").split("\t")
            graph.edges[(x, y)] = float(weight)
    return graph
