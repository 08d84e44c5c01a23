"""Word co-occurrence graphs over a window of processed posts.

Each post yields an undirected graph whose nodes are its distinct words
(tagged with term frequency and a document frequency of 1) and whose
edges connect every distinct word pair with weight 1; co-occurrence is
binary per post regardless of multiplicities. The window graph is the
element-wise sum of its post graphs: tf and edge weights add, df counts
posts containing the word. Merging is associative and commutative, so
post order never matters.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .tokenize import ProcessedPost


def _edge_key(x: str, y: str) -> tuple[str, str]:
    # Canonical endpoint order enforces symmetry structurally.
    return (x, y) if x <= y else (y, x)


@dataclass
class CoocGraph:
    tf: dict[str, int] = field(default_factory=dict)
    df: dict[str, int] = field(default_factory=dict)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)
    batch_size: int = 0

    def cooc(self, x: str, y: str) -> int:
        """Co-occurrence count of an unordered word pair (0 if absent)."""
        if x == y:
            return 0
        return self.edges.get(_edge_key(x, y), 0)

    @property
    def words(self) -> list[str]:
        return sorted(self.tf)


def post_graph(post: ProcessedPost) -> CoocGraph:
    """Graph of a single post: tf = multiplicity, df = 1, unit edges
    between every pair of distinct words, no self-loops."""
    counts = Counter(post)
    graph = CoocGraph(batch_size=1)
    graph.tf = dict(counts)
    graph.df = {word: 1 for word in counts}
    for x, y in combinations(sorted(counts), 2):
        graph.edges[(x, y)] = 1
    return graph


def merge_post(batch_graph: CoocGraph, post_g: CoocGraph) -> CoocGraph:
    """Accumulate one post graph into the window graph (in place)."""
    for word, tf in post_g.tf.items():
        batch_graph.tf[word] = batch_graph.tf.get(word, 0) + tf
        batch_graph.df[word] = batch_graph.df.get(word, 0) + post_g.df[word]
    for key, weight in post_g.edges.items():
        batch_graph.edges[key] = batch_graph.edges.get(key, 0) + weight
    return batch_graph


def build_batch_graph(posts: list[ProcessedPost], count_empty_posts: bool = True) -> CoocGraph:
    """Fold merge_post over all posts of a window.

    batch_size is the raw post count by default; with
    count_empty_posts=False only posts that still contain words after
    filtering are counted.
    """
    graph = CoocGraph()
    for post in posts:
        if post:
            merge_post(graph, post_graph(post))
    if count_empty_posts:
        graph.batch_size = len(posts)
    else:
        graph.batch_size = sum(1 for post in posts if post)
    return graph


def save_cooc_graph(graph: CoocGraph, window_index: int, nodes_path: str, edges_path: str) -> None:
    """Persist as two TSV files with a batch-size/window header line."""
    header = f"# batch_size={graph.batch_size}\twindow={window_index}\n"
    with open(nodes_path, "w", encoding="utf-8") as fh:
        fh.write(header)
        for word in sorted(graph.tf):
            fh.write(f"{word}\t{graph.tf[word]}\t{graph.df[word]}\n")
    with open(edges_path, "w", encoding="utf-8") as fh:
        fh.write(header)
        for (x, y), weight in sorted(graph.edges.items()):
            fh.write(f"{x}\t{y}\t{weight}\n")


def load_cooc_graph(nodes_path: str, edges_path: str) -> tuple[CoocGraph, int]:
    """Inverse of save_cooc_graph; returns (graph, window_index)."""
    graph = CoocGraph()
    window_index = _read_header(nodes_path, graph)
    with open(nodes_path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            word, tf, df = line.rstrip("\n").split("\t")
            graph.tf[word] = int(tf)
            graph.df[word] = int(df)
    with open(edges_path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            x, y, weight = line.rstrip("\n").split("\t")
            graph.edges[_edge_key(x, y)] = int(weight)
    return graph, window_index


def _read_header(path: str, graph: CoocGraph) -> int:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
    if not header.startswith("#"):
        raise ValueError(f"{path}: missing header line")
    fields = dict(part.split("=", 1) for part in header[1:].split())
    graph.batch_size = int(fields["batch_size"])
    return int(fields["window"])
