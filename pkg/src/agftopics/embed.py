"""Random-walk node embeddings for directed weighted keyword graphs.

Walks follow directed edges with second-order biases: stepping back to
the previous node is scaled by 1/p (return parameter), stepping to a
node adjacent to the previous one on the undirected skeleton keeps its
weight, and any other step is scaled by 1/q (in-out parameter). With
p = q = 1 the biases cancel and steps are weight-proportional, which is
the uniform-walk special case. Embeddings are trained on the walks with
a skip-gram objective estimated by negative sampling, one pair at a time
in a fixed order, so results are reproducible bit for bit under a fixed
seed in single-threaded mode.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.special import expit

from .hwa import AgfGraph
from .seeding import derive_rng, derive_seed

NEG_TABLE_BITS = 16
SIG_TABLE_SIZE = 1024
MAX_EXP = 8.0

_SIG_TABLE = expit(
    (np.arange(SIG_TABLE_SIZE) + 0.5) / SIG_TABLE_SIZE * 2 * MAX_EXP - MAX_EXP
).astype(np.float32)


@dataclass
class WalkConfig:
    num_walks: int = 64
    walk_length: int = 8
    p: float = 1.0
    q: float = 0.5
    seed: int = 0

    def validate(self) -> None:
        if self.num_walks < 1 or self.walk_length < 1:
            raise ValueError("num_walks and walk_length must be at least 1")
        if self.p <= 0 or self.q <= 0:
            raise ValueError("walk bias parameters p and q must be positive")


@dataclass
class TrainConfig:
    dim: int = 32
    window: int = 10
    epochs: int = 100
    negative_samples: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    seed: int = 0

    def validate(self) -> None:
        if self.dim < 1 or self.window < 1 or self.epochs < 1:
            raise ValueError("dim, window, and epochs must be at least 1")
        if self.negative_samples < 0:
            raise ValueError("negative_samples must be non-negative")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


class _WalkIndex:
    """Adjacency arrays and cached biased transition tables."""

    def __init__(self, graph: AgfGraph):
        self.nodes = graph.nodes
        self.node_id = {node: i for i, node in enumerate(self.nodes)}
        out_nbrs: list[list[int]] = [[] for _ in self.nodes]
        out_wts: list[list[float]] = [[] for _ in self.nodes]
        self.skeleton: list[set[int]] = [set() for _ in self.nodes]
        for (x, y), weight in sorted(graph.edges.items()):
            xi, yi = self.node_id[x], self.node_id[y]
            out_nbrs[xi].append(yi)
            out_wts[xi].append(weight)
            self.skeleton[xi].add(yi)
            self.skeleton[yi].add(xi)
        self.out_nbrs = [np.array(n, dtype=np.int64) for n in out_nbrs]
        self.out_wts = [np.array(w, dtype=np.float64) for w in out_wts]
        self._cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    def transition(self, prev: int, cur: int, p: float, q: float) -> tuple[np.ndarray, np.ndarray]:
        """(neighbor ids, cumulative probabilities) for a step from cur
        after arriving from prev; prev = -1 means a walk's first step."""
        key = (prev, cur)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        nbrs = self.out_nbrs[cur]
        weights = self.out_wts[cur].copy()
        if prev >= 0:
            prev_adjacent = self.skeleton[prev]
            for i, nbr in enumerate(nbrs):
                if nbr == prev:
                    weights[i] /= p
                elif nbr not in prev_adjacent:
                    weights[i] /= q
        total = weights.sum()
        cumulative = np.cumsum(weights / total)
        cumulative[-1] = 1.0
        self._cache[key] = (nbrs, cumulative)
        return nbrs, cumulative


def step_distribution(
    graph: AgfGraph, prev: str | None, cur: str, p: float, q: float
) -> dict[str, float]:
    """Analytic next-step distribution from cur given the previous node."""
    index = _WalkIndex(graph)
    cur_id = index.node_id[cur]
    prev_id = index.node_id[prev] if prev is not None else -1
    nbrs, cumulative = index.transition(prev_id, cur_id, p, q)
    probs = np.diff(cumulative, prepend=0.0)
    return {index.nodes[nbr]: float(prob) for nbr, prob in zip(nbrs, probs)}


def generate_walks(graph: AgfGraph, cfg: WalkConfig) -> list[list[str]]:
    """num_walks biased walks from every node; sinks end walks early.

    Each walk consumes its own RNG stream derived from (seed, node,
    walk index), so walk order and any parallel scheduling cannot change
    the result.
    """
    cfg.validate()
    if not graph.kr:
        raise ValueError("cannot walk an empty graph")
    index = _WalkIndex(graph)
    walks = []
    for node in index.nodes:
        start = index.node_id[node]
        for walk_index in range(cfg.num_walks):
            rng = derive_rng(cfg.seed, "walk", node, walk_index)
            walk_ids = [start]
            prev, cur = -1, start
            while len(walk_ids) < cfg.walk_length:
                if index.out_nbrs[cur].size == 0:
                    break
                nbrs, cumulative = index.transition(prev, cur, cfg.p, cfg.q)
                step = int(nbrs[np.searchsorted(cumulative, rng.random())])
                walk_ids.append(step)
                prev, cur = cur, step
            walks.append([index.nodes[i] for i in walk_ids])
    return walks


def walks_to_pairs(
    walks: list[list[str]], node_id: dict[str, int], window: int
) -> tuple[np.ndarray, np.ndarray]:
    """(center, context) id pairs for all in-window positions.

    Walks are grouped by length so each group expands with one vectorized
    gather; grouping order (ascending length, original order within a
    group) is fixed, keeping the training sequence deterministic.
    """
    by_length: dict[int, list[list[int]]] = {}
    for walk in walks:
        ids = [node_id[node] for node in walk]
        by_length.setdefault(len(ids), []).append(ids)
    centers_parts, contexts_parts = [], []
    for length in sorted(by_length):
        if length < 2:
            continue
        i_idx, j_idx = [], []
        for i in range(length):
            for j in range(max(0, i - window), min(length, i + window + 1)):
                if j != i:
                    i_idx.append(i)
                    j_idx.append(j)
        matrix = np.array(by_length[length], dtype=np.int32)
        centers_parts.append(matrix[:, i_idx].ravel())
        contexts_parts.append(matrix[:, j_idx].ravel())
    if not centers_parts:
        empty = np.empty(0, dtype=np.int32)
        return empty, empty
    return np.concatenate(centers_parts), np.concatenate(contexts_parts)


@njit(cache=True, fastmath=True)
def _sgns_epoch(emb_in, emb_out, centers, contexts, neg_table, n_neg, lr_start, lr_end, sig_table, state):
    # One pass over all (center, context) pairs with per-pair linear
    # learning-rate decay from lr_start to lr_end. Negatives come from a
    # precomputed unigram table indexed by an in-kernel 64-bit LCG;
    # draws that hit the positive context are skipped, not redrawn.
    n_pairs = centers.shape[0]
    dim = emb_in.shape[1]
    mask = np.uint64(neg_table.shape[0] - 1)
    n_sig = sig_table.shape[0]
    grad_c = np.zeros(dim, dtype=np.float32)
    s = state
    step = (lr_end - lr_start) / n_pairs
    for i in range(n_pairs):
        lr = np.float32(lr_start + step * i)
        c = centers[i]
        vrow = emb_in[c]
        for d in range(dim):
            grad_c[d] = 0.0
        for t in range(n_neg + 1):
            if t == 0:
                o = contexts[i]
                label = np.float32(1.0)
            else:
                s = s * np.uint64(6364136223846793005) + np.uint64(1442695040888963407)
                o = neg_table[(s >> np.uint64(33)) & mask]
                if o == contexts[i]:
                    continue
                label = np.float32(0.0)
            urow = emb_out[o]
            dot = np.float32(0.0)
            for d in range(dim):
                dot += vrow[d] * urow[d]
            if dot >= np.float32(MAX_EXP):
                sig = np.float32(1.0)
            elif dot <= np.float32(-MAX_EXP):
                sig = np.float32(0.0)
            else:
                sig = sig_table[int((dot + MAX_EXP) * (n_sig / (2.0 * MAX_EXP)))]
            g = lr * (label - sig)
            for d in range(dim):
                grad_c[d] += g * urow[d]
                urow[d] += g * vrow[d]
        for d in range(dim):
            vrow[d] += grad_c[d]
    return s


@dataclass
class SkipgramModel:
    nodes: list[str]
    emb_in: np.ndarray
    emb_out: np.ndarray
    noise: np.ndarray
    objective_history: list[float] = field(default_factory=list)

    def vectors(self) -> dict[str, np.ndarray]:
        return {node: self.emb_in[i].copy() for i, node in enumerate(self.nodes)}


def _noise_table(visit_counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    noise = visit_counts.astype(np.float64) ** 0.75
    noise /= noise.sum()
    cdf = np.cumsum(noise)
    cdf[-1] = 1.0
    size = 1 << NEG_TABLE_BITS
    table = np.searchsorted(cdf, (np.arange(size) + 0.5) / size).astype(np.int32)
    return noise, table


def expected_objective(model: SkipgramModel, centers: np.ndarray, contexts: np.ndarray, n_neg: int) -> float:
    """Skip-gram objective with the noise expectation taken exactly.

    Deterministic (no sampling), so ascent across epochs can be asserted
    without Monte Carlo noise.
    """
    scores = model.emb_in.astype(np.float64) @ model.emb_out.astype(np.float64).T
    positive = np.log(expit(scores[centers, contexts]))
    negative = np.log(expit(-scores)) @ model.noise
    return float(np.mean(positive + n_neg * negative[centers]))


def train_skipgram_model(
    walks: list[list[str]], cfg: TrainConfig, nodes: list[str] | None = None,
    record_objective: bool = False,
) -> SkipgramModel:
    """Train input/output embeddings over the walk corpus.

    Noise distribution is proportional to walk visit counts raised to
    0.75, the standard unigram smoothing, with visit counts standing in
    for node degree since the trainer sees only walks.
    """
    cfg.validate()
    if not walks:
        raise ValueError("walks must be non-empty")
    walked = set()
    for walk in walks:
        walked.update(walk)
    if nodes is None:
        node_list = sorted(walked)
    else:
        node_list = sorted(nodes)
        missing = sorted(set(node_list) - walked)
        if missing:
            raise ValueError(f"nodes absent from all walks: {missing}")
        unknown = sorted(walked - set(node_list))
        if unknown:
            raise ValueError(f"walk nodes outside the graph: {unknown}")
    node_id = {node: i for i, node in enumerate(node_list)}
    n_nodes = len(node_list)
    dim = cfg.dim

    centers, contexts = walks_to_pairs(walks, node_id, cfg.window)
    visit_counts = np.zeros(n_nodes, dtype=np.int64)
    for node, count in Counter(n for walk in walks for n in walk).items():
        visit_counts[node_id[node]] = count
    noise, neg_table = _noise_table(np.maximum(visit_counts, 1))

    rng = derive_rng(cfg.seed, "skipgram-init")
    emb_in = ((rng.random((n_nodes, dim)) - 0.5) / dim).astype(np.float32)
    emb_out = ((rng.random((n_nodes, dim)) - 0.5) / dim).astype(np.float32)
    model = SkipgramModel(nodes=node_list, emb_in=emb_in, emb_out=emb_out, noise=noise)

    if centers.size == 0:
        return model
    state = np.uint64(derive_seed(cfg.seed, "skipgram-negatives"))
    if record_objective:
        model.objective_history.append(expected_objective(model, centers, contexts, cfg.negative_samples))
    lr_span = cfg.min_learning_rate - cfg.learning_rate
    for epoch in range(cfg.epochs):
        lr_start = cfg.learning_rate + lr_span * epoch / cfg.epochs
        lr_end = cfg.learning_rate + lr_span * (epoch + 1) / cfg.epochs
        state = np.uint64(
            _sgns_epoch(
                emb_in, emb_out, centers, contexts, neg_table,
                cfg.negative_samples, lr_start, lr_end, _SIG_TABLE, state,
            )
        )
        if record_objective:
            model.objective_history.append(expected_objective(model, centers, contexts, cfg.negative_samples))
    if not np.isfinite(emb_in).all() or not np.isfinite(emb_out).all():
        raise FloatingPointError("non-finite embedding component after training")
    return model


def train_skipgram(
    walks: list[list[str]], cfg: TrainConfig, nodes: list[str] | None = None
) -> dict[str, np.ndarray]:
    """Node -> D-dimensional vector, deterministic under a fixed seed."""
    return train_skipgram_model(walks, cfg, nodes).vectors()


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("vectors must share a dimension")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0 or norm_b == 0:
        raise ValueError("cosine similarity undefined for zero vectors")
    return float(np.dot(a, b) / (norm_a * norm_b))


def save_embeddings(embeddings: dict[str, np.ndarray], path: str) -> None:
    """Header `count dim`, then one `word \t components...` row per node."""
    if not embeddings:
        raise ValueError("no embeddings to save")
    dim = len(next(iter(embeddings.values())))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(embeddings)}\t{dim}\n")
        for word in sorted(embeddings):
            values = "\t".join(repr(float(v)) for v in embeddings[word])
            fh.write(f"{word}\t{values}\n")


def load_embeddings(path: str) -> dict[str, np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        count, dim = (int(v) for v in fh.readline().split("\t"))
        embeddings = {}
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            vector = np.array([float(v) for v in parts[1:]], dtype=np.float32)
            if vector.shape[0] != dim:
                raise ValueError(f"{path}: row for {parts[0]!r} has wrong dimension")
            embeddings[parts[0]] = vector
    if len(embeddings) != count:
        raise ValueError(f"{path}: header count {count} does not match rows {len(embeddings)}")
    return embeddings
