"""Clustering of reduced keyword points and conversion into topics.

Two interchangeable algorithms: seeded k-means++ with Lloyd iterations
and empty-cluster repair, and a hierarchical density clusterer built on
mutual-reachability distances: core distances at the minimum cluster
size, a minimum spanning tree, a single-linkage hierarchy condensed at
min_cluster_size, and excess-of-mass stability selection with noise
labels (-1) for points in no selected cluster. Clusters become topics
scored by the summed keyword ratings of their members.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .seeding import derive_rng

# Finite stand-in for the density level of coincident points (1/0).
LAMBDA_MAX = 1e12


@dataclass
class Topic:
    keywords: list[str]
    score: float
    label: int


def kmeans_fit(
    points: np.ndarray, k: int, max_iter: int = 300, seed: int = 0
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """Lloyd iterations from k-means++ initialization.

    Returns (labels, centers, inertia history); the history is recorded
    after every update step and is non-increasing. Empty clusters are
    repaired by promoting the point farthest from its current center.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < k:
        raise ValueError(f"cannot form {k} clusters from {n} points")
    rng = derive_rng(seed, "kmeans-init")

    centers = np.empty((k, points.shape[1]))
    centers[0] = points[int(rng.integers(n))]
    closest_sq = ((points - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = closest_sq.sum()
        if total > 0:
            choice = int(rng.choice(n, p=closest_sq / total))
        else:
            choice = int(rng.integers(n))
        centers[c] = points[choice]
        closest_sq = np.minimum(closest_sq, ((points - centers[c]) ** 2).sum(axis=1))

    labels = np.full(n, -1, dtype=np.int32)
    inertia_history: list[float] = []
    for _ in range(max_iter):
        sq_dists = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(sq_dists, axis=1).astype(np.int32)
        assigned_sq = sq_dists[np.arange(n), new_labels]
        for empty in range(k):
            if not np.any(new_labels == empty):
                farthest = int(np.argmax(assigned_sq))
                centers[empty] = points[farthest]
                new_labels[farthest] = empty
                # Ineligible for further repairs: ties at distance zero
                # must promote a different point per empty cluster.
                assigned_sq[farthest] = -np.inf
        converged = bool(np.array_equal(new_labels, labels))
        labels = new_labels
        for c in range(k):
            members = points[labels == c]
            if members.size:
                centers[c] = members.mean(axis=0)
        inertia = float(((points - centers[labels]) ** 2).sum())
        inertia_history.append(inertia)
        if converged:
            break
    return labels, centers, inertia_history


def kmeans(points: np.ndarray, k: int, max_iter: int = 300, seed: int = 0) -> np.ndarray:
    labels, _, _ = kmeans_fit(points, k, max_iter, seed)
    return labels


def _mst_edges(mreach: np.ndarray) -> list[tuple[int, int, float]]:
    # Dense Prim: fine at per-window keyword counts.
    n = mreach.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    best_dist = np.full(n, np.inf)
    best_from = np.zeros(n, dtype=np.int64)
    in_tree[0] = True
    best_dist = mreach[0].copy()
    edges = []
    for _ in range(n - 1):
        best_dist_masked = np.where(in_tree, np.inf, best_dist)
        nxt = int(np.argmin(best_dist_masked))
        edges.append((int(best_from[nxt]), nxt, float(best_dist[nxt])))
        in_tree[nxt] = True
        closer = mreach[nxt] < best_dist
        best_from = np.where(closer, nxt, best_from)
        best_dist = np.minimum(best_dist, mreach[nxt])
    return edges


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(2 * n - 1))
        self.size = [1] * n + [0] * (n - 1)
        self.next_id = n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        new = self.next_id
        self.next_id += 1
        self.parent[a] = new
        self.parent[b] = new
        self.size[new] = self.size[a] + self.size[b]
        return new


def _single_linkage(edges: list[tuple[int, int, float]], n: int) -> list[tuple[int, int, float, int]]:
    """Merge list [(left, right, distance, size)], node ids n..2n-2."""
    ordered = sorted(edges, key=lambda e: (e[2], e[0], e[1]))
    uf = _UnionFind(n)
    merges = []
    for u, v, dist in ordered:
        ru, rv = uf.find(u), uf.find(v)
        new = uf.union(ru, rv)
        merges.append((ru, rv, dist, uf.size[new]))
    return merges


def _condense(
    merges: list[tuple[int, int, float, int]], n: int, min_cluster_size: int
) -> list[tuple[int, int, float, int]]:
    """Rows (parent, child, lambda, size); child < n is a point, child >=
    n is a sub-cluster. A split is kept only when both sides reach
    min_cluster_size; smaller sides dissolve into their points."""
    children: dict[int, tuple[int, int, float]] = {}
    sizes = {i: 1 for i in range(n)}
    for pos, (left, right, dist, size) in enumerate(merges):
        node = n + pos
        children[node] = (left, right, dist)
        sizes[node] = size

    root = n + len(merges) - 1
    rows: list[tuple[int, int, float, int]] = []
    # relabeled[node] = condensed cluster id the hierarchy node feeds.
    next_cluster = root + 1
    relabeled = {root: next_cluster}
    next_cluster += 1
    stack = [root]
    while stack:
        node = stack.pop()
        cluster = relabeled[node]
        if node < n:
            continue
        left, right, dist = children[node]
        lam = 1.0 / dist if dist > 0 else LAMBDA_MAX
        left_big = sizes[left] >= min_cluster_size
        right_big = sizes[right] >= min_cluster_size
        if left_big and right_big:
            for child in (left, right):
                relabeled[child] = next_cluster
                rows.append((cluster, next_cluster, lam, sizes[child]))
                next_cluster += 1
                stack.append(child)
        else:
            for child in (left, right):
                if child >= n and sizes[child] >= min_cluster_size:
                    # One true side continues as the same cluster.
                    relabeled[child] = cluster
                    stack.append(child)
                else:
                    for point in _leaf_points(child, children, n):
                        rows.append((cluster, point, lam, 1))
    return rows


def _leaf_points(node: int, children: dict[int, tuple[int, int, float]], n: int) -> list[int]:
    points = []
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur < n:
            points.append(cur)
        else:
            left, right, _ = children[cur]
            stack.extend((left, right))
    return sorted(points)


def hdbscan(points: np.ndarray, min_cluster_size: int = 5) -> np.ndarray:
    """Density clustering; returns labels with -1 for noise."""
    if min_cluster_size < 2:
        raise ValueError("min_cluster_size must be at least 2")
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n < min_cluster_size:
        return np.full(n, -1, dtype=np.int32)

    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    sorted_dist = np.sort(dist, axis=1)
    # Column 0 is the self-distance, so column mcs-1 is the
    # (mcs-1)-th nearest other point.
    core = sorted_dist[:, min_cluster_size - 1]
    mreach = np.maximum(dist, np.maximum(core[:, None], core[None, :]))
    np.fill_diagonal(mreach, 0.0)

    merges = _single_linkage(_mst_edges(mreach), n)
    rows = _condense(merges, n, min_cluster_size)

    clusters = set()
    for parent, child, _, _ in rows:
        clusters.add(parent)
        if child >= n:
            clusters.add(child)
    root = min(clusters)
    candidates = sorted(c for c in clusters if c != root)

    if not candidates:
        return _coincident_fallback(mreach, n, min_cluster_size)

    birth = {root: 0.0}
    stability: dict[int, float] = {c: 0.0 for c in clusters}
    child_clusters: dict[int, list[int]] = {c: [] for c in clusters}
    for parent, child, lam, _ in rows:
        if child >= n:
            birth[child] = lam
            child_clusters[parent].append(child)
    for parent, child, lam, size in rows:
        stability[parent] += (lam - birth[parent]) * size

    # Excess-of-mass, bottom-up (children always carry higher ids): a
    # cluster wins over its subtree when its own stability reaches the
    # combined stability of the best selection below it.
    selected: dict[int, bool] = {}
    adjusted: dict[int, float] = {}
    for c in sorted(candidates, reverse=True):
        child_sum = sum(adjusted[cc] for cc in child_clusters[c])
        if stability[c] >= child_sum:
            selected[c] = True
            adjusted[c] = stability[c]
        else:
            selected[c] = False
            adjusted[c] = child_sum
    # Keep only the highest selected cluster on every root-to-leaf path.
    parent_of = {}
    for parent, child, _, _ in rows:
        if child >= n:
            parent_of[child] = parent
    final = []
    for c in candidates:
        if not selected.get(c):
            continue
        ancestor = parent_of.get(c)
        shadowed = False
        while ancestor is not None and ancestor != root:
            if selected.get(ancestor):
                shadowed = True
                break
            ancestor = parent_of.get(ancestor)
        if not shadowed:
            final.append(c)

    label_of = {c: i for i, c in enumerate(sorted(final))}
    labels = np.full(n, -1, dtype=np.int32)
    fall_parent = {}
    for parent, child, _, _ in rows:
        if child < n:
            fall_parent[child] = parent
    for point, parent in fall_parent.items():
        node = parent
        while node is not None and node != root:
            if node in label_of:
                labels[point] = label_of[node]
                break
            node = parent_of.get(node)
    return labels


def _coincident_fallback(mreach: np.ndarray, n: int, min_cluster_size: int) -> np.ndarray:
    """No true split ever happened. Groups of coincident points (zero
    mutual reachability) of sufficient size still count as clusters;
    everything else is noise."""
    labels = np.full(n, -1, dtype=np.int32)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if mreach[i, j] == 0.0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    next_label = 0
    for rep in sorted(groups):
        members = groups[rep]
        if len(members) >= min_cluster_size:
            for m in members:
                labels[m] = next_label
            next_label += 1
    return labels


def extract_topics(labels: dict[str, int], ratings: dict[str, float]) -> list[Topic]:
    """One topic per non-noise cluster, scored by summed member ratings,
    sorted by descending score then smallest label."""
    members: dict[int, list[str]] = {}
    for word in sorted(labels):
        label = labels[word]
        if label == -1:
            continue
        members.setdefault(label, []).append(word)
    topics = []
    for label in sorted(members):
        words = members[label]
        words.sort(key=lambda w: (-ratings.get(w, 0.0), w))
        score = float(sum(ratings.get(w, 0.0) for w in words))
        topics.append(Topic(keywords=words, score=score, label=label))
    topics.sort(key=lambda t: (-t.score, t.label))
    return topics


def top_k_topics(topics: list[Topic], k: int) -> list[Topic]:
    if k < 1:
        raise ValueError("k must be at least 1")
    return topics[:k]
