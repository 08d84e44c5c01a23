"""Neighbor-graph dimensionality reduction for clustering pre-processing.

High-dimensional embeddings are turned into a fuzzy neighbor graph:
exact k-nearest-neighbor lists (vocabularies here are small, so no
approximate index is needed), per-point bandwidths calibrated so each
point's membership weights sum to log2(k), and a symmetrized graph via
the fuzzy union. A low-dimensional layout is initialized from the
graph's spectral embedding (connected case) or a deterministic
per-component placement (disconnected case) and refined by sampled
attraction along edges plus sampled repulsion against random points.
All randomness is seeded; runs are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.optimize import curve_fit

from .seeding import derive_rng, derive_seed

SMOOTH_ITER = 64
SMOOTH_TOLERANCE = 1e-5
MIN_BANDWIDTH_SCALE = 1e-3
SPREAD = 1.0
NEGATIVE_RATE = 5
GRAD_CLIP = 4.0
INIT_SCALE = 10.0
MIN_EDGE_SAMPLES = 250

_AB_CACHE: dict[tuple[float, float], tuple[float, float]] = {}


@dataclass
class ReduceConfig:
    n_neighbors: int = 2
    min_dist: float = 0.1
    target_dim: int = 2
    n_epochs: int = 500
    seed: int = 0

    def validate(self) -> None:
        if self.n_neighbors < 1:
            raise ValueError("n_neighbors must be at least 1")
        if self.target_dim < 1:
            raise ValueError("target_dim must be at least 1")
        if self.min_dist < 0:
            raise ValueError("min_dist must be non-negative")
        if self.n_epochs < 1:
            raise ValueError("n_epochs must be at least 1")


@dataclass
class KnnGraph:
    indices: np.ndarray
    distances: np.ndarray
    rho: np.ndarray
    sigma: np.ndarray
    memberships: np.ndarray


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def knn_graph(points: np.ndarray, n_neighbors: int) -> KnnGraph:
    """Exact kNN lists (self excluded) with calibrated fuzzy memberships.

    For each point, sigma solves sum_j exp(-max(d_j - rho, 0)/sigma) =
    log2(n_neighbors) by bisection; rho is the nearest positive neighbor
    distance, so the nearest neighbor always has membership 1.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n < n_neighbors + 1:
        raise ValueError(f"need at least {n_neighbors + 1} points, got {n}")
    dist = pairwise_distances(points)
    np.fill_diagonal(dist, np.inf)
    order = np.argsort(dist, axis=1, kind="stable")
    indices = order[:, :n_neighbors]
    distances = np.take_along_axis(dist, indices, axis=1)

    target = np.log2(n_neighbors)
    rho = np.zeros(n)
    sigma = np.zeros(n)
    all_mean = float(distances.mean()) if distances.size else 0.0
    for i in range(n):
        row = distances[i]
        positive = row[row > 0]
        rho[i] = positive[0] if positive.size else 0.0
        lo, hi, mid = 0.0, np.inf, 1.0
        for _ in range(SMOOTH_ITER):
            psum = np.exp(-np.maximum(row - rho[i], 0.0) / mid).sum()
            if abs(psum - target) < SMOOTH_TOLERANCE:
                break
            if psum > target:
                hi = mid
                mid = (lo + hi) / 2
            else:
                lo = mid
                mid = mid * 2 if hi == np.inf else (lo + hi) / 2
        sigma[i] = mid
        row_mean = row.mean() if row.size else 0.0
        if rho[i] > 0:
            sigma[i] = max(sigma[i], MIN_BANDWIDTH_SCALE * row_mean)
        else:
            sigma[i] = max(sigma[i], MIN_BANDWIDTH_SCALE * all_mean)

    memberships = np.exp(-np.maximum(distances - rho[:, None], 0.0) / sigma[:, None])
    return KnnGraph(indices=indices, distances=distances, rho=rho, sigma=sigma, memberships=memberships)


def fuzzy_union(knn: KnnGraph, n_points: int) -> np.ndarray:
    """Symmetrize directed memberships by the fuzzy union a + b - ab."""
    directed = np.zeros((n_points, n_points))
    for i in range(n_points):
        directed[i, knn.indices[i]] = knn.memberships[i]
    return directed + directed.T - directed * directed.T


def find_ab(min_dist: float, spread: float = SPREAD) -> tuple[float, float]:
    """Fit the differentiable low-dimensional kernel 1/(1 + a d^(2b)) to
    the desired offset-exponential membership curve."""
    key = (min_dist, spread)
    if key not in _AB_CACHE:
        xv = np.linspace(0, spread * 3, 300)
        yv = np.where(xv < min_dist, 1.0, np.exp(-(xv - min_dist) / spread))
        params, _ = curve_fit(lambda x, a, b: 1.0 / (1.0 + a * x ** (2 * b)), xv, yv)
        _AB_CACHE[key] = (float(params[0]), float(params[1]))
    return _AB_CACHE[key]


@njit(cache=True)
def _layout_epochs(embedding, heads, tails, epochs_per_sample, a, b, n_epochs, alpha0, state):
    # Reference-style sampled layout: an edge fires whenever its next
    # scheduled epoch arrives (stronger edges fire more often), pulling
    # its endpoints together; each firing also pushes the head away from
    # sampled random vertices. Gradient components clip to +-4.
    n_vertices = embedding.shape[0]
    dim = embedding.shape[1]
    n_edges = heads.shape[0]
    epoch_of_next_sample = epochs_per_sample.copy()
    epochs_per_negative = epochs_per_sample / NEGATIVE_RATE
    epoch_of_next_negative = epochs_per_negative.copy()
    s = state
    for epoch in range(n_epochs):
        alpha = alpha0 * (1.0 - epoch / n_epochs)
        for idx in range(n_edges):
            if epoch_of_next_sample[idx] > epoch:
                continue
            i = heads[idx]
            j = tails[idx]
            d2 = 0.0
            for d in range(dim):
                diff = embedding[i, d] - embedding[j, d]
                d2 += diff * diff
            if d2 > 0.0:
                coeff = (-2.0 * a * b * d2 ** (b - 1.0)) / (a * d2**b + 1.0)
            else:
                coeff = 0.0
            for d in range(dim):
                grad = coeff * (embedding[i, d] - embedding[j, d])
                if grad > GRAD_CLIP:
                    grad = GRAD_CLIP
                elif grad < -GRAD_CLIP:
                    grad = -GRAD_CLIP
                embedding[i, d] += alpha * grad
                embedding[j, d] -= alpha * grad
            epoch_of_next_sample[idx] += epochs_per_sample[idx]
            n_negatives = int((epoch - epoch_of_next_negative[idx]) / epochs_per_negative[idx])
            for _ in range(n_negatives):
                s = s * np.uint64(6364136223846793005) + np.uint64(1442695040888963407)
                k = int((s >> np.uint64(33)) % np.uint64(n_vertices))
                if k == i:
                    continue
                d2 = 0.0
                for d in range(dim):
                    diff = embedding[i, d] - embedding[k, d]
                    d2 += diff * diff
                if d2 > 0.0:
                    coeff = (2.0 * b) / ((0.001 + d2) * (a * d2**b + 1.0))
                else:
                    coeff = 0.0
                for d in range(dim):
                    if coeff > 0.0:
                        grad = coeff * (embedding[i, d] - embedding[k, d])
                        if grad > GRAD_CLIP:
                            grad = GRAD_CLIP
                        elif grad < -GRAD_CLIP:
                            grad = -GRAD_CLIP
                    else:
                        grad = GRAD_CLIP
                    embedding[i, d] += alpha * grad
            epoch_of_next_negative[idx] += n_negatives * epochs_per_negative[idx]
    return s


def _components(n: int, weights: np.ndarray) -> np.ndarray:
    parent = np.arange(n)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rows, cols = np.nonzero(weights > 0)
    for i, j in zip(rows, cols):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return np.array([find(int(i)) for i in range(n)])


def _spectral_init(weights: np.ndarray, dim: int, rng: np.random.Generator) -> np.ndarray:
    n = weights.shape[0]
    degrees = weights.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(np.maximum(degrees, 1e-12))
    laplacian = np.eye(n) - (inv_sqrt[:, None] * weights * inv_sqrt[None, :])
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(laplacian)
    except np.linalg.LinAlgError:
        return rng.uniform(-INIT_SCALE, INIT_SCALE, size=(n, dim))
    if eigenvectors.shape[1] < dim + 1:
        return rng.uniform(-INIT_SCALE, INIT_SCALE, size=(n, dim))
    init = eigenvectors[:, 1 : dim + 1]
    max_abs = np.abs(init).max()
    if max_abs == 0:
        return rng.uniform(-INIT_SCALE, INIT_SCALE, size=(n, dim))
    return init * (INIT_SCALE / max_abs) + rng.normal(scale=1e-4, size=(n, dim))


def _circle_anchors(count: int, dim: int) -> np.ndarray:
    anchors = np.zeros((count, dim))
    for rank in range(count):
        angle = 2 * np.pi * rank / count
        anchors[rank, 0] = INIT_SCALE * np.cos(angle)
        if dim > 1:
            anchors[rank, 1] = INIT_SCALE * np.sin(angle)
    return anchors


def _component_init(labels: np.ndarray, dim: int, rng: np.random.Generator) -> np.ndarray:
    # Spectral coordinates are meaningless across disconnected pieces, so
    # each component takes an evenly spaced slot on a circle of radius
    # INIT_SCALE and its points scatter tightly around that slot. Evenly
    # spaced slots guarantee no two components start on top of each other.
    n = labels.shape[0]
    roots = sorted(set(int(v) for v in labels))
    anchors = _circle_anchors(len(roots), dim)
    init = rng.uniform(-1.0, 1.0, size=(n, dim))
    for rank, root in enumerate(roots):
        init[labels == root] += anchors[rank]
    return init


def reduce_matrix(points: np.ndarray, cfg: ReduceConfig) -> np.ndarray:
    """Reduce row vectors to cfg.target_dim dimensions."""
    cfg.validate()
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    knn = knn_graph(points, cfg.n_neighbors)
    weights = fuzzy_union(knn, n)

    labels = _components(n, weights)
    rng = derive_rng(cfg.seed, "reduce-init")
    if len(set(int(v) for v in labels)) > 1:
        embedding = _component_init(labels, cfg.target_dim, rng)
    else:
        embedding = _spectral_init(weights, cfg.target_dim, rng)
    embedding = np.ascontiguousarray(embedding, dtype=np.float64)

    heads, tails = np.nonzero(weights > 0)
    if heads.size:
        edge_weights = weights[heads, tails]
        # Strong edges fire every epoch, weak ones proportionally less,
        # but never fewer than MIN_EDGE_SAMPLES times over the whole run.
        # At small n_neighbors the bandwidth calibration can leave the
        # k-th neighbor with a vanishing weight; without the floor such
        # edges never fire and repulsion tears their component apart.
        epochs_per_sample = np.minimum(
            edge_weights.max() / edge_weights, cfg.n_epochs / MIN_EDGE_SAMPLES
        )
        a, b = find_ab(cfg.min_dist)
        state = np.uint64(derive_seed(cfg.seed, "reduce-negatives"))
        _layout_epochs(
            embedding, heads.astype(np.int32), tails.astype(np.int32),
            epochs_per_sample, a, b, cfg.n_epochs, 1.0, state,
        )
    if not np.isfinite(embedding).all():
        raise FloatingPointError("non-finite layout component")
    return embedding


def reduce_embeddings(embeddings: dict[str, np.ndarray], cfg: ReduceConfig) -> dict[str, np.ndarray]:
    """Reduce a node -> vector mapping, preserving the node set."""
    nodes = sorted(embeddings)
    matrix = np.array([embeddings[node] for node in nodes], dtype=np.float64)
    reduced = reduce_matrix(matrix, cfg)
    return {node: reduced[i] for i, node in enumerate(nodes)}


def save_points(points: dict[str, np.ndarray], path: str) -> None:
    """One `word \t coordinates...` row per point."""
    with open(path, "w", encoding="utf-8") as fh:
        for word in sorted(points):
            values = "\t".join(repr(float(v)) for v in points[word])
            fh.write(f"{word}\t{values}\n")


def load_points(path: str) -> dict[str, np.ndarray]:
    points = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            points[parts[0]] = np.array([float(v) for v in parts[1:]])
    return points
