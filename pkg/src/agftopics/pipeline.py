"""End-to-end orchestration: posts in, topic and evaluation reports out.

Each window runs the same phase sequence: tokenize posts, build the
co-occurrence graph, rate and prune keywords, build the directed
association graph, walk it, train embeddings, reduce to the target
dimension, cluster, and rank topics. Windows are independent; a failure
in one window is recorded and the rest proceed. All per-phase seeds
derive from the single global seed plus the phase name and window index,
so a rerun with the same inputs, config, and seed reproduces every
report byte for byte.
"""

from __future__ import annotations

import json
import logging
import os
import time

import numpy as np

from . import cluster as cluster_mod
from . import config as config_mod
from .cooc import build_batch_graph, save_cooc_graph
from .corpus import load_ground_truth, load_posts, window_posts
from .embed import (
    TrainConfig,
    WalkConfig,
    generate_walks,
    save_embeddings,
    train_skipgram,
)
from .eval import aggregate_windows, evaluate_window
from .hwa import build_agf_graph, keyword_rating, save_agf_graph, select_keywords
from .reduce import ReduceConfig, reduce_embeddings, save_points
from .seeding import derive_seed
from .tokenize import load_stopwords, process_text

logger = logging.getLogger("agftopics")

VERSION = "0.1.0"
# Below this many keywords there is nothing meaningful to embed or
# cluster, so the window falls back to a single catch-all topic.
MIN_EMBEDDABLE = 3


def process_window(
    processed_posts: list[list[str]], window_index: int, cfg: config_mod.PipelineConfig,
    intermediates_dir: str | None = None,
) -> tuple[list[cluster_mod.Topic], dict[str, float], dict[str, float]]:
    """Run all phases for one window.

    Returns (ranked topics, keyword ratings, phase timings).
    """
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    graph = build_batch_graph(processed_posts, cfg.count_empty_posts)
    timings["cooc"] = time.perf_counter() - t0
    if intermediates_dir:
        save_cooc_graph(
            graph, window_index,
            os.path.join(intermediates_dir, f"window_{window_index:04d}.cooc.nodes.tsv"),
            os.path.join(intermediates_dir, f"window_{window_index:04d}.cooc.edges.tsv"),
        )
    if not graph.tf:
        return [], {}, timings

    t0 = time.perf_counter()
    ratings = keyword_rating(graph)
    keywords = select_keywords(ratings, cfg.h, graph.tf)
    timings["hwa"] = time.perf_counter() - t0
    if not keywords:
        return [], ratings, timings
    if len(keywords) < MIN_EMBEDDABLE:
        logger.warning(
            "window %d has only %d keywords; emitting a single topic without embedding",
            window_index, len(keywords),
        )
        ordered = sorted(keywords, key=lambda w: (-ratings[w], w))
        score = float(sum(ratings[w] for w in ordered))
        return [cluster_mod.Topic(keywords=ordered, score=score, label=0)], ratings, timings

    agf = build_agf_graph(graph, keywords, ratings, cfg.delta)
    if intermediates_dir:
        save_agf_graph(
            agf,
            os.path.join(intermediates_dir, f"window_{window_index:04d}.agf.nodes.tsv"),
            os.path.join(intermediates_dir, f"window_{window_index:04d}.agf.edges.tsv"),
        )

    t0 = time.perf_counter()
    p, q = cfg.walk_params()
    walk_cfg = WalkConfig(
        num_walks=cfg.num_walks, walk_length=cfg.walk_length, p=p, q=q,
        seed=derive_seed(cfg.seed, "walks", window_index),
    )
    walks = generate_walks(agf, walk_cfg)
    train_cfg = TrainConfig(
        dim=cfg.dim, window=cfg.window, epochs=cfg.epochs,
        negative_samples=cfg.negative_samples, learning_rate=cfg.learning_rate,
        min_learning_rate=cfg.min_learning_rate,
        seed=derive_seed(cfg.seed, "train", window_index),
    )
    embeddings = train_skipgram(walks, train_cfg, nodes=agf.nodes)
    timings["embed"] = time.perf_counter() - t0
    if intermediates_dir:
        save_embeddings(
            embeddings, os.path.join(intermediates_dir, f"window_{window_index:04d}.emb.tsv")
        )

    t0 = time.perf_counter()
    reduce_cfg = ReduceConfig(
        n_neighbors=cfg.n_neighbors, min_dist=cfg.min_dist, target_dim=cfg.target_dim,
        n_epochs=cfg.reduce_epochs, seed=derive_seed(cfg.seed, "reduce", window_index),
    )
    points = reduce_embeddings(embeddings, reduce_cfg)
    timings["reduce"] = time.perf_counter() - t0
    if intermediates_dir:
        save_points(points, os.path.join(intermediates_dir, f"window_{window_index:04d}.points.tsv"))

    t0 = time.perf_counter()
    nodes = sorted(points)
    matrix = np.array([points[node] for node in nodes])
    if cfg.clustering == "kmeans":
        # Tiny windows cannot support more clusters than points.
        k = min(cfg.k, len(nodes))
        labels_array = cluster_mod.kmeans(
            matrix, k, cfg.max_iter, seed=derive_seed(cfg.seed, "cluster", window_index)
        )
    else:
        labels_array = cluster_mod.hdbscan(matrix, cfg.min_cluster_size)
    labels = {node: int(labels_array[i]) for i, node in enumerate(nodes)}
    topics = cluster_mod.extract_topics(labels, ratings)
    if cfg.top_k > 0:
        topics = cluster_mod.top_k_topics(topics, cfg.top_k)
    timings["cluster"] = time.perf_counter() - t0
    return topics, ratings, timings


def _topic_payload(window_index: int, topics: list[cluster_mod.Topic]) -> dict:
    return {
        "window": window_index,
        "topics": [
            {"rank": rank, "score": topic.score, "keywords": list(topic.keywords)}
            for rank, topic in enumerate(topics, start=1)
        ],
    }


def _write_json(payload: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def run_pipeline(
    cfg: config_mod.PipelineConfig,
    input_path: str,
    out_dir: str,
    gt_path: str | None = None,
    keep_intermediates: bool = False,
    windows_filter: set[int] | None = None,
) -> tuple[dict, int]:
    """Run every (selected) window and write reports plus a manifest.

    Returns (manifest, exit_status); status 1 means at least one window
    failed while others completed.
    """
    cfg.validate()
    posts = load_posts(input_path)
    stopwords = load_stopwords(cfg.stopwords) if cfg.stopwords else frozenset()
    batches = window_posts(posts, cfg.window_seconds)

    topics_dir = os.path.join(out_dir, "topics")
    os.makedirs(topics_dir, exist_ok=True)
    intermediates_dir = None
    if keep_intermediates:
        intermediates_dir = os.path.join(out_dir, "intermediates")
        os.makedirs(intermediates_dir, exist_ok=True)

    manifest: dict = {
        "version": VERSION,
        "config": cfg.to_dict(),
        "input": os.path.abspath(input_path),
        "windows": [],
    }
    results: dict[int, list[cluster_mod.Topic]] = {}
    any_failed = False
    for batch in batches:
        if windows_filter is not None and batch.index not in windows_filter:
            continue
        entry: dict = {"index": batch.index, "posts": len(batch.posts)}
        try:
            t0 = time.perf_counter()
            processed = [process_text(post.text, stopwords) for post in batch.posts]
            tokenize_time = time.perf_counter() - t0
            topics, _, timings = process_window(
                processed, batch.index, cfg, intermediates_dir
            )
            timings = {"tokenize": tokenize_time, **timings}
            report_path = os.path.join(topics_dir, f"window_{batch.index:04d}.json")
            _write_json(_topic_payload(batch.index, topics), report_path)
            results[batch.index] = topics
            entry["topics"] = len(topics)
            entry["report"] = os.path.relpath(report_path, out_dir)
            entry["timings"] = timings
        except Exception as exc:  # noqa: BLE001 - window isolation is the contract
            logger.error("window %d failed: %s", batch.index, exc)
            entry["error"] = str(exc)
            any_failed = True
        manifest["windows"].append(entry)

    if gt_path is not None:
        evaluation = evaluate_topics(results, gt_path, cfg)
        _write_json(evaluation, os.path.join(out_dir, "evaluation.json"))
        manifest["evaluation"] = "evaluation.json"

    _write_json(manifest, os.path.join(out_dir, "manifest.json"))
    return manifest, (1 if any_failed else 0)


def evaluate_topics(
    results: dict[int, list[cluster_mod.Topic]], gt_path: str, cfg: config_mod.PipelineConfig
) -> dict:
    """Per-window FS and topic metrics for every labeled window that was
    run, plus mean and pooled aggregates."""
    gt_entries = load_ground_truth(gt_path)
    window_reports = []
    skipped = []
    for gt in gt_entries:
        if gt.window_index not in results:
            skipped.append(gt.window_index)
            continue
        window_reports.append(
            evaluate_window(results[gt.window_index], gt, cfg.match_threshold)
        )
    aggregate = aggregate_windows(window_reports)
    public_reports = [
        {key: value for key, value in report.items() if not key.startswith("_")}
        for report in window_reports
    ]
    return {"windows": public_reports, "aggregate": aggregate, "skipped": skipped}


def evaluate_run(manifest: dict, gt_path: str, out_dir: str) -> dict:
    """Re-evaluate a finished run from its persisted topic reports."""
    cfg = config_mod.PipelineConfig(**manifest["config"])
    results = {}
    for entry in manifest["windows"]:
        if "report" not in entry:
            continue
        with open(os.path.join(out_dir, entry["report"]), encoding="utf-8") as fh:
            payload = json.load(fh)
        results[payload["window"]] = [
            cluster_mod.Topic(
                keywords=list(topic["keywords"]), score=topic["score"], label=topic["rank"] - 1
            )
            for topic in payload["topics"]
        ]
    return evaluate_topics(results, gt_path, cfg)
