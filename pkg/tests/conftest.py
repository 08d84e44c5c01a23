"""Shared fixtures: synthetic corpora, reference graphs, and the
acceptance-criteria summary hook.

The planted corpus is the end-to-end oracle: each window carries three
topics injected as six-keyword groups that always occur together, plus
background posts drawn from a large filler vocabulary. Recovering the
planted groups exactly is the only correct output, so precision and
recall against the shipped ground truth must both be 1. The hand-built
association graphs are small enough to verify by hand.
"""

from __future__ import annotations

import json
import random

import numpy as np
import pytest

from agftopics.hwa import AgfGraph

# Corpus origin: a midnight-aligned UTC timestamp, so window 0 starts
# exactly at the first post.
ORIGIN = 1609459200
WINDOW_SECONDS = 43200

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(num, description): acceptance criterion with a summary line",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when == "call":
        num, description = marker.args
        if report.skipped:
            status = "SKIP"
        else:
            status = "PASS" if report.passed else "FAIL"
        _CRITERIA[num] = (description, status)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        description, status = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d} {status:4s} {description}")


def write_planted_corpus(posts_path, gt_path, n_windows=3, seed=0):
    """Write a JSONL corpus with three planted six-keyword topics per
    window (30 posts each) plus 100 background posts of 8 filler words,
    and the matching ground-truth document."""
    rng = random.Random(seed)
    fillers = [f"filler{i:03d}" for i in range(200)]
    posts = []
    gt_windows = []
    for w in range(n_windows):
        topics = []
        window_texts = []
        for t in range(3):
            keywords = [f"kw{w}{t}{j}" for j in range(6)]
            topics.append(keywords)
            for _ in range(30):
                words = keywords[:]
                rng.shuffle(words)
                window_texts.append(" ".join(words))
        for _ in range(100):
            window_texts.append(" ".join(rng.sample(fillers, 8)))
        rng.shuffle(window_texts)
        for i, text in enumerate(window_texts):
            posts.append(
                {
                    "id": f"p{w}-{i}",
                    "timestamp": ORIGIN + w * WINDOW_SECONDS + i * 200,
                    "text": text,
                }
            )
        gt_windows.append(
            {
                "index": w,
                "topics": [
                    {"title": f"planted-{w}-{t}", "keywords": topics[t]}
                    for t in range(3)
                ],
            }
        )
    with open(posts_path, "w", encoding="utf-8") as fh:
        for post in posts:
            fh.write(json.dumps(post) + "\n")
    with open(gt_path, "w", encoding="utf-8") as fh:
        json.dump({"windows": gt_windows}, fh)


@pytest.fixture(scope="session")
def planted_corpus(tmp_path_factory):
    """(posts_path, gt_path) of the 3-window planted corpus."""
    root = tmp_path_factory.mktemp("planted")
    posts_path = root / "posts.jsonl"
    gt_path = root / "gt.json"
    write_planted_corpus(str(posts_path), str(gt_path))
    return str(posts_path), str(gt_path)


def barbell_graph():
    """Two fully connected 5-word groups joined by one bridge edge;
    returns (graph, left group, right group)."""
    graph = AgfGraph()
    left = [f"l{i}" for i in range(5)]
    right = [f"r{i}" for i in range(5)]
    for group in (left, right):
        for x in group:
            graph.kr[x] = 1.0
            for y in group:
                if x != y:
                    graph.edges[(x, y)] = 1.0
    graph.edges[("l0", "r0")] = 1.0
    graph.edges[("r0", "l0")] = 1.0
    return graph, left, right


def bias_graph():
    """Four-node directed graph whose (previous=a, current=b) state
    exercises every walk-bias case at once: stepping back to a (return
    bias 1/p), to c (adjacent to a on the undirected skeleton through
    c->a, unscaled), and to d (non-adjacent, in-out bias 1/q). Node a
    has a single out-edge, so every walk from a passes through b."""
    graph = AgfGraph()
    for node in "abcd":
        graph.kr[node] = 1.0
    graph.edges = {
        ("a", "b"): 1.0,
        ("b", "a"): 1.0,
        ("b", "c"): 3.0,
        ("b", "d"): 2.0,
        ("c", "a"): 1.0,
    }
    return graph


def two_blob_points(n_per_blob=20, dim=32, separation=10.0, seed=0):
    """Two unit-variance Gaussian blobs whose centers sit `separation`
    standard deviations apart along the first axis."""
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, 1.0, (n_per_blob, dim))
    b = rng.normal(0.0, 1.0, (n_per_blob, dim))
    b[:, 0] += separation
    return np.vstack([a, b])


def blob_noise_points(seed=0):
    """Two tight 50-point 2-D blobs plus 10 uniform noise points;
    returns (points, true labels) with noise labeled -1."""
    rng = np.random.default_rng(seed)
    points = np.vstack(
        [
            rng.normal(0.0, 0.5, (50, 2)),
            rng.normal(12.0, 0.5, (50, 2)),
            rng.uniform(-4.0, 16.0, (10, 2)),
        ]
    )
    truth = np.array([0] * 50 + [1] * 50 + [-1] * 10)
    return points, truth
