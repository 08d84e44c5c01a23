"""Scoring of detected topics against ground truth.

Two families of metrics. The FS criterion treats keywords as samples
with multi-assignments to classes (ground-truth topics) and clusters
(detected topics): a cluster's score is the entropy-style spread of its
class mass, a class's score mirrors it with roles swapped, totals weight
each item by its score mass, and the final value is a weighted average
of the two totals (equal weights by default; lower is better). Topic
precision/recall/F1 count detected topics matched one-to-one to
ground-truth topics by keyword overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cluster import Topic
from .corpus import GroundTruth


@dataclass
class MultiAssignment:
    """Per-sample scores toward classes and toward clusters. Every sample
    must carry at least one positive score on each side."""

    class_scores: dict[str, dict[str, float]] = field(default_factory=dict)
    cluster_scores: dict[str, dict[str, float]] = field(default_factory=dict)

    def validate(self) -> None:
        if set(self.class_scores) != set(self.cluster_scores):
            raise ValueError("class and cluster scores must cover the same samples")
        for sample in self.class_scores:
            if not any(v > 0 for v in self.class_scores[sample].values()):
                raise ValueError(f"sample {sample!r} has no positive class score")
            if not any(v > 0 for v in self.cluster_scores[sample].values()):
                raise ValueError(f"sample {sample!r} has no positive cluster score")

    def score_matrix(self) -> tuple[list[str], list[str], list[list[float]]]:
        """(classes, clusters, M) with M[i][j] = sum over samples of
        class_score * cluster_score; binary scores make this the count of
        samples assigned to both class i and cluster j."""
        self.validate()
        classes = sorted({c for scores in self.class_scores.values() for c in scores})
        clusters = sorted({c for scores in self.cluster_scores.values() for c in scores})
        class_pos = {c: i for i, c in enumerate(classes)}
        cluster_pos = {c: j for j, c in enumerate(clusters)}
        matrix = [[0.0] * len(clusters) for _ in classes]
        for sample in sorted(self.class_scores):
            for cls, cls_score in self.class_scores[sample].items():
                for clu, clu_score in self.cluster_scores[sample].items():
                    matrix[class_pos[cls]][cluster_pos[clu]] += cls_score * clu_score
        return classes, clusters, matrix


@dataclass
class FsReport:
    per_cluster: dict[str, float]
    per_class: dict[str, float]
    cluster_total: float
    class_total: float
    total: float
    w_cluster: float = 1.0
    w_class: float = 1.0


@dataclass
class TopicEvalReport:
    precision: float
    recall: float
    f1: float
    matches: list[tuple[int, int, float]] = field(default_factory=list)


def _fs_of_column(column: list[float], name: str) -> float:
    mass = sum(column)
    if mass <= 0:
        raise ValueError(f"{name} has zero total score mass")
    spread = sum(v * math.log(v) for v in column if v > 0)
    return math.log(mass) - spread / mass


def _fs_over_matrix(matrix: list[list[float]], names: list[str], kind: str) -> tuple[dict[str, float], float]:
    if not matrix or not matrix[0]:
        raise ValueError("empty score matrix")
    n_items = len(matrix[0])
    per_item = {}
    masses = []
    for j in range(n_items):
        column = [row[j] for row in matrix]
        per_item[names[j]] = _fs_of_column(column, f"{kind} {names[j]!r}")
        masses.append(sum(column))
    grand = sum(masses)
    total = sum(per_item[names[j]] * masses[j] for j in range(n_items)) / grand
    return per_item, total


def fs_cluster(assign: MultiAssignment) -> tuple[dict[str, float], float]:
    """Per-cluster spread of class mass and the mass-weighted total."""
    _, clusters, matrix = assign.score_matrix()
    return _fs_over_matrix(matrix, clusters, "cluster")


def fs_class(assign: MultiAssignment) -> tuple[dict[str, float], float]:
    """Mirror of fs_cluster with classes and clusters transposed."""
    classes, _, matrix = assign.score_matrix()
    transposed = [list(row) for row in zip(*matrix)]
    return _fs_over_matrix(transposed, classes, "class")


def fs_total(cluster_total: float, class_total: float, w_cluster: float = 1.0, w_class: float = 1.0) -> float:
    if w_cluster + w_class <= 0:
        raise ValueError("at least one positive weight required")
    return (w_cluster * cluster_total + w_class * class_total) / (w_cluster + w_class)


def fs_report(assign: MultiAssignment, w_cluster: float = 1.0, w_class: float = 1.0) -> FsReport:
    per_cluster, cluster_total = fs_cluster(assign)
    per_class, class_total = fs_class(assign)
    return FsReport(
        per_cluster=per_cluster,
        per_class=per_class,
        cluster_total=cluster_total,
        class_total=class_total,
        total=fs_total(cluster_total, class_total, w_cluster, w_class),
        w_cluster=w_cluster,
        w_class=w_class,
    )


def match_topics(
    detected: list[Topic], gt: GroundTruth, overlap_threshold: float = 0.5
) -> list[tuple[int, int, float]]:
    """Greedy one-to-one matching by descending keyword overlap.

    overlap(d, t) = |keywords(d) & keywords(t)| / |keywords(t)|; a pair
    matches when overlap reaches the threshold. Returns
    (detected index, gt index, overlap) triples.
    """
    if not 0 < overlap_threshold <= 1:
        raise ValueError(f"overlap threshold must lie in (0, 1], got {overlap_threshold}")
    pairs = []
    for d_idx, topic in enumerate(detected):
        d_keywords = set(topic.keywords)
        for g_idx, gt_topic in enumerate(gt.topics):
            overlap = len(d_keywords & gt_topic.keywords) / len(gt_topic.keywords)
            if overlap >= overlap_threshold:
                pairs.append((d_idx, g_idx, overlap))
    pairs.sort(key=lambda p: (-p[2], p[0], p[1]))
    used_detected: set[int] = set()
    used_gt: set[int] = set()
    matches = []
    for d_idx, g_idx, overlap in pairs:
        if d_idx in used_detected or g_idx in used_gt:
            continue
        used_detected.add(d_idx)
        used_gt.add(g_idx)
        matches.append((d_idx, g_idx, overlap))
    return matches


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision < 0 or recall < 0:
        raise ValueError("precision and recall must be non-negative")
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def topic_scores(matched: int, detected: int, gt_detected: int, gt_total: int) -> TopicEvalReport:
    """Precision = matched/detected, recall = gt_detected/gt_total, f1 =
    harmonic mean (0 when both sides are 0)."""
    if gt_total <= 0:
        raise ValueError("gt_total must be positive")
    if detected < matched:
        raise ValueError("detected count cannot be below matched count")
    if gt_total < gt_detected:
        raise ValueError("gt_total cannot be below gt_detected")
    precision = matched / detected if detected else 0.0
    recall = gt_detected / gt_total
    return TopicEvalReport(precision=precision, recall=recall, f1=f1_score(precision, recall))


def evaluate_window(
    detected: list[Topic],
    gt: GroundTruth,
    overlap_threshold: float = 0.5,
    w_cluster: float = 1.0,
    w_class: float = 1.0,
) -> dict:
    """Window-level report combining FS and topic metrics.

    FS samples are the keywords carried by at least one ground-truth
    topic and at least one detected topic (other keywords have no
    membership on one side, which the FS definition excludes); all
    assignment scores are 1.0 since the labels are unweighted.
    """
    matches = match_topics(detected, gt, overlap_threshold)
    report = topic_scores(
        matched=len(matches), detected=len(detected),
        gt_detected=len(matches), gt_total=len(gt.topics),
    )
    report.matches = matches

    assign = MultiAssignment()
    detected_of: dict[str, dict[str, float]] = {}
    for d_idx, topic in enumerate(detected):
        for word in topic.keywords:
            detected_of.setdefault(word, {})[f"topic-{d_idx}"] = 1.0
    for g_idx, gt_topic in enumerate(gt.topics):
        for word in sorted(gt_topic.keywords):
            if word in detected_of:
                assign.class_scores.setdefault(word, {})[f"class-{g_idx}"] = 1.0
    for word in assign.class_scores:
        assign.cluster_scores[word] = detected_of[word]

    result = {
        "window": gt.window_index,
        "fs": {"cluster": None, "class": None, "total": None},
        "topic": {"precision": report.precision, "recall": report.recall, "f1": report.f1},
    }
    if assign.class_scores:
        fs = fs_report(assign, w_cluster, w_class)
        result["fs"] = {"cluster": fs.cluster_total, "class": fs.class_total, "total": fs.total}
        result["_fs_mass"] = sum(
            cls_score * clu_score
            for sample in assign.class_scores
            for cls_score in assign.class_scores[sample].values()
            for clu_score in assign.cluster_scores[sample].values()
        )
    result["_counts"] = {
        "matched": len(matches), "detected": len(detected),
        "gt_detected": len(matches), "gt_total": len(gt.topics),
    }
    return result


def aggregate_windows(window_reports: list[dict]) -> dict:
    """Mean-per-window and pooled-count aggregates over labeled windows."""
    if not window_reports:
        return {"mean": None, "pooled": None}
    topic_mean = {
        key: sum(r["topic"][key] for r in window_reports) / len(window_reports)
        for key in ("precision", "recall", "f1")
    }
    fs_values = [r for r in window_reports if r["fs"]["total"] is not None]
    fs_mean = (
        {key: sum(r["fs"][key] for r in fs_values) / len(fs_values) for key in ("cluster", "class", "total")}
        if fs_values
        else {"cluster": None, "class": None, "total": None}
    )

    counts = {key: sum(r["_counts"][key] for r in window_reports) for key in ("matched", "detected", "gt_detected", "gt_total")}
    pooled_topic = topic_scores(**counts)
    mass_total = sum(r.get("_fs_mass", 0.0) for r in fs_values)
    if fs_values and mass_total > 0:
        pooled_fs = {
            key: sum(r["fs"][key] * r["_fs_mass"] for r in fs_values) / mass_total
            for key in ("cluster", "class", "total")
        }
    else:
        pooled_fs = {"cluster": None, "class": None, "total": None}
    return {
        "mean": {"fs": fs_mean, "topic": topic_mean},
        "pooled": {
            "fs": pooled_fs,
            "topic": {"precision": pooled_topic.precision, "recall": pooled_topic.recall, "f1": pooled_topic.f1},
        },
    }
