"""Post ingestion, time windowing, and ground-truth loading.

Posts arrive as line-delimited JSON records {"id", "timestamp", "text"}
and are partitioned into fixed-duration windows indexed from a common
origin. Empty intermediate windows are kept so window indices stay
aligned with ground-truth labels. Ground truth is a JSON document listing
labeled windows, each with one or more keyword-set topics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

DAY_SECONDS = 86400


class ParseError(ValueError):
    """Malformed input record or document."""


@dataclass(frozen=True)
class RawPost:
    id: str
    timestamp: int
    text: str


@dataclass
class Batch:
    """One time window of posts. `posts` holds RawPost objects after
    windowing and processed token lists after pre-processing."""

    index: int
    start: float
    end: float
    posts: list = field(default_factory=list)


@dataclass(frozen=True)
class GroundTruthTopic:
    title: str
    keywords: frozenset[str]


@dataclass(frozen=True)
class GroundTruth:
    window_index: int
    topics: tuple[GroundTruthTopic, ...]


def load_posts(path: str) -> list[RawPost]:
    """Read a JSONL post file, sorted ascending by timestamp (stable)."""
    posts = []
    seen_ids = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise ParseError(f"{path}:{lineno}: record is not an object")
            for fieldname in ("id", "timestamp", "text"):
                if fieldname not in record:
                    raise ParseError(f"{path}:{lineno}: missing field '{fieldname}'")
            post_id = str(record["id"])
            if not post_id:
                raise ParseError(f"{path}:{lineno}: empty id")
            if post_id in seen_ids:
                raise ParseError(f"{path}:{lineno}: duplicate id '{post_id}'")
            seen_ids.add(post_id)
            timestamp = record["timestamp"]
            if not isinstance(timestamp, (int, float)) or not math.isfinite(timestamp):
                raise ParseError(f"{path}:{lineno}: non-finite timestamp")
            if not isinstance(record["text"], str):
                raise ParseError(f"{path}:{lineno}: text is not a string")
            posts.append(RawPost(id=post_id, timestamp=int(timestamp), text=record["text"]))
    posts.sort(key=lambda p: p.timestamp)
    return posts


def default_origin(posts: list[RawPost]) -> int:
    """First post's timestamp truncated to midnight UTC."""
    if not posts:
        return 0
    first = min(p.timestamp for p in posts)
    return (first // DAY_SECONDS) * DAY_SECONDS


def window_posts(posts: list[RawPost], duration: float, origin: float | None = None) -> list[Batch]:
    """Partition posts into consecutive windows of `duration` seconds.

    Window L covers [origin + L*duration, origin + (L+1)*duration); every
    index from 0 through the last occupied window is emitted, empty
    windows included.
    """
    if duration <= 0:
        raise ValueError(f"window duration must be positive, got {duration}")
    if origin is None:
        origin = default_origin(posts)
    if not posts:
        return []
    last_index = 0
    assigned: dict[int, list[RawPost]] = {}
    for post in posts:
        if post.timestamp < origin:
            raise ValueError(
                f"post '{post.id}' timestamp {post.timestamp} precedes window origin {origin}"
            )
        index = int((post.timestamp - origin) // duration)
        assigned.setdefault(index, []).append(post)
        last_index = max(last_index, index)
    batches = []
    for index in range(last_index + 1):
        batches.append(
            Batch(
                index=index,
                start=origin + index * duration,
                end=origin + (index + 1) * duration,
                posts=assigned.get(index, []),
            )
        )
    return batches


def load_ground_truth(path: str) -> list[GroundTruth]:
    """Read the ground-truth JSON document, one entry per labeled window."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "windows" not in doc:
        raise ParseError(f"{path}: expected an object with a 'windows' array")
    entries = []
    seen_windows = set()
    for pos, window in enumerate(doc["windows"]):
        if "index" not in window or "topics" not in window:
            raise ParseError(f"{path}: windows[{pos}]: missing 'index' or 'topics'")
        index = int(window["index"])
        if index in seen_windows:
            raise ParseError(f"{path}: duplicate window index {index}")
        seen_windows.add(index)
        if not window["topics"]:
            raise ParseError(f"{path}: window {index} has no topics")
        topics = []
        for tpos, topic in enumerate(window["topics"]):
            keywords = topic.get("keywords", [])
            if not keywords:
                raise ParseError(f"{path}: window {index} topic {tpos} has no keywords")
            topics.append(
                GroundTruthTopic(
                    title=str(topic.get("title", f"topic-{tpos}")),
                    keywords=frozenset(str(k) for k in keywords),
                )
            )
        entries.append(GroundTruth(window_index=index, topics=tuple(topics)))
    entries.sort(key=lambda e: e.window_index)
    return entries
