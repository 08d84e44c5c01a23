"""Trending-topic detection for timestamped microblog post streams.

The pipeline builds per-window word co-occurrence graphs, rates and
prunes keywords, links them with directed association strengths, embeds
the resulting graph with biased random walks and skip-gram training,
reduces the embeddings to a low-dimensional layout, clusters the layout,
and reports ranked topics with optional evaluation against ground truth.
"""

from .cluster import Topic, extract_topics, hdbscan, kmeans, top_k_topics
from .config import ConfigError, PipelineConfig, load_config
from .cooc import CoocGraph, build_batch_graph, merge_post, post_graph
from .corpus import Batch, GroundTruth, RawPost, load_ground_truth, load_posts, window_posts
from .embed import (
    TrainConfig,
    WalkConfig,
    cosine_similarity,
    generate_walks,
    train_skipgram,
)
from .eval import (
    FsReport,
    MultiAssignment,
    TopicEvalReport,
    f1_score,
    fs_class,
    fs_cluster,
    fs_total,
    match_topics,
    topic_scores,
)
from .hwa import AgfGraph, build_agf_graph, cimawa, keyword_rating, select_keywords
from .pipeline import run_pipeline
from .reduce import ReduceConfig, knn_graph, reduce_embeddings
from .tokenize import Token, filter_tokens, normalize, tokenize

__version__ = "0.1.0"

__all__ = [
    "AgfGraph",
    "Batch",
    "ConfigError",
    "CoocGraph",
    "FsReport",
    "GroundTruth",
    "MultiAssignment",
    "PipelineConfig",
    "RawPost",
    "ReduceConfig",
    "Token",
    "Topic",
    "TopicEvalReport",
    "TrainConfig",
    "WalkConfig",
    "build_agf_graph",
    "build_batch_graph",
    "cimawa",
    "cosine_similarity",
    "extract_topics",
    "f1_score",
    "filter_tokens",
    "fs_class",
    "fs_cluster",
    "fs_total",
    "generate_walks",
    "hdbscan",
    "keyword_rating",
    "kmeans",
    "knn_graph",
    "load_config",
    "load_ground_truth",
    "load_posts",
    "match_topics",
    "merge_post",
    "normalize",
    "post_graph",
    "reduce_embeddings",
    "run_pipeline",
    "select_keywords",
    "tokenize",
    "top_k_topics",
    "topic_scores",
    "train_skipgram",
    "window_posts",
    "__version__",
]
