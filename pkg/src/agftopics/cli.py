"""Command-line entry point.

`detect` runs the full pipeline over a posts file and writes per-window
topic reports, an optional evaluation report, and a run manifest into
the output directory. Exit codes: 0 on success, 1 when one or more
windows failed while the run completed, 2 on configuration or I/O
errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, apply_overrides, load_config
from .corpus import ParseError
from .pipeline import run_pipeline

# Tuned parameters exposed as flags of the same name as the config keys.
_OVERRIDE_FLAGS: list[tuple[str, type, str]] = [
    ("window-hours", float, "window duration in hours"),
    ("h", float, "keyword rate: top h percent of words survive pruning"),
    ("delta", float, "damping factor of the backward association term"),
    ("embedding", str, "embedding method: node2vec or deepwalk"),
    ("num-walks", int, "walks started from every node"),
    ("walk-length", int, "nodes per walk"),
    ("p", float, "return parameter of biased walks"),
    ("q", float, "in-out parameter of biased walks"),
    ("dim", int, "embedding dimensionality"),
    ("window", int, "skip-gram context window"),
    ("epochs", int, "embedding training epochs"),
    ("n-neighbors", int, "neighbors for the reduction graph"),
    ("min-dist", float, "minimum spacing in the reduced layout"),
    ("clustering", str, "clustering method: kmeans or hdbscan"),
    ("k", int, "number of k-means clusters"),
    ("max-iter", int, "k-means iteration cap"),
    ("min-cluster-size", int, "density clustering minimum cluster size"),
    ("top-k", int, "keep only the k best topics per window (0 = all)"),
    ("match-threshold", float, "keyword overlap needed to match a topic"),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detect",
        description="Detect trending topics in a timestamped stream of short posts.",
    )
    parser.add_argument("--input", required=True, help="posts file, one JSON record per line")
    parser.add_argument("--config", help="INI-style configuration file")
    parser.add_argument("--out", required=True, help="output directory for reports")
    parser.add_argument("--gt", help="ground-truth JSON for evaluation")
    parser.add_argument(
        "--keep-intermediates", action="store_true",
        help="persist per-window graphs, embeddings, and reduced points",
    )
    parser.add_argument("--seed", type=int, help="global random seed")
    parser.add_argument(
        "--windows", help="comma-separated window indices to process (default: all)"
    )
    parser.add_argument("--verbose", action="store_true", help="log per-window progress")
    for flag, flag_type, help_text in _OVERRIDE_FLAGS:
        parser.add_argument(f"--{flag}", type=flag_type, help=help_text, dest=flag.replace("-", "_"))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(args.config)
        overrides = {flag.replace("-", "_"): getattr(args, flag.replace("-", "_")) for flag, _, _ in _OVERRIDE_FLAGS}
        overrides["seed"] = args.seed
        apply_overrides(cfg, overrides)
        windows_filter = None
        if args.windows:
            try:
                windows_filter = {int(part) for part in args.windows.split(",") if part.strip()}
            except ValueError as exc:
                raise ConfigError(f"bad --windows value {args.windows!r}") from exc
        _, status = run_pipeline(
            cfg,
            input_path=args.input,
            out_dir=args.out,
            gt_path=args.gt,
            keep_intermediates=args.keep_intermediates,
            windows_filter=windows_filter,
        )
        return status
    except (ConfigError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
