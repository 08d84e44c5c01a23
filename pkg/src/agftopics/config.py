"""Pipeline configuration with tuned defaults.

Config files are flat INI-style key=value text with sections mirroring
the module names ([corpus], [hwa], [embed], [reduce], [cluster], [eval],
[pipeline]). Any parameter can also be overridden by a command-line flag
of the same name.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields


class ConfigError(ValueError):
    """Invalid configuration value or file."""


@dataclass
class PipelineConfig:
    # corpus
    window_hours: float = 12.0
    count_empty_posts: bool = True
    stopwords: str = ""
    # hwa
    h: float = 10.0
    delta: float = 0.1
    # embed
    embedding: str = "node2vec"
    num_walks: int = 64
    walk_length: int = 8
    p: float = 1.0
    q: float = 0.5
    dim: int = 32
    window: int = 10
    epochs: int = 100
    negative_samples: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    # reduce
    n_neighbors: int = 2
    min_dist: float = 0.1
    target_dim: int = 2
    reduce_epochs: int = 500
    # cluster
    clustering: str = "hdbscan"
    k: int = 8
    max_iter: int = 300
    min_cluster_size: int = 5
    # eval
    match_threshold: float = 0.5
    # pipeline
    seed: int = 1
    top_k: int = 0  # 0 keeps every topic

    def validate(self) -> None:
        if self.window_hours <= 0:
            raise ConfigError("window_hours must be positive")
        if not 0 < self.h <= 100:
            raise ConfigError("h must lie in (0, 100]")
        if self.delta < 0:
            raise ConfigError("delta must be non-negative")
        if self.embedding not in ("node2vec", "deepwalk"):
            raise ConfigError(f"unknown embedding method {self.embedding!r}")
        if self.clustering not in ("kmeans", "hdbscan"):
            raise ConfigError(f"unknown clustering method {self.clustering!r}")
        if self.p <= 0 or self.q <= 0:
            raise ConfigError("p and q must be positive")
        for name in ("num_walks", "walk_length", "dim", "window", "epochs",
                     "n_neighbors", "target_dim", "reduce_epochs", "k", "max_iter"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        if self.min_cluster_size < 2:
            raise ConfigError("min_cluster_size must be at least 2")
        if self.negative_samples < 0:
            raise ConfigError("negative_samples must be non-negative")
        if not 0 < self.match_threshold <= 1:
            raise ConfigError("match_threshold must lie in (0, 1]")
        if self.top_k < 0:
            raise ConfigError("top_k must be non-negative")

    @property
    def window_seconds(self) -> float:
        return self.window_hours * 3600

    def walk_params(self) -> tuple[float, float]:
        """Effective (p, q): the uniform-walk method fixes both at 1."""
        if self.embedding == "deepwalk":
            return 1.0, 1.0
        return self.p, self.q

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.init}


_SECTION_FIELDS = {
    "corpus": ("window_hours", "count_empty_posts", "stopwords"),
    "hwa": ("h", "delta"),
    "embed": ("embedding", "num_walks", "walk_length", "p", "q", "dim", "window",
              "epochs", "negative_samples", "learning_rate", "min_learning_rate"),
    "reduce": ("n_neighbors", "min_dist", "target_dim", "reduce_epochs"),
    "cluster": ("clustering", "k", "max_iter", "min_cluster_size"),
    "eval": ("match_threshold",),
    "pipeline": ("seed", "top_k"),
}


def _coerce(value: str, target_type: type) -> object:
    if target_type is bool:
        lowered = value.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"expected a boolean, got {value!r}")
    return target_type(value)


def load_config(path: str | None = None) -> PipelineConfig:
    """Defaults, overridden by the config file when one is given."""
    config = PipelineConfig()
    if path is None:
        config.validate()
        return config
    parser = configparser.ConfigParser()
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    types = {f.name: type(getattr(config, f.name)) for f in fields(config) if f.init}
    for section in parser.sections():
        if section not in _SECTION_FIELDS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in _SECTION_FIELDS[section]:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            try:
                setattr(config, key, _coerce(value, types[key]))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{path}: bad value for {key!r}: {value!r}") from exc
    config.validate()
    return config


def apply_overrides(config: PipelineConfig, overrides: dict[str, object]) -> PipelineConfig:
    """Apply non-None override values (e.g. parsed CLI flags)."""
    for key, value in overrides.items():
        if value is None:
            continue
        if not hasattr(config, key):
            raise ConfigError(f"unknown config parameter {key!r}")
        setattr(config, key, value)
    config.validate()
    return config
