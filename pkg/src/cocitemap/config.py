from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

import yaml

ENV_CORPUS = "COCITEMAP_CORPUS"
ENV_OUTPUT = "COCITEMAP_OUTPUT"


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    corpus: str
    output: str = "cocitemap_out"
    year_range: tuple[int, int] | None = None
    strict: bool = False
    k: int = 4
    criterion: str = "ratio2"
    budget: int | None = None
    decay: float = 0.23
    window: int = 4
    min_lifespan: int = 14
    label_min_size: int = 10
    strict_moves: bool = False
    tag_limit: int = 10
    category_min_ratio: float = 0.02
    streaming: bool = False
    workers: int = 1
    render: bool = True

    def __post_init__(self):
        if isinstance(self.year_range, str):
            self.year_range = parse_range(self.year_range)
        elif self.year_range is not None:
            self.year_range = tuple(int(x) for x in self.year_range)
        self.validate()

    def validate(self) -> None:
        if not self.corpus:
            raise ConfigError("corpus path is required")
        if self.year_range is not None and (len(self.year_range) != 2 or self.year_range[0] > self.year_range[1]):
            raise ConfigError(f"bad year range {self.year_range}")
        if self.k < 3:
            raise ConfigError("k must be >= 3")
        if self.criterion not in ("ratio2", "entropy"):
            raise ConfigError(f"unknown threshold criterion {self.criterion!r}")
        if self.budget is not None and self.budget < 1:
            raise ConfigError("budget must be positive")
        if self.decay < 0:
            raise ConfigError("decay must be non-negative")
        for name in ("window", "min_lifespan", "tag_limit", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.label_min_size < 0:
            raise ConfigError("label_min_size must be >= 0")
        if not 0 <= self.category_min_ratio <= 1:
            raise ConfigError("category_min_ratio must lie in [0, 1]")

    def to_dict(self, with_output: bool = True) -> dict:
        d = dataclasses.asdict(self)
        if d["year_range"] is not None:
            d["year_range"] = list(d["year_range"])
        if not with_output:
            d.pop("output")
        return d


def parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ConfigError(f"year range must look like 1975:2008, got {text!r}") from None


def load_config(path: str | Path) -> PipelineConfig:
    """Read a YAML (or JSON) config; relative paths resolve against its folder.

    ``COCITEMAP_CORPUS`` and ``COCITEMAP_OUTPUT`` override the two paths.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    known = {f.name for f in dataclasses.fields(PipelineConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key, env in (("corpus", ENV_CORPUS), ("output", ENV_OUTPUT)):
        if os.environ.get(env):
            raw[key] = os.environ[env]
        elif key in raw and not Path(raw[key]).is_absolute():
            raw[key] = str(path.parent / raw[key])
    if "corpus" not in raw:
        raise ConfigError("config lacks 'corpus'")
    return PipelineConfig(**raw)
