"""Pipeline configuration: defaults, flat key=value files, overrides.

Config files hold one `key = value` pair per line with # comments.
Unknown keys are rejected so typos fail loudly.  Command-line flags
override file values; every report echoes the effective config.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    seed: int = 0
    folds: int = 10
    workers: int = 0                    # 0 means one per cpu
    gap_threshold: float = 1000.0
    english_threshold: float = 0.10
    similarity_threshold: float = 0.3
    balance_classes: bool = False
    n_topics: int = 30
    lda_alpha: float = -1.0             # negative means 50 / n_topics
    lda_beta: float = 0.01
    lda_iterations: int = 500
    lda_infer_iterations: int = 100
    embed_dim: int = 50
    embed_window: int = 5
    embed_epochs: int = 20
    embed_negatives: int = 5
    embed_min_count: int = 2
    mlp_hidden: tuple = (64, 32)
    mlp_lr: float = 0.01
    mlp_batch: int = 32
    mlp_epochs: int = 50
    threshold: float = 0.5

    def effective_alpha(self) -> float:
        return self.lda_alpha if self.lda_alpha > 0 else 50.0 / self.n_topics

    def to_dict(self) -> dict:
        out: dict = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


def _parse_value(name: str, text: str, kind: type) -> Any:
    text = text.strip()
    try:
        if kind is bool:
            low = text.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(text)
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        if kind is tuple:
            if not text:
                return ()
            return tuple(int(p.strip()) for p in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {text!r}") from exc
    return text


def _field_types() -> dict:
    return {f.name: type(getattr(PipelineConfig(), f.name))
            for f in fields(PipelineConfig)}


def parse_config_text(text: str, base: PipelineConfig | None = None) -> PipelineConfig:
    cfg = base or PipelineConfig()
    types = _field_types()
    updates: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in types:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        updates[key] = _parse_value(key, value, types[key])
    return replace(cfg, **updates)


def load_config(path: str | Path, base: PipelineConfig | None = None) -> PipelineConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, base)


def apply_overrides(cfg: PipelineConfig, overrides: dict) -> PipelineConfig:
    """Overlay non-None override values (e.g. parsed CLI flags)."""
    types = _field_types()
    updates: dict = {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in types:
            raise ConfigError(f"unknown config key {key!r}")
        if types[key] is tuple:
            if isinstance(value, str):
                value = _parse_value(key, value, tuple)
            elif isinstance(value, list):
                value = tuple(int(v) for v in value)
        updates[key] = value
    return replace(cfg, **updates)
