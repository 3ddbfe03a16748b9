"""Application configuration.

Everything runs offline by default: a hashing embedder and a scripted
mock model, so the whole pipeline works with no network and no keys.
Remote mode points the same pipeline at hosted chat and embedding
endpoints. API keys and SME tokens are read from the environment, not
from the config file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import yaml

from codequiz.errors import CodequizError

MODE_OFFLINE = "offline"
MODE_REMOTE = "remote"

# every offline artifact carries this timestamp so reruns match byte
# for byte
OFFLINE_CLOCK_VALUE = "1970-01-01T00:00:00Z"


class ConfigError(CodequizError):
    """The configuration file or environment is unusable."""


@dataclass(frozen=True)
class AppConfig:
    mode: str = MODE_OFFLINE
    data_dir: str = "data"
    generator_model: str = "gpt-4.1"
    validator_model: str = "gpt-5-mini"
    embedding_model: str = "text-embedding-3-small"
    embedding_dim: int = 256
    retrieval_k: int = 4
    max_tool_rounds: int = 8
    max_repairs: int = 2
    max_steps: int = 100_000
    max_output_bytes: int = 65_536
    max_collection_len: int = 10_000
    chat_endpoint: str = ""
    embedding_endpoint: str = ""
    chat_api_key_env: str = "CODEQUIZ_CHAT_API_KEY"
    embedding_api_key_env: str = "CODEQUIZ_EMBEDDING_API_KEY"
    host: str = "127.0.0.1"
    port: int = 8000
    # token -> sme_id; when non-empty, judgment submission requires a
    # matching bearer token
    sme_tokens: dict[str, str] = field(default_factory=dict)

    def data_path(self) -> Path:
        return Path(self.data_dir)


_INT_FIELDS = {
    "embedding_dim",
    "retrieval_k",
    "max_tool_rounds",
    "max_repairs",
    "max_steps",
    "max_output_bytes",
    "max_collection_len",
    "port",
}


def load_config(path: str | Path | None = None, **overrides) -> AppConfig:
    """Defaults, then the YAML file, then explicit overrides."""
    values: dict = {}
    if path is not None:
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        try:
            loaded = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config file is not valid YAML: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a mapping at the top level")
        values.update(loaded)

    for key, value in overrides.items():
        if value is not None:
            values[key] = value

    known = {f.name for f in fields(AppConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    config = AppConfig(**values)
    config = replace(config, sme_tokens=_merge_tokens(config.sme_tokens))
    _validate(config)
    return config


def _merge_tokens(from_file: dict) -> dict[str, str]:
    if from_file and not isinstance(from_file, dict):
        raise ConfigError("sme_tokens must map token to sme_id")
    tokens = {str(k): str(v) for k, v in (from_file or {}).items()}
    # env wins; format "token1:sme1,token2:sme2"
    raw = os.environ.get("CODEQUIZ_SME_TOKENS", "")
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise ConfigError(
                "CODEQUIZ_SME_TOKENS entries must look like token:sme_id"
            )
        token, sme_id = part.split(":", 1)
        tokens[token.strip()] = sme_id.strip()
    return tokens


def _validate(config: AppConfig) -> None:
    if config.mode not in (MODE_OFFLINE, MODE_REMOTE):
        raise ConfigError(f"mode must be offline or remote, not {config.mode!r}")
    for name in _INT_FIELDS:
        value = getattr(config, name)
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise ConfigError(f"{name} must be a positive integer")
    if config.mode == MODE_REMOTE:
        if not config.chat_endpoint:
            raise ConfigError("remote mode requires chat_endpoint")
        if not config.embedding_endpoint:
            raise ConfigError("remote mode requires embedding_endpoint")


def chat_api_key(config: AppConfig) -> str | None:
    return os.environ.get(config.chat_api_key_env) or None


def embedding_api_key(config: AppConfig) -> str | None:
    return os.environ.get(config.embedding_api_key_env) or None
