"""Application settings and configuration management."""

import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from dotenv import load_dotenv

from src.config.models import AppConfig, ProtocolConfig, ProtocolRegistry, RunConfig

# Load environment variables
load_dotenv()

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent


def _read_yaml(path: Path) -> Dict[str, Any]:
    with open(path, "r") as f:
        return yaml.safe_load(f) or {}


class Settings:
    """Application settings manager."""

    def __init__(self):
        """Initialize settings from environment variables."""
        self.config = AppConfig(
            log_level=os.getenv("LOG_LEVEL", "INFO"),
            log_file=os.getenv("LOG_FILE") or None,
            output_data_path=os.getenv("OUTPUT_DATA_PATH", "data/processed"),
            steps_per_unit_time=int(os.getenv("STEPS_PER_UNIT_TIME", "1000")),
            scan_workers=int(os.getenv("SCAN_WORKERS", "1")),
        )

        self._registry: Optional[ProtocolRegistry] = None
        self._protocol_configs: Dict[str, ProtocolConfig] = {}

    def get_registry(self) -> ProtocolRegistry:
        """
        Load and return the protocol registry.

        Returns:
            ProtocolRegistry instance
        """
        if self._registry is None:
            registry_path = PROJECT_ROOT / "protocols" / "registry.yaml"
            self._registry = ProtocolRegistry(**_read_yaml(registry_path))
        return self._registry

    def get_protocol_config(self, kind: str) -> ProtocolConfig:
        """
        Load protocol-specific configuration.

        Args:
            kind: Protocol key from registry (tilted, flat, hopping)

        Returns:
            ProtocolConfig instance

        Raises:
            ValueError: If the protocol is unknown or disabled
        """
        if kind not in self._protocol_configs:
            entry = self.get_registry().get_protocol(kind)
            if not entry:
                raise ValueError(f"Protocol '{kind}' not found in registry")
            if not entry.enabled:
                raise ValueError(f"Protocol '{kind}' is disabled in the registry")
            self._protocol_configs[kind] = ProtocolConfig(
                **_read_yaml(PROJECT_ROOT / entry.config_path)
            )
        return self._protocol_configs[kind]

    def load_run_config(
        self, path: Optional[Union[str, Path]], overrides: Optional[Dict[str, Any]] = None
    ) -> RunConfig:
        """
        Build a RunConfig from an optional YAML file and flag overrides.

        Overrides are nested dicts merged over the file contents; flags win.
        """
        data: Dict[str, Any] = _read_yaml(Path(path)) if path else {}
        merged = _deep_merge(data, overrides or {})
        merged.setdefault("steps_per_unit_time", self.config.steps_per_unit_time)
        return RunConfig.model_validate(merged)

    def get_output_path(self, filename: str) -> Path:
        """Resolve a file name inside the output directory, creating the directory."""
        path = Path(self.config.output_data_path)
        if not path.is_absolute():
            path = PROJECT_ROOT / path
        path.mkdir(parents=True, exist_ok=True)
        return path / filename


def _deep_merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


# Global settings instance
settings = Settings()
