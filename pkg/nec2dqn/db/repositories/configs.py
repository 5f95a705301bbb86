from pathlib import Path
from typing import Dict, Iterable, Optional, Union
import logging

import backoff
from pydantic import ValidationError

from ...core.config import REFERENCE_DEFAULTS
from ...core.exceptions import ConfigError
from ...schemas.config import RunConfig

logger = logging.getLogger(__name__)

def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)

class ConfigRepository:
    """Flat ``key = value`` config files with ``#`` comments."""

    def parse_text(self, text: str) -> Dict[str, str]:
        values: Dict[str, str] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {number}", f"expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ConfigError(f"line {number}", "missing key")
            values[key] = value
        return values

    def parse_overrides(self, overrides: Iterable[str]) -> Dict[str, str]:
        values: Dict[str, str] = {}
        for item in overrides:
            if "=" not in item:
                raise ConfigError(item, "override must look like key=value")
            key, value = (part.strip() for part in item.split("=", 1))
            values[key] = value
        return values

    def build(self, values: Dict[str, object]) -> RunConfig:
        known = set(RunConfig.model_fields)
        for key in values:
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
        try:
            return RunConfig(**values)
        except ValidationError as e:
            error = e.errors()[0]
            field = ".".join(str(part) for part in error["loc"]) or "config"
            raise ConfigError(field, error["msg"]) from e

    def load(
        self,
        path: Optional[Union[str, Path]] = None,
        overrides: Iterable[str] = (),
        base: Optional[Dict[str, object]] = None
    ) -> RunConfig:
        """``base`` < config file < ``--set`` overrides."""
        values: Dict[str, object] = dict(base or {})
        if path is not None:
            try:
                text = Path(path).read_text(encoding="utf-8")
            except OSError as e:
                raise ConfigError("config", f"cannot read {path}: {e.strerror}") from e
            values.update(self.parse_text(text))
        values.update(self.parse_overrides(overrides))
        return self.build(values)

    def render(self, config: RunConfig) -> str:
        lines = []
        for key in sorted(RunConfig.model_fields):
            line = f"{key} = {_format_value(getattr(config, key))}"
            if key in REFERENCE_DEFAULTS:
                line += f"  # reference: {_format_value(REFERENCE_DEFAULTS[key])}"
            lines.append(line)
        return "\n".join(lines) + "\n"

    @backoff.on_exception(
        backoff.expo,
        OSError,
        max_tries=3,
        max_time=30
    )
    def write_resolved(self, path: Path, config: RunConfig) -> None:
        path.write_text(self.render(config), encoding="utf-8")

config_repository = ConfigRepository()
