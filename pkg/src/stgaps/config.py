"""Tool configuration: ``key=value`` files overridden by command-line flags."""

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ParameterError

CACHE_ENV = "STGAPS_CACHE_DIR"


def default_cache_dir():
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "stgaps"


@dataclass(frozen=True)
class ToolConfig:
    precision_bits: int = 128
    cache_dir: Path = field(default_factory=default_cache_dir)
    pmax: int = 200_000
    grid: int = 512
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ParameterError("precision_bits must be >= 64")
        if self.pmax < 100:
            raise ParameterError("pmax must be >= 100")
        if self.grid < 2:
            raise ParameterError("grid must be >= 2")

    def tolerance(self, name, default):
        return self.tolerances.get(name, default)

    def override(self, **kwargs):
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def parse_config_text(text):
    """Parse ``key=value`` lines. ``#`` starts a comment; ``tol.NAME=x`` sets a tolerance."""
    values = {}
    tolerances = {}
    names = {f.name for f in fields(ToolConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key.startswith("tol."):
                tolerances[key[4:]] = float(value)
            elif key in ("precision_bits", "pmax", "grid"):
                values[key] = int(value)
            elif key == "cache_dir":
                values[key] = Path(value)
            else:
                raise ParameterError(f"config line {lineno}: unknown key {key!r}")
        except ValueError:
            raise ParameterError(f"config line {lineno}: bad value {value!r}") from None
    assert names >= set(values)
    return values, tolerances


def load_config(path=None, **overrides):
    values, tolerances = {}, {}
    if path is not None:
        values, tolerances = parse_config_text(Path(path).read_text())
    values.update({k: v for k, v in overrides.items() if v is not None})
    if tolerances:
        values["tolerances"] = tolerances
    return ToolConfig(**values)
