"""Plain-text `key = value` configuration for mesh and calibration settings.

Unknown keys are rejected, missing keys fall back to the documented
defaults, and `#` starts a comment. Example::

    mesh.rows = 8
    mesh.clock_hz = 600e6
    cal.ifft_cycles = 18862
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .deploy import Calibration
from .mesh import MeshConfig


class ConfigError(ValueError):
    """Malformed configuration file; the message names the offending line."""


@dataclass(frozen=True)
class Settings:
    mesh: MeshConfig
    cal: Calibration


_MESH_FIELDS = {f.name for f in fields(MeshConfig)}
_CAL_FIELDS = {f.name for f in fields(Calibration)}


def _convert(raw: str, current) -> object:
    if isinstance(current, bool):
        raise TypeError
    if isinstance(current, int):
        return int(raw, 0)
    if isinstance(current, float):
        return float(raw)
    return raw


def parse_config(text: str) -> Settings:
    mesh_kw: dict[str, object] = {}
    cal_kw: dict[str, object] = {}
    mesh_defaults = MeshConfig()
    cal_defaults = Calibration()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if not raw:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        if key.startswith("mesh."):
            name, target, defaults = key[5:], mesh_kw, mesh_defaults
            known = _MESH_FIELDS
        elif key.startswith("cal."):
            name, target, defaults = key[4:], cal_kw, cal_defaults
            known = _CAL_FIELDS
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if name not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            target[name] = _convert(raw, getattr(defaults, name))
        except (TypeError, ValueError):
            raise ConfigError(f"line {lineno}: bad value {raw!r} for {key!r}") from None
    try:
        return Settings(mesh=MeshConfig(**mesh_kw), cal=Calibration(**cal_kw))
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None


def load_config(path: str | None) -> Settings:
    """Settings from a config file; all defaults when no path is given."""
    if path is None:
        return Settings(MeshConfig(), Calibration())
    with open(path) as fh:
        return parse_config(fh.read())
