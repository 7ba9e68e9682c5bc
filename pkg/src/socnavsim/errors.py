"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """A scenario configuration failed validation.

    ``field`` names the offending entry (dotted path into the config).
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ScenarioSamplingError(RuntimeError):
    """Rejection sampling could not place an entity in free space."""


class EpisodeFinishedError(RuntimeError):
    """step() was called on an episode that already terminated or truncated."""


class DatasetFormatError(ValueError):
    """A grid dataset stream is malformed (bad magic, version, or length)."""
