"""Simulation configuration: defaults, validation and JSON round-tripping."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any


class ConfigError(ValueError):
    """Invalid or unreadable configuration. ``key`` names the offending field."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class SpawnCase(str, Enum):
    TWO_CORNERS = "TwoCorners"  # case A
    FOUR_CORNERS = "FourCorners"  # case B


class Heuristic(str, Enum):
    HUNGER_LONELINESS = "HungerLoneliness"
    RANDOM_ONLY = "RandomOnly"
    IMMEDIATE_INVITE = "ImmediateInvite"


# Short names used on the command line and in exported files.
HEURISTIC_ALIASES = {
    "hl": Heuristic.HUNGER_LONELINESS,
    "random": Heuristic.RANDOM_ONLY,
    "invite": Heuristic.IMMEDIATE_INVITE,
}
CASE_ALIASES = {"a": SpawnCase.TWO_CORNERS, "b": SpawnCase.FOUR_CORNERS}


def heuristic_short(h: Heuristic) -> str:
    return {v: k for k, v in HEURISTIC_ALIASES.items()}[h]


def case_short(c: SpawnCase) -> str:
    return {v: k for k, v in CASE_ALIASES.items()}[c]


@dataclass(frozen=True)
class SimConfig:
    robot_count: int = 60
    total_ticks: int = 1500
    step_length: float = 0.5
    field_edge: float = 40.0
    invite_range: float = 30.0
    invite_power: float = 0.05
    container_capacity: int = 100
    grazing_rate: int = 1
    prey_composition: tuple[tuple[int, int], ...] = ((2900, 2), (50, 4))
    prey_total: int = 6000
    prey_radius: float = 1.0
    min_prey_separation: float = 2.0
    hunger_increment: float = 1
    hunger_decrement: float = 1
    loneliness_increment: float = 1
    loneliness_decrement: float = 1
    companionship_radius: float = 2.0
    initial_hunger: float = 100
    initial_loneliness: float = 100
    satiation_threshold: float = 50
    loneliness_threshold: float = 50
    spawn_case: SpawnCase = SpawnCase.TWO_CORNERS
    heuristic: Heuristic = Heuristic.HUNGER_LONELINESS
    max_placement_attempts: int = 10_000

    def __post_init__(self):
        # accept lists and plain strings (JSON, kwargs) but store canonical types
        comp = tuple((int(c), int(n)) for c, n in self.prey_composition)
        object.__setattr__(self, "prey_composition", comp)
        object.__setattr__(self, "spawn_case", _parse_enum(SpawnCase, self.spawn_case, "spawn_case"))
        object.__setattr__(self, "heuristic", _parse_enum(Heuristic, self.heuristic, "heuristic"))

    @property
    def prey_content_sum(self) -> int:
        return sum(c * n for c, n in self.prey_composition)

    def validate(self) -> "SimConfig":
        for name in (
            "robot_count", "total_ticks", "container_capacity", "grazing_rate",
            "max_placement_attempts",
        ):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}", name)
        for name in (
            "step_length", "field_edge", "invite_range", "invite_power", "prey_radius",
            "min_prey_separation", "hunger_increment", "hunger_decrement",
            "loneliness_increment", "loneliness_decrement", "companionship_radius",
        ):
            value = getattr(self, name)
            if not _finite_number(value) or value <= 0:
                raise ConfigError(f"{name} must be a positive finite number, got {value!r}", name)
        for name in ("initial_hunger", "initial_loneliness"):
            value = getattr(self, name)
            if not _finite_number(value) or not 1 <= value <= 100:
                raise ConfigError(f"{name} must lie in [1, 100], got {value!r}", name)
        for name in ("satiation_threshold", "loneliness_threshold"):
            value = getattr(self, name)
            if not _finite_number(value) or not 1 <= value < 100:
                raise ConfigError(f"{name} must lie in [1, 100), got {value!r}", name)
        for content, count in self.prey_composition:
            if content <= 0 or count <= 0:
                raise ConfigError(
                    f"prey_composition entries need positive content and count, got {(content, count)}",
                    "prey_composition",
                )
        if self.prey_total < 0:
            raise ConfigError("prey_total must be nonnegative", "prey_total")
        if self.prey_content_sum != self.prey_total:
            raise ConfigError(
                f"prey_composition sums to {self.prey_content_sum}, expected prey_total {self.prey_total}",
                "prey_composition",
            )
        if 2 * self.prey_radius > self.field_edge:
            raise ConfigError("prey_radius too large for field_edge", "prey_radius")
        groups = 2 if self.spawn_case is SpawnCase.TWO_CORNERS else 4
        if self.robot_count % groups:
            raise ConfigError(
                f"robot_count {self.robot_count} is not divisible by {groups} for {self.spawn_case.value}",
                "robot_count",
            )
        return self

    def with_overrides(self, **overrides: Any) -> "SimConfig":
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            key = sorted(unknown)[0]
            raise ConfigError(f"unknown configuration key {key!r}", key)
        return replace(self, **overrides)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["prey_composition"] = [list(p) for p in self.prey_composition]
        d["spawn_case"] = self.spawn_case.value
        d["heuristic"] = self.heuristic.value
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SimConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        try:
            return cls().with_overrides(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed configuration: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SimConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> "SimConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_json(text)

    def digest(self) -> str:
        """Short stable checksum of the configuration."""
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


def _finite_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _parse_enum(enum_cls, value, key):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(m.value for m in enum_cls)
        raise ConfigError(f"{key} must be one of {choices}, got {value!r}", key) from None
