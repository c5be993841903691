"""Domain types and geometry shared by the engine, policy and harness."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple, Optional

EMOTION_MIN = 1
EMOTION_MAX = 100

# Emotion values are plain numbers kept inside [EMOTION_MIN, EMOTION_MAX].
EmotionValue = float


class Vec2(NamedTuple):
    x: float
    y: float


def distance(a: Vec2, b: Vec2) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def clamp_emotion(v: float) -> EmotionValue:
    return min(EMOTION_MAX, max(EMOTION_MIN, v))


class Hunger(str, Enum):
    SATIATED = "Satiated"
    HUNGRY = "Hungry"


class Loneliness(str, Enum):
    LOW = "Low"
    HIGH = "High"


class EmotionState(NamedTuple):
    hunger_level: Hunger
    loneliness_level: Loneliness


class Mode(str, Enum):
    RANDOM_SEARCH = "RandomSearch"
    DIRECTED_SEARCH = "DirectedSearch"
    GRAZING = "Grazing"
    SHUTDOWN = "Shutdown"


# Mode changes observable between consecutive tick boundaries. Nothing leaves
# SHUTDOWN. A searcher that finds prey and fills its container in the same
# tick passes through GRAZING, so it shows up as SEARCH -> SHUTDOWN.
LEGAL_TRANSITIONS = frozenset(
    {
        (Mode.RANDOM_SEARCH, Mode.GRAZING),
        (Mode.RANDOM_SEARCH, Mode.DIRECTED_SEARCH),
        (Mode.DIRECTED_SEARCH, Mode.GRAZING),
        (Mode.DIRECTED_SEARCH, Mode.RANDOM_SEARCH),
        (Mode.GRAZING, Mode.RANDOM_SEARCH),
        (Mode.GRAZING, Mode.SHUTDOWN),
        (Mode.RANDOM_SEARCH, Mode.SHUTDOWN),
        (Mode.DIRECTED_SEARCH, Mode.SHUTDOWN),
    }
)


@dataclass(slots=True)
class RobotState:
    id: int
    position: Vec2
    hunger: EmotionValue
    loneliness: EmotionValue
    mode: Mode = Mode.RANDOM_SEARCH
    container_load: int = 0
    inviting: bool = False
    # DirectedSearch bookkeeping
    target: Optional[Vec2] = None
    source_robot: Optional[int] = None
    # Grazing bookkeeping
    prey_id: Optional[int] = None

    def copy(self) -> "RobotState":
        return replace(self)


@dataclass(slots=True)
class Prey:
    id: int
    center: Vec2
    radius: float
    content: int

    @property
    def exhausted(self) -> bool:
        return self.content <= 0

    def copy(self) -> "Prey":
        return replace(self)


class Signal(NamedTuple):
    source_robot: int
    position: Vec2
    radius: float
