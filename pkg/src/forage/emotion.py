"""Hunger/loneliness drives and the invite policies built on them.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

from typing import NamedTuple

from .config import Heuristic, SimConfig
from .model import EmotionState, EmotionValue, Hunger, Loneliness, clamp_emotion


class LocalView(NamedTuple):
    is_grazing: bool
    grazed_this_tick: bool
    grazing_companions: int


def update_hunger(h: EmotionValue, grazed_this_tick: bool, cfg: SimConfig) -> EmotionValue:
    if grazed_this_tick:
        return clamp_emotion(h - cfg.hunger_decrement)
    return clamp_emotion(h + cfg.hunger_increment)


def update_loneliness(l: EmotionValue, view: LocalView, cfg: SimConfig) -> EmotionValue:
    """Company only counts while grazing; a searching robot always gets lonelier."""
    if view.is_grazing and view.grazing_companions >= 1:
        return clamp_emotion(l - cfg.loneliness_decrement)
    return clamp_emotion(l + cfg.loneliness_increment)


def classify_emotion(h: EmotionValue, l: EmotionValue, cfg: SimConfig) -> EmotionState:
    # a value equal to the threshold belongs to the low side
    hunger = Hunger.SATIATED if h <= cfg.satiation_threshold else Hunger.HUNGRY
    loneliness = Loneliness.LOW if l <= cfg.loneliness_threshold else Loneliness.HIGH
    return EmotionState(hunger, loneliness)


INVITE_STATE = EmotionState(Hunger.SATIATED, Loneliness.HIGH)


def invite_decision(kind: Heuristic, state: EmotionState, view: LocalView) -> bool:
    if kind is Heuristic.RANDOM_ONLY:
        return False
    if kind is Heuristic.IMMEDIATE_INVITE:
        return view.is_grazing
    return view.is_grazing and state == INVITE_STATE
