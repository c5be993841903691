"""World engine: spawning, the per-tick behaviour machine, grazing and the run loop.

A tick is computed in six phases (sense, transition, act, resolve, emotion,
policy). Sensing reads a snapshot taken at the start of the tick, so the
order in which robots are visited never changes what they perceive. The
only deliberate order dependence is the ascending-id allocation used when a
patch runs out while several robots graze it.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import IO, Iterator, Optional, Sequence

from .config import ConfigError, Heuristic, SimConfig, SpawnCase
from .emotion import LocalView, classify_emotion, invite_decision, update_hunger, update_loneliness
from .metrics import compute_nu, percent_removed
from .model import Mode, Prey, RobotState, Signal, Vec2, distance
from .seeding import stream_seed

TAU = 2.0 * math.pi


class SetupError(RuntimeError):
    """The world could not be built (e.g. prey placement failed)."""


class SimulationError(RuntimeError):
    """An engine contract was violated by the caller."""


@dataclass
class WorldState:
    tick: int
    robots: list[RobotState]
    prey: list[Prey]
    signals: list[Signal]
    rng: random.Random
    initial_total: int
    invite_ticks: int = 0

    def copy(self) -> "WorldState":
        rng = random.Random()
        rng.setstate(self.rng.getstate())
        return WorldState(
            tick=self.tick,
            robots=[r.copy() for r in self.robots],
            prey=[p.copy() for p in self.prey],
            signals=list(self.signals),
            rng=rng,
            initial_total=self.initial_total,
            invite_ticks=self.invite_ticks,
        )

    @property
    def remaining_content(self) -> int:
        return sum(p.content for p in self.prey)

    @property
    def content_removed(self) -> int:
        return sum(r.container_load for r in self.robots)

    def finished(self) -> bool:
        return all(p.content == 0 for p in self.prey) or all(
            r.mode is Mode.SHUTDOWN for r in self.robots
        )


@dataclass(frozen=True)
class RunRecord:
    seed: int
    layout_seed: int
    config_digest: str
    heuristic: Heuristic
    spawn_case: SpawnCase
    initial_total: int
    content_removed: int
    percent_removed: float
    invite_ticks: int
    invite_power: float
    nu: Optional[float]
    final_tick: int
    robots_shutdown: int
    peak_inviters: int = 0

    @property
    def cost(self) -> float:
        return self.invite_power * self.invite_ticks


# ---------------------------------------------------------------- spawning


def corners(case: SpawnCase, edge: float) -> list[Vec2]:
    if case is SpawnCase.TWO_CORNERS:
        return [Vec2(0.0, 0.0), Vec2(edge, edge)]
    return [Vec2(0.0, 0.0), Vec2(edge, 0.0), Vec2(0.0, edge), Vec2(edge, edge)]


def spawn_robots(
    case: SpawnCase,
    count: int,
    field_edge: float,
    initial_hunger: float = 100,
    initial_loneliness: float = 100,
) -> list[RobotState]:
    """Equal groups of robots at two opposite corners (case A) or all four (case B)."""
    starts = corners(case, field_edge)
    if count % len(starts):
        raise ConfigError(
            f"robot_count {count} is not divisible by {len(starts)} for {case.value}", "robot_count"
        )
    per_group = count // len(starts)
    robots = []
    for i in range(count):
        robots.append(
            RobotState(
                id=i,
                position=starts[i // per_group],
                hunger=initial_hunger,
                loneliness=initial_loneliness,
            )
        )
    return robots


def spawn_prey(cfg: SimConfig, rng: random.Random) -> list[Prey]:
    """Place patches uniformly in the field by rejection sampling.

    Patches are laid out in composition order, so the largest entries come
    first with the default composition. Raises SetupError once more than
    ``cfg.max_placement_attempts`` candidates have been rejected.
    """
    r = cfg.prey_radius
    lo, hi = r, cfg.field_edge - r
    contents = [c for c, n in cfg.prey_composition for _ in range(n)]
    centers: list[Vec2] = []
    rejections = 0
    while len(centers) < len(contents):
        cand = Vec2(rng.uniform(lo, hi), rng.uniform(lo, hi))
        if all(distance(cand, c) >= cfg.min_prey_separation for c in centers):
            centers.append(cand)
            continue
        rejections += 1
        if rejections > cfg.max_placement_attempts:
            raise SetupError(
                f"could not place {len(contents)} prey with separation "
                f"{cfg.min_prey_separation} after {rejections - 1} rejections"
            )
    return [Prey(id=i, center=c, radius=r, content=q) for i, (c, q) in enumerate(zip(centers, contents))]


# ---------------------------------------------------------------- movement and sensing


def random_walk_step(pos: Vec2, l: float, rng: random.Random) -> Vec2:
    # no clipping: robots may leave the field
    theta = rng.random() * TAU
    return Vec2(pos[0] + l * math.cos(theta), pos[1] + l * math.sin(theta))


def directed_step(pos: Vec2, target: Vec2, l: float) -> Vec2:
    dx = target[0] - pos[0]
    dy = target[1] - pos[1]
    d = math.hypot(dx, dy)
    if d <= l:
        return Vec2(target[0], target[1])
    s = l / d
    return Vec2(pos[0] + dx * s, pos[1] + dy * s)


def detect_prey(pos: Vec2, prey: Sequence[Prey]) -> Optional[int]:
    """Id of the lowest-id live patch covering ``pos``; content is not revealed."""
    for p in prey:
        if p.content > 0 and distance(pos, p.center) <= p.radius:
            return p.id
    return None


def select_signal(pos: Vec2, signals: Sequence[Signal], exclude: Optional[int] = None) -> Optional[Signal]:
    best = None
    best_key = None
    for s in signals:
        if s.source_robot == exclude:
            continue
        d = distance(pos, s.position)
        if d > s.radius:
            continue
        key = (d, s.source_robot)
        if best_key is None or key < best_key:
            best, best_key = s, key
    return best


def resolve_grazing(
    prey: Prey,
    grazer_ids: Sequence[int],
    rate: int,
    capacities_remaining: dict[int, int],
) -> tuple[int, dict[int, int]]:
    """Share one tick of a patch among its grazers.

    Each grazer asks for ``min(rate, remaining capacity)``. When the patch
    cannot cover every request it is handed out in ascending robot id order.
    Returns the new content and the intake per robot id.
    """
    content = prey.content
    intake = {}
    for rid in sorted(grazer_ids):
        got = min(rate, capacities_remaining[rid], content)
        intake[rid] = got
        content -= got
    return content, intake


# ---------------------------------------------------------------- world


def init_world(cfg: SimConfig, seed: int, layout_seed: Optional[int] = None) -> WorldState:
    """Build the start-of-run world.

    Prey placement draws from a layout stream seeded by ``layout_seed``
    (``seed`` when omitted); random-walk headings draw from a separate
    behaviour stream derived from ``seed``.
    """
    cfg.validate()
    if layout_seed is None:
        layout_seed = seed
    prey = spawn_prey(cfg, random.Random(stream_seed(layout_seed, "layout")))
    robots = spawn_robots(
        cfg.spawn_case, cfg.robot_count, cfg.field_edge, cfg.initial_hunger, cfg.initial_loneliness
    )
    return WorldState(
        tick=0,
        robots=robots,
        prey=prey,
        signals=[],
        rng=random.Random(stream_seed(seed, "behavior")),
        initial_total=sum(p.content for p in prey),
    )


def tick(world: WorldState, cfg: SimConfig) -> WorldState:
    """Advance ``world`` by one time step in place and return it."""
    if world.tick >= cfg.total_ticks:
        raise SimulationError(f"tick {world.tick} is at or beyond total_ticks {cfg.total_ticks}")
    robots = world.robots
    prey = world.prey
    signals = world.signals
    rc = cfg.companionship_radius

    # 1. SENSE (everything below reads the phase-start snapshot)
    grazers = [(r.id, r.position) for r in robots if r.mode is Mode.GRAZING]
    found: dict[int, Optional[int]] = {}
    heard: dict[int, Optional[Signal]] = {}
    companions: dict[int, int] = {}
    for r in robots:
        if r.mode is Mode.SHUTDOWN:
            continue
        if r.mode is not Mode.GRAZING:
            found[r.id] = detect_prey(r.position, prey)
            heard[r.id] = select_signal(r.position, signals, exclude=r.id) if signals else None
        if r.mode is Mode.GRAZING or found.get(r.id) is not None:
            pos = r.position
            companions[r.id] = sum(1 for gid, gp in grazers if gid != r.id and distance(gp, pos) <= rc)

    # 2. TRANSITION (prey beats signal; grazers ignore signals)
    for r in robots:
        mode = r.mode
        if mode is Mode.SHUTDOWN:
            continue
        if mode is Mode.GRAZING:
            if r.container_load >= cfg.container_capacity:
                _shutdown(r)
            elif prey[r.prey_id].content <= 0:
                r.mode = Mode.RANDOM_SEARCH
                r.prey_id = None
            continue
        pid = found[r.id]
        sig = heard[r.id]
        if pid is not None:
            r.mode = Mode.GRAZING
            r.prey_id = pid
            r.target = None
            r.source_robot = None
        elif sig is not None:
            r.mode = Mode.DIRECTED_SEARCH
            r.target = sig.position
            r.source_robot = sig.source_robot
        elif mode is Mode.DIRECTED_SEARCH:
            r.mode = Mode.RANDOM_SEARCH
            r.target = None
            r.source_robot = None

    # 3. ACT
    l = cfg.step_length
    rng = world.rng
    for r in robots:
        if r.mode is Mode.RANDOM_SEARCH:
            r.position = random_walk_step(r.position, l, rng)
        elif r.mode is Mode.DIRECTED_SEARCH:
            r.position = directed_step(r.position, r.target, l)

    # 4. RESOLVE
    by_prey: dict[int, list[int]] = {}
    for r in robots:
        if r.mode is Mode.GRAZING:
            by_prey.setdefault(r.prey_id, []).append(r.id)
    grazed: dict[int, int] = {}
    cap = cfg.container_capacity
    for pid, ids in by_prey.items():
        remaining = {rid: cap - robots[rid].container_load for rid in ids}
        prey[pid].content, intake = resolve_grazing(prey[pid], ids, cfg.grazing_rate, remaining)
        grazed.update(intake)
    for rid, got in grazed.items():
        r = robots[rid]
        r.container_load += got
        if r.container_load >= cap:
            _shutdown(r)

    # 5. EMOTION and 6. POLICY
    new_signals = []
    for r in robots:
        if r.mode is Mode.SHUTDOWN:
            continue
        view = LocalView(
            is_grazing=r.mode is Mode.GRAZING,
            grazed_this_tick=grazed.get(r.id, 0) > 0,
            grazing_companions=companions.get(r.id, 0),
        )
        r.hunger = update_hunger(r.hunger, view.grazed_this_tick, cfg)
        r.loneliness = update_loneliness(r.loneliness, view, cfg)
        state = classify_emotion(r.hunger, r.loneliness, cfg)
        r.inviting = invite_decision(cfg.heuristic, state, view)
        if r.inviting:
            new_signals.append(Signal(r.id, r.position, cfg.invite_range))
    world.signals = new_signals
    world.invite_ticks += len(new_signals)
    world.tick += 1
    return world


def _shutdown(r: RobotState) -> None:
    r.mode = Mode.SHUTDOWN
    r.inviting = False
    r.target = None
    r.source_robot = None


# ---------------------------------------------------------------- run loop


def trace_rows(world: WorldState) -> Iterator[dict]:
    for r in world.robots:
        yield {
            "tick": world.tick,
            "robot": r.id,
            "x": r.position[0],
            "y": r.position[1],
            "mode": r.mode.value,
            "H": r.hunger,
            "L": r.loneliness,
            "container_load": r.container_load,
            "inviting": r.inviting,
        }


def iter_run(cfg: SimConfig, seed: int, layout_seed: Optional[int] = None) -> Iterator[WorldState]:
    """Yield the live world after spawning and after every tick.

    The same object is yielded each time; copy it to keep a snapshot.
    """
    world = init_world(cfg, seed, layout_seed)
    yield world
    while world.tick < cfg.total_ticks and not world.finished():
        tick(world, cfg)
        yield world


def run_simulation(
    cfg: SimConfig,
    seed: int,
    layout_seed: Optional[int] = None,
    trace: Optional[IO[str]] = None,
) -> RunRecord:
    """Run one simulation to completion.

    Stops after ``cfg.total_ticks`` ticks, or earlier once every patch is
    empty or every robot has shut down. When ``trace`` is given, one JSON
    line per robot per tick is written to it.
    """
    peak = 0
    world = None
    for world in iter_run(cfg, seed, layout_seed):
        peak = max(peak, len(world.signals))
        if trace is not None and world.tick > 0:
            for row in trace_rows(world):
                trace.write(json.dumps(row, separators=(",", ":")) + "\n")
    assert world is not None
    removed = world.content_removed
    return RunRecord(
        seed=seed,
        layout_seed=seed if layout_seed is None else layout_seed,
        config_digest=cfg.digest(),
        heuristic=cfg.heuristic,
        spawn_case=cfg.spawn_case,
        initial_total=world.initial_total,
        content_removed=removed,
        percent_removed=percent_removed(removed, world.initial_total) if world.initial_total else 0.0,
        invite_ticks=world.invite_ticks,
        invite_power=cfg.invite_power,
        nu=compute_nu(removed, cfg.invite_power, world.invite_ticks),
        final_tick=world.tick,
        robots_shutdown=sum(r.mode is Mode.SHUTDOWN for r in world.robots),
        peak_inviters=peak,
    )
