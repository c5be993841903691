"""Monte Carlo batches over (heuristic, spawn case) cells with matched worlds."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .config import Heuristic, SimConfig, SpawnCase
from .engine import RunRecord, SetupError, run_simulation
from .metrics import AggregateStats, aggregate_runs
from .seeding import derive_layout_seed, derive_run_seed

log = logging.getLogger(__name__)

# Fixed enumeration order: indices feed the seed derivation and must not move.
HEURISTIC_ORDER = (Heuristic.HUNGER_LONELINESS, Heuristic.RANDOM_ONLY, Heuristic.IMMEDIATE_INVITE)
CASE_ORDER = (SpawnCase.TWO_CORNERS, SpawnCase.FOUR_CORNERS)


@dataclass(frozen=True)
class ExperimentPlan:
    base_config: SimConfig = field(default_factory=SimConfig)
    heuristics: tuple[Heuristic, ...] = HEURISTIC_ORDER
    spawn_cases: tuple[SpawnCase, ...] = CASE_ORDER
    runs_per_cell: int = 500
    base_seed: int = 0
    parallelism: int = 1

    def __post_init__(self):
        if self.runs_per_cell < 1:
            raise ValueError("runs_per_cell must be at least 1")
        if not self.heuristics or not self.spawn_cases:
            raise ValueError("plan needs at least one heuristic and one spawn case")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")

    def cells(self) -> list[tuple[Heuristic, SpawnCase]]:
        hs = sorted(set(self.heuristics), key=HEURISTIC_ORDER.index)
        cs = sorted(set(self.spawn_cases), key=CASE_ORDER.index)
        return [(h, c) for h in hs for c in cs]


@dataclass(frozen=True)
class RunTask:
    heuristic: Heuristic
    spawn_case: SpawnCase
    run_index: int
    seed: int
    layout_seed: int


@dataclass
class CellResult:
    heuristic: Heuristic
    spawn_case: SpawnCase
    records: list[RunRecord]
    stats: AggregateStats


class CellError(RuntimeError):
    pass


def run_tasks(plan: ExperimentPlan, cell: tuple[Heuristic, SpawnCase]) -> list[RunTask]:
    h, c = cell
    hi, ci = HEURISTIC_ORDER.index(h), CASE_ORDER.index(c)
    return [
        RunTask(h, c, i, derive_run_seed(plan.base_seed, hi, ci, i), derive_layout_seed(plan.base_seed, ci, i))
        for i in range(plan.runs_per_cell)
    ]


def cell_config(base: SimConfig, heuristic: Heuristic, case: SpawnCase) -> SimConfig:
    return base.with_overrides(heuristic=heuristic, spawn_case=case)


def _execute(args: tuple[SimConfig, RunTask]) -> RunRecord:
    cfg, task = args
    try:
        return run_simulation(cfg, task.seed, task.layout_seed)
    except SetupError as exc:
        raise CellError(
            f"{task.heuristic.value}/{task.spawn_case.value} run {task.run_index} "
            f"(seed {task.seed}, layout seed {task.layout_seed}): {exc}"
        ) from exc


def monte_carlo(plan: ExperimentPlan, progress: Optional[Callable[[int, int], None]] = None) -> list[CellResult]:
    """Run every cell of ``plan``; results come back in (heuristic, case, run) order."""
    jobs = []
    for cell in plan.cells():
        cfg = cell_config(plan.base_config, *cell).validate()
        jobs.extend((cfg, t) for t in run_tasks(plan, cell))
    log.info("running %d simulations with %d worker(s)", len(jobs), plan.parallelism)

    if plan.parallelism == 1:
        records = []
        for n, job in enumerate(jobs, 1):
            records.append(_execute(job))
            if progress:
                progress(n, len(jobs))
    else:
        with ProcessPoolExecutor(max_workers=plan.parallelism) as pool:
            records = []
            for n, rec in enumerate(pool.map(_execute, jobs, chunksize=4), 1):
                records.append(rec)
                if progress:
                    progress(n, len(jobs))

    results = []
    k = 0
    for h, c in plan.cells():
        recs = records[k:k + plan.runs_per_cell]
        k += plan.runs_per_cell
        results.append(CellResult(h, c, recs, aggregate_runs(recs)))
    return results
