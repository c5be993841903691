import pytest

from forage.config import Heuristic, SimConfig, SpawnCase
from forage.engine import init_world
from forage.harness import HEURISTIC_ORDER, ExperimentPlan, monte_carlo, run_tasks
from forage.seeding import derive_layout_seed, derive_run_seed, splitmix64

SMALL = SimConfig(robot_count=8, total_ticks=200, field_edge=10, prey_composition=[(60, 2), (10, 2)],
                  prey_total=140, container_capacity=30)


def test_splitmix64_reference_values():
    # first outputs of the reference SplitMix64 generator seeded with 0
    state, out = 0, []
    for _ in range(3):
        out.append(splitmix64(state))
        state = (state + 0x9E3779B97F4A7C15) & (2**64 - 1)
    assert out == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_derive_run_seed_examples():
    s = 42
    assert derive_run_seed(s, 0, 0, 0) == derive_run_seed(s, 0, 0, 0)
    assert derive_run_seed(s, 0, 0, 0) != derive_run_seed(s, 0, 0, 1)
    assert derive_run_seed(s, 1, 0, 0) != derive_run_seed(s, 0, 1, 0)
    with pytest.raises(ValueError):
        derive_run_seed(s, -1, 0, 0)


def test_derive_run_seed_no_collisions():
    seeds = {derive_run_seed(7, h, c, r) for h in range(3) for c in range(2) for r in range(17000)}
    assert len(seeds) == 3 * 2 * 17000  # > 10**5 tuples
    layouts = {derive_layout_seed(7, c, r) for c in range(2) for r in range(17000)}
    assert len(layouts) == 2 * 17000
    assert not seeds & layouts


def test_plan_validation():
    with pytest.raises(ValueError):
        ExperimentPlan(runs_per_cell=0)
    with pytest.raises(ValueError):
        ExperimentPlan(heuristics=())


def test_counts():
    plan = ExperimentPlan(SMALL, tuple(Heuristic), (SpawnCase.TWO_CORNERS,), runs_per_cell=10, base_seed=3)
    results = monte_carlo(plan)
    assert len(results) == 3
    assert sum(len(c.records) for c in results) == 30
    assert [c.heuristic for c in results] == list(HEURISTIC_ORDER)
    assert all(c.stats.runs == 10 for c in results)


def test_paper_grid_size():
    plan = ExperimentPlan(runs_per_cell=500)
    assert len(plan.cells()) == 6
    assert sum(len(run_tasks(plan, cell)) for cell in plan.cells()) == 3000


def test_random_only_cell_has_undefined_nu():
    plan = ExperimentPlan(SMALL, (Heuristic.RANDOM_ONLY,), (SpawnCase.FOUR_CORNERS,), runs_per_cell=8)
    (cell,) = monte_carlo(plan)
    assert all(r.invite_ticks == 0 and r.nu is None for r in cell.records)
    assert cell.stats.nu_undefined == 8 and cell.stats.nu_median is None


def test_matched_worlds_across_heuristics():
    plan = ExperimentPlan(SMALL, runs_per_cell=5, base_seed=11)
    for case in SpawnCase:
        per_h = [run_tasks(plan, (h, case)) for h in Heuristic]
        for tasks in zip(*per_h):
            worlds = [init_world(SMALL.with_overrides(heuristic=t.heuristic, spawn_case=case), t.seed, t.layout_seed)
                      for t in tasks]
            layouts = {tuple((p.center, p.content) for p in w.prey) for w in worlds}
            spawns = {tuple(r.position for r in w.robots) for w in worlds}
            assert len(layouts) == 1 and len(spawns) == 1
            assert len({t.seed for t in tasks}) == 3  # behaviour streams still differ


def test_run_independence():
    full = monte_carlo(ExperimentPlan(SMALL, (Heuristic.IMMEDIATE_INVITE,), (SpawnCase.TWO_CORNERS,), 6, base_seed=5))
    fewer = monte_carlo(ExperimentPlan(SMALL, (Heuristic.IMMEDIATE_INVITE,), (SpawnCase.TWO_CORNERS,), 4, base_seed=5))
    assert full[0].records[:4] == fewer[0].records


def test_worker_count_does_not_change_results():
    plan = ExperimentPlan(SMALL, tuple(Heuristic), (SpawnCase.FOUR_CORNERS,), runs_per_cell=4, base_seed=9)
    serial = monte_carlo(plan)
    parallel = monte_carlo(ExperimentPlan(SMALL, tuple(Heuristic), (SpawnCase.FOUR_CORNERS,), 4, 9, parallelism=3))
    assert [c.records for c in serial] == [c.records for c in parallel]
