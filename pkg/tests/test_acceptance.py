"""Exit criteria. Each test records one PASS/FAIL line shown in the pytest summary.

Run alone with ``pytest tests/test_acceptance.py -s`` (about 15 minutes on one core).
"""
import math
import random
import statistics
import time

import pytest

from conftest import ACCEPTANCE
from forage.cli import main
from forage.config import Heuristic, SimConfig, SpawnCase
from forage.engine import random_walk_step
from forage.harness import ExperimentPlan, monte_carlo, run_tasks
from forage.metrics import compute_nu
from forage.model import Vec2
from invariants import check_trace

CFG = SimConfig()
HL, RO, II = Heuristic.HUNGER_LONELINESS, Heuristic.RANDOM_ONLY, Heuristic.IMMEDIATE_INVITE


def record(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
    return ok


# ---------------------------------------------------------------- 1

def test_1_invariant_suite():
    start = time.perf_counter()
    violations, traces = [], 0
    kinds = [HL, RO, II]
    for i in range(50):
        cfg = CFG.with_overrides(heuristic=kinds[i % 3], spawn_case=list(SpawnCase)[(i // 3) % 2])
        rep = check_trace(cfg, seed=1000 + i)
        traces += 1
        violations += [f"trace {i}: {v}" for v in rep.violations]
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 60
    record("1", ok, f"{traces} full traces, {len(violations)} violations, {elapsed:.1f}s (limit 60s)")
    assert not violations, violations[:10]
    assert elapsed < 60


# ---------------------------------------------------------------- 2

def test_2_random_walk_rms():
    n_walks, n_steps, l = 10_000, 1500, 0.5
    rng = random.Random(2024)
    start = time.perf_counter()
    total = 0.0
    for _ in range(n_walks):
        p = Vec2(0.0, 0.0)
        for _ in range(n_steps):
            p = random_walk_step(p, l, rng)
        total += p.x * p.x + p.y * p.y
    rms = math.sqrt(total / n_walks)
    expected = l * math.sqrt(n_steps)
    rel = abs(rms - expected) / expected
    record("2", rel <= 0.02,
           f"RMS {rms:.3f} vs l*sqrt(N) {expected:.3f}, rel err {rel:.4f} (tol 0.02), "
           f"{time.perf_counter() - start:.1f}s")
    assert expected == pytest.approx(19.365, abs=5e-4)
    assert rel <= 0.02


# ---------------------------------------------------------------- 3

def test_3_determinism(tmp_path):
    args = ["experiment", "--heuristic", "hl,random,invite", "--case", "a,b", "--runs", "3", "--seed", "42"]
    outs = {
        "run1": [*args, "--workers", "1"],
        "run2": [*args, "--workers", "1"],
        "workers8": [*args, "--workers", "8"],
    }
    for name, argv in outs.items():
        assert main([*argv, "--out", str(tmp_path / name)]) == 0
    files = {name: (tmp_path / name / "runs.csv").read_bytes() for name in outs}
    rows = files["run1"].count(b"\n") - 1
    same = files["run1"] == files["run2"] == files["workers8"]
    record("3", same, f"runs.csv byte-identical across 2 serial runs and 8 workers ({rows} rows each)")
    assert same
    assert rows == 18


# ---------------------------------------------------------------- 4

def test_4_heuristic_gating():
    plan = ExperimentPlan(CFG, (HL, RO, II), (SpawnCase.TWO_CORNERS,), runs_per_cell=50, base_seed=4)
    details, ok = [], True
    for h in (HL, RO, II):
        tasks = run_tasks(plan, (h, SpawnCase.TWO_CORNERS))
        cfg = CFG.with_overrides(heuristic=h)
        reports = [check_trace(cfg, t.seed, t.layout_seed) for t in tasks]
        bad = [v for r in reports for v in r.violations]
        invites = sum(r.inviting_ticks for r in reports)
        grazing = sum(r.grazing_ticks for r in reports)
        if h is RO:
            cell_ok = not bad and invites == 0
        elif h is II:
            cell_ok = not bad and invites > 0
        else:
            cell_ok = not bad and invites > 0
        ok &= cell_ok
        details.append(f"{h.value}: {len(bad)} violations, {invites} invite ticks / {grazing} grazing ticks")
    record("4", ok, "; ".join(details))
    assert ok


# ---------------------------------------------------------------- 5 and 6

@pytest.fixture(scope="module")
def case_results():
    cache = {}

    def get(case):
        if case not in cache:
            plan = ExperimentPlan(CFG, (HL, RO, II), (case,), runs_per_cell=100, base_seed=2015)
            start = time.perf_counter()
            cells = {c.heuristic: c for c in monte_carlo(plan)}
            cache[case] = (cells, time.perf_counter() - start)
        return cache[case]

    return get


def _quartiles(xs):
    q = statistics.quantiles(xs, n=4, method="inclusive")
    return q[0], q[2]


def test_5_case_a(case_results):
    cells, elapsed = case_results(SpawnCase.TWO_CORNERS)
    hl, ii = cells[HL].stats, cells[II].stats
    a = hl.nu_median > ii.nu_median
    b_share = hl.runs_half_removed >= 0.6 * hl.runs
    b_vs = hl.runs_half_removed >= ii.runs_half_removed
    fast = elapsed < 600
    record("5a", a, f"median nu HL {hl.nu_median:.2f} vs ImmediateInvite {ii.nu_median:.2f}")
    record("5b", b_share and b_vs,
           f"runs with >=50% removed: HL {hl.runs_half_removed}/{hl.runs} (need >= 60), "
           f"ImmediateInvite {ii.runs_half_removed}/{ii.runs} (HL must be >=); "
           f"RandomOnly {cells[RO].stats.runs_half_removed}/{cells[RO].stats.runs}")
    record("5t", fast, f"case A batch of 300 runs took {elapsed:.0f}s (limit 600s)")
    assert a
    assert b_share and b_vs
    assert fast


def test_6_case_b(case_results):
    cells, elapsed = case_results(SpawnCase.FOUR_CORNERS)
    hl_pct = [r.percent_removed for r in cells[HL].records]
    ii_pct = [r.percent_removed for r in cells[II].records]
    (h1, h3), (i1, i3) = _quartiles(hl_pct), _quartiles(ii_pct)
    # "distributions overlap": the interquartile ranges intersect
    overlap = max(h1, i1) <= min(h3, i3)
    hl, ii = cells[HL].stats, cells[II].stats
    nu_ok = hl.nu_median > ii.nu_median
    record("6", overlap and nu_ok,
           f"percent_removed IQR HL [{h1:.1f}, {h3:.1f}] vs ImmediateInvite [{i1:.1f}, {i3:.1f}] "
           f"overlap={overlap}; median nu HL {hl.nu_median:.2f} vs {ii.nu_median:.2f}; {elapsed:.0f}s")
    assert overlap
    assert nu_ok
    assert elapsed < 600


# ---------------------------------------------------------------- 7

def test_7_efficiency_units():
    exact = compute_nu(6000, 0.05, 2000) == 60
    rng = random.Random(7)
    laws = 0
    for _ in range(1000):
        c, p, t = rng.uniform(0, 1e5), rng.uniform(1e-3, 5), rng.randint(1, 10**6)
        scale = math.isclose(compute_nu(c, 2 * p, t), compute_nu(c, p, t) / 2, rel_tol=1e-12, abs_tol=1e-300)
        linear = math.isclose(compute_nu(2 * c, p, t), 2 * compute_nu(c, p, t), rel_tol=1e-12, abs_tol=1e-300)
        laws += scale and linear
    record("7", exact and laws == 1000, f"nu(6000, 0.05, 2000) == 60: {exact}; laws held on {laws}/1000 inputs")
    assert exact
    assert laws == 1000
