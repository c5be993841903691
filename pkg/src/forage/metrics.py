"""Income/cost efficiency and cross-run aggregation."""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Optional, Sequence


def compute_nu(content_removed: float, invite_power: float, invite_ticks: int) -> Optional[float]:
    """Prey content removed per unit of invite energy.

    Returns None when no invites were sent, since the ratio is then undefined.
    """
    if content_removed < 0 or invite_ticks < 0:
        raise ValueError("content_removed and invite_ticks must be nonnegative")
    if invite_power <= 0:
        raise ValueError("invite_power must be positive")
    if invite_ticks == 0:
        return None
    return content_removed / (invite_power * invite_ticks)


def percent_removed(content_removed: float, initial_total: float) -> float:
    if initial_total <= 0:
        raise ValueError("initial_total must be positive")
    if not 0 <= content_removed <= initial_total:
        raise ValueError(f"content_removed {content_removed} outside [0, {initial_total}]")
    return 100.0 * content_removed / initial_total


@dataclass(frozen=True)
class AggregateStats:
    runs: int
    percent_mean: float
    percent_median: float
    percent_min: float
    percent_max: float
    nu_mean: Optional[float]
    nu_median: Optional[float]
    runs_half_removed: int
    nu_defined: int
    nu_undefined: int

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "percent_removed": {
                "mean": self.percent_mean,
                "median": self.percent_median,
                "min": self.percent_min,
                "max": self.percent_max,
            },
            "nu": {"mean": self.nu_mean, "median": self.nu_median,
                   "defined": self.nu_defined, "undefined": self.nu_undefined},
            "runs_percent_removed_ge_50": self.runs_half_removed,
        }


def aggregate_runs(records: Sequence) -> AggregateStats:
    """Summarise run records that share one configuration.

    Runs with undefined efficiency are left out of the efficiency statistics
    and counted in ``nu_undefined`` instead.
    """
    if not records:
        raise ValueError("cannot aggregate an empty list of records")
    digests = {r.config_digest for r in records}
    if len(digests) > 1:
        raise ValueError(f"records mix {len(digests)} configurations")
    # sort first so float sums do not depend on input order
    pct = sorted(r.percent_removed for r in records)
    nus = sorted(r.nu for r in records if r.nu is not None)
    return AggregateStats(
        runs=len(records),
        percent_mean=statistics.fmean(pct),
        percent_median=statistics.median(pct),
        percent_min=pct[0],
        percent_max=pct[-1],
        nu_mean=statistics.fmean(nus) if nus else None,
        nu_median=statistics.median(nus) if nus else None,
        runs_half_removed=sum(p >= 50 for p in pct),
        nu_defined=len(nus),
        nu_undefined=len(records) - len(nus),
    )
