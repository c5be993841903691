"""Deterministic seed derivation based on the SplitMix64 finalizer."""
from __future__ import annotations

import zlib

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix(*values: int) -> int:
    """Fold integers into one 64-bit seed. Order matters."""
    h = 0
    for v in values:
        h = splitmix64(h ^ (v & MASK64))
    return h


def derive_run_seed(base_seed: int, heuristic_index: int, case_index: int, run_index: int) -> int:
    if min(heuristic_index, case_index, run_index) < 0:
        raise ValueError("indices must be nonnegative")
    return mix(base_seed, heuristic_index, case_index, run_index)


# Tag kept out of the heuristic index range so layout seeds never equal run seeds.
_LAYOUT_TAG = 0x4C41594F5554  # "LAYOUT"


def derive_layout_seed(base_seed: int, case_index: int, run_index: int) -> int:
    """Seed for prey placement; shared by every heuristic for one (case, run)."""
    return mix(_LAYOUT_TAG, base_seed, case_index, run_index)


def stream_seed(seed: int, name: str) -> int:
    return mix(seed, zlib.crc32(name.encode()))
