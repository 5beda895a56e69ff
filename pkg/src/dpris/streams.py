"""Reproducible random substreams and worker fan-out.

Trials are grouped into fixed-size blocks; block ``b`` always draws from the
Philox stream keyed by ``(seed, b)``, so results never depend on how many
workers process the blocks.
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np

BLOCK_SIZE = 4096
WORKERS_ENV = "DPRIS_WORKERS"

T = TypeVar("T")


def derive_seed(master: int, *keys) -> int:
    """Deterministically split ``master`` into a child 64-bit seed.

    Keys may be ints, strings or floats; floats are keyed by their bit
    pattern so a single sweep point gets the same seed in any sweep.
    """
    words = []
    for k in keys:
        if isinstance(k, str):
            words.extend(k.encode("utf-8"))
            words.append(0x10000)
        elif isinstance(k, float):
            words.append(struct.unpack("<Q", struct.pack("<d", k))[0])
        else:
            words.append(int(k))
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(words))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(block),))
    return np.random.Generator(np.random.Philox(ss))


def block_sizes(trials: int, block_size: int = BLOCK_SIZE) -> List[int]:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    full, rest = divmod(trials, block_size)
    return [block_size] * full + ([rest] if rest else [])


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        env = os.environ.get(WORKERS_ENV, "").strip()
        workers = int(env) if env else 1
    return max(1, int(workers))


def ordered_map(fn: Callable[..., T], items: Sequence, workers: int | None = None) -> List[T]:
    """``[fn(x) for x in items]``, optionally threaded; output order is fixed."""
    n = resolve_workers(workers)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
