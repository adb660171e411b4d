"""Seeded, splittable random streams.

Every consumer derives its own Philox stream from the run seed plus a short
tuple of integers naming the purpose, so adding a consumer never shifts the
numbers another one sees.
"""

from typing import Sequence

import numpy as np

from .config import MAX_SEED
from .exceptions import ConfigError

# stream tags
IDS_STREAM = 1
BITS_STREAM = 2
CHAIN_STREAM = 3
PROBLEM_STREAM = 4
INSTANCE_STREAM = 5


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    if not 0 <= seed <= MAX_SEED:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def random_ids(n: int, seed: int, id_range: int = 0) -> Sequence[int]:
    """n distinct identifiers drawn from [0, id_range), default range n**3."""
    id_range = id_range or min(max(n ** 3, n), np.iinfo(np.int64).max)
    rng = make_rng(seed, IDS_STREAM)
    return [int(i) for i in rng.choice(id_range, size=n, replace=False)]


def node_bits(n: int, seed: int) -> np.ndarray:
    rng = make_rng(seed, BITS_STREAM)
    return rng.integers(0, np.iinfo(np.uint64).max, size=n, dtype=np.uint64, endpoint=True)
