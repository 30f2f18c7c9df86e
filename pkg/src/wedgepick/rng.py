"""Seeded random streams.

Every stochastic component draws from a ``random.Random`` (Mersenne Twister)
whose state is derived from a numpy ``SeedSequence``.  The pair identifies
the generator; it is written into trace headers so recorded traces can be
regenerated bit-for-bit.
"""

from __future__ import annotations

import random

import numpy as np

RNG_ALGORITHM = "mt19937+seedsequence/v1"


def make_rng(seed: int | np.random.SeedSequence) -> random.Random:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    words = ss.generate_state(8, dtype=np.uint32)
    return random.Random(int.from_bytes(words.tobytes(), "little"))


def spawn_rngs(seed: int, count: int) -> list[random.Random]:
    """Independent child streams, e.g. one per Monte-Carlo trial batch."""
    return [make_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]
