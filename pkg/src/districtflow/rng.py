"""Deterministic random streams for reproducible runs.

Every random decision in the engine draws from a Generator obtained through
substream(), so a (seed, path) coordinate produces the same values no matter
what ran before it. Chains derive one substream per (step, attempt), which
keeps the record stream byte-stable even if internal evaluation order moves.
"""

from __future__ import annotations

import numpy as np


def substream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator addressed by seed and path coordinates."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=path))
