"""Deterministic named random streams derived from one base seed.

Every stochastic routine in the package takes an integer seed and pulls
its randomness from streams created here.  A stream is identified by the
base seed, a purpose string, and optional integer indices (trial number,
batch number, ...).  Distinct purposes or indices give statistically
independent generators, and the derivation is stable across runs,
platforms, and process counts, so results never depend on the order in
which streams happen to be consumed.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _purpose_key(purpose: str) -> int:
    digest = hashlib.sha256(purpose.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _sequence(seed: int, purpose: str, indices: tuple[int, ...]) -> np.random.SeedSequence:
    for i in indices:
        if i < 0:
            raise ValueError(f"stream index must be non-negative, got {i}")
    key = (_purpose_key(purpose),) + tuple(int(i) for i in indices)
    return np.random.SeedSequence(entropy=int(seed), spawn_key=key)


def stream(seed: int, purpose: str, *indices: int) -> np.random.Generator:
    """Return the generator for (seed, purpose, *indices)."""
    return np.random.Generator(np.random.PCG64(_sequence(seed, purpose, indices)))


def child_seed(seed: int, purpose: str, *indices: int) -> int:
    """Return a derived integer seed, for APIs that want a seed rather than a stream."""
    state = _sequence(seed, purpose, indices).generate_state(2, np.uint64)
    return int(state[0])
