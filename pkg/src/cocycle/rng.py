"""Seeded random streams.

Every sampler derives its randomness from a single integer seed through
numpy's ``SeedSequence`` with a fixed spawn key per named substream, feeding
a PCG64 generator. The mapping ``(seed, stream) -> draws`` is stable across
runs and platforms, and distinct streams are statistically independent.
"""
import numpy as np

# substream keys
PATH = 0
ABOVE = 1
BELOW = 2
BOUNDARY = 3
INITIAL = 4
MOVES = 5


def stream(seed: int, key: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seeds must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(key),))
    return np.random.Generator(np.random.PCG64(ss))


def fair_bits(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform 0/1 array of ``shape`` (uint8), eight coins per drawn byte."""
    n = int(np.prod(shape))
    nbytes = (n + 7) // 8
    raw = rng.integers(0, 256, size=nbytes, dtype=np.uint8)
    return np.unpackbits(raw, count=n).reshape(shape)


def bernoulli(rng: np.random.Generator, p: float, shape) -> np.ndarray:
    return (rng.random(shape) < p).astype(np.uint8)


def derive_seed(base: int, *keys: int) -> int:
    """Deterministic 63-bit child seed, e.g. for experiment jobs."""
    ss = np.random.SeedSequence(entropy=int(base), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
