"""Seed derivation for reproducible Monte Carlo.

Every stochastic routine takes a single root seed.  Independent streams are
derived from ``(root, key..., batch)`` with a splitmix64 chain, so a batch
always sees the same random numbers no matter which worker evaluates it or
how many workers there are.  Results are accumulated in batch order.
"""
from __future__ import annotations

import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

MASK64 = (1 << 64) - 1
DEFAULT_BATCH = 1 << 16

T = TypeVar("T")


def splitmix64(state: int) -> int:
    """One splitmix64 output for ``state`` (the generator's increment is applied first)."""
    z = (state + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _key_word(key) -> int:
    if isinstance(key, (int, np.integer)):
        return int(key) & MASK64
    data = str(key).encode("utf-8")
    return (zlib.crc32(data) << 32 | zlib.adler32(data)) & MASK64


def derive_seed(root: int, *keys) -> int:
    """Fold ``keys`` into ``root`` with splitmix64; returns a 64-bit integer."""
    state = splitmix64(int(root) & MASK64)
    for key in keys:
        state = splitmix64(state ^ _key_word(key))
    return state


def make_rng(root: int, *keys) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(root, *keys)))


def batch_sizes(samples: int, batch: int = DEFAULT_BATCH) -> list[int]:
    full, rest = divmod(int(samples), batch)
    return [batch] * full + ([rest] if rest else [])


def ordered_map(fn: Callable[..., T], items: Sequence, workers: int | None = None) -> list[T]:
    """Map ``fn`` over ``items``; results come back in input order."""
    if not workers or workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def batched(samples: int, root: int, key: str, fn: Callable[[np.random.Generator, int], T],
            workers: int | None = None, batch: int = DEFAULT_BATCH) -> list[T]:
    """Run ``fn(rng, n)`` per batch with a batch-indexed sub-seed."""
    sizes = batch_sizes(samples, batch)

    def run(item):
        index, n = item
        return fn(make_rng(root, key, index), n)

    return ordered_map(run, list(enumerate(sizes)), workers)


def uniform_ball(rng: np.random.Generator, n: int, center, radius: float) -> np.ndarray:
    """``n`` points uniform in the ball ``B(center, radius)``."""
    center = np.asarray(center, dtype=float)
    d = center.shape[0]
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1)[:, None]
    r = radius * rng.random(n) ** (1.0 / d)
    return center + g * r[:, None]


def uniform_sphere(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    g = rng.standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1)[:, None]


def iter_seeds(root: int, key: str, count: int) -> Iterable[int]:
    for i in range(count):
        yield derive_seed(root, key, i)
