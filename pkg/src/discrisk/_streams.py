"""Reproducible chunked replication.

Replicates are split into fixed-size chunks.  Chunk ``i`` draws from a
generator seeded by the ``i``-th child of the master `SeedSequence`, and
results are stacked in chunk order, so output is bit-identical for any
number of workers.
"""
from __future__ import annotations

import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import DegenerateSampleError, DesignError

CHUNK_SIZE = 256
MAX_SKIP_FRACTION = 0.01

# (rng) -> row of statistics; may raise DegenerateSampleError / DesignError.
Draw = Callable[[np.random.Generator], np.ndarray]


def master_seed(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy)


def _run_chunk(draw: Draw, seed: np.random.SeedSequence, size: int,
               skip_limit: int) -> tuple[np.ndarray, int]:
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []
    skipped = 0
    while len(rows) < size:
        try:
            rows.append(np.atleast_1d(draw(rng)))
        except (DegenerateSampleError, DesignError):
            skipped += 1
            if skipped > skip_limit:
                break
    return np.array(rows, dtype=float).reshape(len(rows), -1), skipped


def _run_chunk_star(args):
    return _run_chunk(*args)


def run_chunked(draw: Draw, m: int, seed, workers: int = 1) -> tuple[np.ndarray, int]:
    """Run `draw` for `m` replicates; return the stacked rows and the skip count.

    Replicates raising `DegenerateSampleError` or `DesignError` are redrawn
    from the same stream; more than 1% skips in total aborts.  `draw` must
    be picklable when ``workers > 1``.
    """
    n_chunks = math.ceil(m / CHUNK_SIZE)
    children = master_seed(seed).spawn(n_chunks)
    sizes = [min(CHUNK_SIZE, m - i * CHUNK_SIZE) for i in range(n_chunks)]
    skip_limit = math.floor(MAX_SKIP_FRACTION * m)
    args = [(draw, child, size, skip_limit) for child, size in zip(children, sizes)]
    if workers > 1 and n_chunks > 1:
        with ProcessPoolExecutor(max_workers=min(workers, n_chunks)) as pool:
            results = list(pool.map(_run_chunk_star, args))
    else:
        results = [_run_chunk(*a) for a in args]
    skipped = sum(r[1] for r in results)
    if skipped > skip_limit:
        raise DegenerateSampleError(
            f"{skipped} of {m} replicates were degenerate (limit {skip_limit})"
        )
    return np.vstack([r[0] for r in results]), skipped
