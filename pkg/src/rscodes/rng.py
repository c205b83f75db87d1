"""Seeded randomness.

Every simulator draws from numpy's PCG64 generator.  Work is split into
fixed-size chunks; chunk c of a run with master seed s uses the stream seeded
by SeedSequence([s, c]), so a chunked parallel run reproduces a serial one.
"""

from __future__ import annotations

import numpy as np

CHUNK = 10_000


def stream(master: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(master) & (2**64 - 1), int(index)])))


def chunks(total: int, size: int = CHUNK):
    """(chunk index, count) pairs covering ``total`` trials."""
    c = 0
    done = 0
    while done < total:
        m = min(size, total - done)
        yield c, m
        c += 1
        done += m
