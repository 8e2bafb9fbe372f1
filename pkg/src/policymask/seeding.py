"""Deterministic seed derivation.

Every stochastic component takes one integer seed and derives private
streams from it, so a single top-level seed pins the whole pipeline.
"""

import zlib

import numpy as np
import torch


def derive_seed(seed: int, *tags) -> int:
    """Stable 31-bit child seed for (seed, tags).

    Tags may be strings or ints; the mapping is fixed across processes
    (no use of Python's randomized hash).
    """
    keys = []
    for t in tags:
        if isinstance(t, (int, np.integer)):
            keys.append(int(t) & 0x7FFFFFFF)
        else:
            keys.append(zlib.crc32(str(t).encode("utf-8")))
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(keys))
    return int(ss.generate_state(1)[0] & 0x7FFFFFFF)


def rng_for(seed: int, *tags) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(seed, *tags)))


def torch_generator(seed: int, *tags) -> torch.Generator:
    g = torch.Generator()
    g.manual_seed(derive_seed(seed, *tags))
    return g


class torch_seeded:
    """Context manager: run a block under a seeded global torch RNG.

    Module construction uses torch's global RNG for parameter init; this
    forks the global state so surrounding code is unaffected.
    """

    def __init__(self, seed: int, *tags):
        self.seed = derive_seed(seed, *tags)

    def __enter__(self):
        self._state = torch.random.get_rng_state()
        torch.manual_seed(self.seed)
        return self

    def __exit__(self, *exc):
        torch.random.set_rng_state(self._state)
        return False
