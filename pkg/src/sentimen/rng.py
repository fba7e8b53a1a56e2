"""Seeded random streams.

Every randomized operation draws from numpy's ``Generator`` over the PCG64
bit generator, seeded through ``SeedSequence``.  Child streams (per fold,
per tuning candidate) are derived from the master seed plus integer keys so
that results never depend on execution order.
"""

import numpy as np

DEFAULT_SEED = 42
ALGORITHM = "numpy.PCG64/SeedSequence"


def make_rng(seed=DEFAULT_SEED, *keys):
    """Return a PCG64 generator for ``seed`` and optional derivation keys."""
    if seed is None:
        seed = DEFAULT_SEED
    if int(seed) < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    entropy = [int(seed), *(int(k) for k in keys)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def derive_seed(seed, *keys):
    """Deterministic 32-bit child seed for ``(seed, *keys)``."""
    ss = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return int(ss.generate_state(1, dtype=np.uint32)[0])
