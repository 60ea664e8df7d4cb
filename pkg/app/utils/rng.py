import numpy as np

from app.schemas.experiment import RngSeed


def make_rng(seed: RngSeed) -> np.random.Generator:
    """Counter-based Philox stream keyed by (seed, stream_id)."""
    key = np.array([seed.seed, seed.stream_id], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sweep_stream_id(c: int, run: int) -> int:
    """Stream id owned by run ``run`` at community count ``c`` of a network sweep."""
    return (c << 32) | run
