"""Seeded random streams for protocol runs and Monte Carlo trials."""

from typing import Optional

import numpy as np

SEED_MASK = (1 << 64) - 1


class RandomSource:
    """Reproducible random stream confined to a single protocol run.

    Identical seeds produce identical draw sequences. A source is not shared
    between runs; use ``derive`` to get an independent stream per trial.
    """

    def __init__(self, seed: int, index: Optional[int] = None):
        """Create a stream.

        Args:
            seed: 64-bit seed
            index: Optional trial index; (seed, index) pairs give independent streams
        """
        self.seed = int(seed) & SEED_MASK
        self.index = index
        entropy = [self.seed] if index is None else [self.seed, int(index)]
        self._generator = np.random.default_rng(np.random.SeedSequence(entropy))

    @classmethod
    def derive(cls, seed: int, index: int) -> "RandomSource":
        """Independent stream for trial ``index`` under master ``seed``."""
        return cls(seed, index)

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def uniform(self) -> float:
        """One draw from [0, 1)."""
        return float(self._generator.random())

    def uniforms(self, size: int) -> np.ndarray:
        return self._generator.random(size)

    def bits(self, size: int) -> np.ndarray:
        """``size`` fair bits as a uint8 array."""
        return self._generator.integers(0, 2, size=size, dtype=np.uint8)

    def integer(self, high: int) -> int:
        """Uniform integer in [0, high)."""
        return int(self._generator.integers(0, high))

    def bernoulli(self, p: float) -> bool:
        """True with probability ``p``; draws nothing when p is 0."""
        if p <= 0.0:
            return False
        return self.uniform() < p

    def choose_indices(self, population: int, count: int) -> np.ndarray:
        """``count`` distinct indices from ``range(population)``, sorted."""
        return np.sort(self._generator.choice(population, size=count, replace=False))

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, index={self.index})"
